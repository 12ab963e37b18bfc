#pragma once

#include <string>
#include <utility>
#include <vector>

#include "expoly/constant.hpp"
#include "expoly/errors.hpp"
#include "expoly/expoly.hpp"

namespace expoly {

// One summand b * f^(r)(z + c) of a delay-differential operator.
struct OpTerm {
    ConstExpr weight;
    unsigned order = 0;
    ConstExpr shift;
};

// L(z,f) = sum_i b_i f^(r_i)(z + c_i). The normal form prescribes a term
// with r = 0, c = 0 in front; operators lacking one are representable but
// flagged non-conforming.
class DelayDiffOp {
public:
    explicit DelayDiffOp(std::vector<OpTerm> terms) {
        for (auto& t : terms) {
            if (t.weight.zero_test() == Ternary::ZERO) continue;
            bool merged = false;
            for (auto& u : terms_) {
                if (u.order == t.order && u.shift.equals(t.shift)) {
                    u.weight = u.weight + t.weight;
                    merged = true;
                    break;
                }
            }
            if (!merged) terms_.push_back(std::move(t));
        }
        std::erase_if(terms_, [](const OpTerm& t) {
            return t.weight.zero_test() == Ternary::ZERO;
        });
        if (terms_.empty())
            throw DomainError("delay-differential operator is identically zero");
        std::sort(terms_.begin(), terms_.end(), [](const OpTerm& a, const OpTerm& b) {
            if (a.order != b.order) return a.order < b.order;
            return ConstExpr::compare(a.shift, b.shift) < 0;
        });
        conforming_ = false;
        for (const auto& t : terms_)
            if (t.order == 0 && t.shift.is_zero()) conforming_ = true;
    }

    // forward difference f(z+c) - f(z)
    static DelayDiffOp delta(const ConstExpr& c) {
        Ternary z = c.zero_test();
        if (z == Ternary::ZERO) throw DomainError("delta shift must be non-zero");
        if (z == Ternary::UNDECIDED)
            throw UndecidedError("delta shift " + c.str() + " could be zero");
        return DelayDiffOp({{ConstExpr::integer(-1), 0, ConstExpr()},
                            {ConstExpr::integer(1), 0, c}});
    }

    const std::vector<OpTerm>& terms() const { return terms_; }
    bool conforming() const { return conforming_; }

    // weight of the prescribed r=0, c=0 term, or 0 when absent
    ConstExpr b0() const {
        for (const auto& t : terms_)
            if (t.order == 0 && t.shift.is_zero()) return t.weight;
        return ConstExpr();
    }

    unsigned max_order() const {
        unsigned m = 0;
        for (const auto& t : terms_) m = std::max(m, t.order);
        return m;
    }

    // shifts c_i of the non-prescribed terms (indices 1..k in the normal form)
    std::vector<ConstExpr> tail_shifts() const {
        std::vector<ConstExpr> out;
        for (const auto& t : terms_)
            if (!(t.order == 0 && t.shift.is_zero())) out.push_back(t.shift);
        return out;
    }

    ExPoly apply(const ExPoly& f) const {
        std::vector<ExPoly> derivs(max_order() + 1);
        derivs[0] = f;
        for (unsigned k = 1; k < derivs.size(); ++k)
            derivs[k] = derivs[k - 1].derivative();
        ExPoly acc;
        for (const auto& t : terms_) {
            const ExPoly& d = derivs[t.order];
            ExPoly s = t.shift.is_zero() ? d : d.shift(t.shift);
            acc = acc + s.scaled(t.weight);
        }
        return acc;
    }

    std::string str() const {
        std::string out;
        for (const auto& t : terms_) {
            std::string fpart = "f";
            if (t.order == 1)
                fpart = "f'";
            else if (t.order == 2)
                fpart = "f''";
            else if (t.order > 2)
                fpart = "f^(" + std::to_string(t.order) + ")";
            std::string arg = t.shift.is_zero() ? "(z)" : "(z + " + t.shift.str() + ")";
            std::string piece;
            if (t.weight.is_one())
                piece = fpart + arg;
            else if ((-t.weight).is_one())
                piece = "-" + fpart + arg;
            else {
                std::string ws = t.weight.str();
                if (ws.find(" + ") != std::string::npos ||
                    ws.find(" - ") != std::string::npos)
                    ws = "(" + ws + ")";
                piece = ws + "*" + fpart + arg;
            }
            if (out.empty())
                out = piece;
            else if (piece[0] == '-')
                out += " - " + piece.substr(1);
            else
                out += " + " + piece;
        }
        return out;
    }

private:
    std::vector<OpTerm> terms_;
    bool conforming_ = false;
};

}  // namespace expoly
