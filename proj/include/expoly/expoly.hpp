#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expoly/constant.hpp"
#include "expoly/errors.hpp"
#include "expoly/poly.hpp"

namespace expoly {

// One summand P(z) e^{Q(z)}. The exponent's constant term is always exactly
// zero: e^{Q(0)} is folded into the coefficient polynomial, which is what
// makes the flat form canonical.
struct ExpTerm {
    Poly coeff;
    Poly exponent;
};

class ExPoly;
struct NormalizedView;

// Exponential polynomial as a flat set of terms with pairwise distinct
// exponents; the empty set is the canonical zero.
class ExPoly {
public:
    ExPoly() = default;

    static ExPoly from_poly(Poly p) {
        ExPoly r;
        if (!p.is_zero()) r.terms_.push_back({std::move(p), Poly{}});
        return r;
    }
    static ExPoly constant(ConstExpr c) { return from_poly(Poly(std::move(c))); }

    // coeff * e^{exponent}; the exponent's constant part is folded away
    static ExPoly term(Poly coeff, Poly exponent) {
        if (coeff.is_zero()) return {};
        ConstExpr k = exponent.coeff(0);
        if (!k.is_zero()) {
            coeff = coeff.scaled(ConstExpr::exp(k));
            exponent = exponent - Poly(k);
        }
        if (coeff.is_zero()) return {};
        ExPoly r;
        r.terms_.push_back({std::move(coeff), std::move(exponent)});
        return r;
    }

    const std::vector<ExpTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // true when the whole value is an ordinary polynomial in z
    bool is_poly() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
    }
    Poly as_poly() const {
        if (terms_.empty()) return {};
        if (!is_poly()) throw DomainError("not an ordinary polynomial");
        return terms_[0].coeff;
    }

    bool has_params() const {
        for (const auto& t : terms_)
            if (t.coeff.has_params() || t.exponent.has_params()) return true;
        return false;
    }

    ExPoly operator-() const {
        ExPoly r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({-t.coeff, t.exponent});
        return r;
    }

    friend ExPoly operator+(const ExPoly& a, const ExPoly& b) {
        ExPoly r = a;
        for (const auto& t : b.terms_) r.accumulate(t.coeff, t.exponent);
        r.sort_terms();
        return r;
    }
    friend ExPoly operator-(const ExPoly& a, const ExPoly& b) { return a + (-b); }

    friend ExPoly operator*(const ExPoly& a, const ExPoly& b) {
        ExPoly r;
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_)
                r.accumulate(ta.coeff * tb.coeff, ta.exponent + tb.exponent);
        r.sort_terms();
        return r;
    }

    ExPoly scaled(const ConstExpr& s) const {
        if (s.is_zero()) return {};
        ExPoly r;
        for (const auto& t : terms_) {
            Poly c = t.coeff.scaled(s);
            if (!c.is_zero()) r.terms_.push_back({std::move(c), t.exponent});
        }
        return r;
    }

    ExPoly pow(unsigned k) const {
        ExPoly acc = constant(ConstExpr::integer(1));
        ExPoly base = *this;
        while (k) {
            if (k & 1) acc = acc * base;
            k >>= 1;
            if (k) base = base * base;
        }
        return acc;
    }

    // term-wise (P e^Q)' = (P' + P Q') e^Q
    ExPoly derivative() const {
        ExPoly r;
        for (const auto& t : terms_) {
            Poly c = t.coeff.derivative() + t.coeff * t.exponent.derivative();
            if (!c.is_zero()) r.accumulate(c, t.exponent);
        }
        r.sort_terms();
        return r;
    }

    ExPoly derivative(unsigned order) const {
        ExPoly r = *this;
        for (unsigned k = 0; k < order; ++k) r = r.derivative();
        return r;
    }

    // f(z + c), exact
    ExPoly shift(const ConstExpr& c) const {
        ExPoly r;
        for (const auto& t : terms_) {
            ExPoly piece = term(t.coeff.taylor_shift(c), t.exponent.taylor_shift(c));
            for (const auto& pt : piece.terms_) r.accumulate(pt.coeff, pt.exponent);
        }
        r.sort_terms();
        return r;
    }

    ComplexInterval eval(const ComplexInterval& z0, unsigned digits = 50,
                         const ParamEnv& env = ParamEnv()) const {
        ComplexInterval acc(z0.prec());
        for (const auto& t : terms_)
            acc = acc + t.coeff.eval(z0, digits, env) *
                            t.exponent.eval(z0, digits, env).exp();
        return acc;
    }

    bool equals(const ExPoly& o) const { return (*this - o).is_zero(); }

    NormalizedView normalized_view() const;

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& t : terms_) {
            std::string piece;
            if (t.exponent.is_zero()) {
                piece = t.coeff.str();
            } else if (t.coeff.is_constant() && t.coeff.coeff(0).is_one()) {
                piece = "exp(" + t.exponent.str() + ")";
            } else if (t.coeff.is_constant() && (-t.coeff.coeff(0)).is_one()) {
                piece = "-exp(" + t.exponent.str() + ")";
            } else {
                std::string cs = t.coeff.str();
                if (cs.find(" + ") != std::string::npos ||
                    cs.find(" - ") != std::string::npos)
                    cs = "(" + cs + ")";
                piece = cs + "*exp(" + t.exponent.str() + ")";
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
    std::vector<ExpTerm> terms_;

    // merge (coeff, exponent) into the term set by semantic exponent equality
    void accumulate(const Poly& coeff, const Poly& exponent) {
        if (coeff.is_zero()) return;
        for (size_t k = 0; k < terms_.size(); ++k) {
            if (terms_[k].exponent.equals(exponent)) {
                Poly merged = terms_[k].coeff + coeff;  // may throw UndecidedError
                if (merged.is_zero())
                    terms_.erase(terms_.begin() + static_cast<long>(k));
                else
                    terms_[k].coeff = std::move(merged);
                return;
            }
        }
        terms_.push_back({coeff, exponent});
    }

    void sort_terms() {
        std::sort(terms_.begin(), terms_.end(), [](const ExpTerm& a, const ExpTerm& b) {
            return Poly::compare(a.exponent, b.exponent) < 0;
        });
    }

    friend struct NormalizedView;
};

// The regrouped view f = H0 + sum_j H_j e^{omega_j z^t}: t is the top
// exponent degree, the omega_j are the pairwise distinct leading exponent
// coefficients, and H0 collects everything of lower exponent degree.
struct NormalizedView {
    unsigned t = 0;  // 0 when f is an ordinary polynomial (m == 0)
    ExPoly h0;
    std::vector<std::pair<ConstExpr, ExPoly>> groups;  // (omega_j, H_j)

    size_t m() const { return groups.size(); }

    ExPoly reconstruct() const {
        ExPoly f = h0;
        for (const auto& [w, h] : groups)
            f = f + h * ExPoly::term(Poly(ConstExpr::integer(1)),
                                     Poly::monomial(w, t));
        return f;
    }
};

inline NormalizedView ExPoly::normalized_view() const {
    if (terms_.empty()) throw DomainError("normalized view of the zero function");
    NormalizedView v;
    int t = 0;
    for (const auto& tm : terms_) t = std::max(t, tm.exponent.degree());
    if (t <= 0) {  // ordinary polynomial
        v.t = 0;
        v.h0 = *this;
        return v;
    }
    v.t = static_cast<unsigned>(t);
    for (const auto& tm : terms_) {
        if (tm.exponent.degree() < t) {
            v.h0 = v.h0 + ExPoly::term(tm.coeff, tm.exponent);
            continue;
        }
        ConstExpr w = tm.exponent.leading();
        ExPoly part = ExPoly::term(
            tm.coeff, tm.exponent - Poly::monomial(w, v.t));
        bool merged = false;
        for (auto& [gw, gh] : v.groups) {
            if (gw.equals(w)) {
                gh = gh + part;
                merged = true;
                break;
            }
        }
        if (!merged) v.groups.push_back({std::move(w), std::move(part)});
    }
    // deterministic order and certified pairwise distinctness
    std::sort(v.groups.begin(), v.groups.end(), [](const auto& a, const auto& b) {
        return ConstExpr::compare(a.first, b.first) < 0;
    });
    for (size_t i = 0; i < v.groups.size(); ++i)
        for (size_t j = i + 1; j < v.groups.size(); ++j) {
            Ternary d = (v.groups[i].first - v.groups[j].first).zero_test();
            if (d != Ternary::NONZERO)
                throw UndecidedError("distinctness of leading exponent coefficients " +
                                     v.groups[i].first.str() + " vs " +
                                     v.groups[j].first.str());
        }
    return v;
}

}  // namespace expoly
