#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expoly/constant.hpp"
#include "expoly/errors.hpp"

namespace expoly {

// Univariate polynomial in z over ConstExpr. Dense representation; trailing
// coefficients whose zero test returns ZERO are stripped, so the leading
// coefficient of a non-zero polynomial is always certified NONZERO.
class Poly {
public:
    Poly() = default;
    explicit Poly(ConstExpr c0) {
        if (!c0.is_zero()) c_.push_back(std::move(c0));
        normalize(false);
    }

    static Poly z() { return from_coeffs({ConstExpr(), ConstExpr::integer(1)}); }
    static Poly constant(ConstExpr c) { return Poly(std::move(c)); }
    static Poly from_coeffs(std::vector<ConstExpr> coeffs) {
        Poly p;
        p.c_ = std::move(coeffs);
        p.normalize(false);
        return p;
    }
    // monomial c * z^k
    static Poly monomial(ConstExpr c, unsigned k) {
        std::vector<ConstExpr> v(k + 1);
        v[k] = std::move(c);
        return from_coeffs(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    // degree of the zero polynomial is the sentinel -1
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const ConstExpr& coeff(size_t k) const {
        static const ConstExpr kZero;
        return k < c_.size() ? c_[k] : kZero;
    }
    const ConstExpr& leading() const {
        if (c_.empty()) throw DomainError("leading coefficient of zero polynomial");
        return c_.back();
    }
    const std::vector<ConstExpr>& coeffs() const { return c_; }

    bool has_params() const {
        for (const auto& c : c_)
            if (c.has_params()) return true;
        return false;
    }

    Poly operator-() const {
        Poly r;
        r.c_.reserve(c_.size());
        for (const auto& c : c_) r.c_.push_back(-c);
        return r;  // stripping unaffected by negation
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<ConstExpr> v(std::max(a.c_.size(), b.c_.size()));
        for (size_t k = 0; k < v.size(); ++k) v[k] = a.coeff(k) + b.coeff(k);
        return from_coeffs(std::move(v));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<ConstExpr> v(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
        Poly r;
        r.c_ = std::move(v);
        // the top coefficient is a product of two certified NONZERO values
        r.normalize(true);
        return r;
    }

    Poly scaled(const ConstExpr& s) const {
        std::vector<ConstExpr> v;
        v.reserve(c_.size());
        for (const auto& c : c_) v.push_back(c * s);
        return from_coeffs(std::move(v));
    }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<ConstExpr> v(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k)
            v[k - 1] = c_[k] * ConstExpr::integer(static_cast<long>(k));
        Poly r;
        r.c_ = std::move(v);
        r.normalize(true);  // k * leading stays NONZERO
        return r;
    }

    // p(z+c) by Horner expansion, exact
    Poly taylor_shift(const ConstExpr& c) const {
        Poly zc = z() + Poly(c);
        Poly r;
        for (size_t k = c_.size(); k-- > 0;) r = r * zc + Poly(c_[k]);
        return r;
    }

    // p(z0), exact Horner
    ConstExpr eval_at(const ConstExpr& z0) const {
        ConstExpr r;
        for (size_t k = c_.size(); k-- > 0;) r = r * z0 + c_[k];
        return r;
    }

    ComplexInterval eval(const ComplexInterval& z0, unsigned digits = 50,
                         const ParamEnv& env = ParamEnv()) const {
        ComplexInterval r(z0.prec());
        for (size_t k = c_.size(); k-- > 0;)
            r = r * z0 + c_[k].eval(digits, env);
        return r;
    }

    // p = v z^t + rest with deg rest < t
    struct LeadingSplit;
    LeadingSplit split_leading() const;

    // coefficient-wise semantic equality; never throws on UNDECIDED
    bool equals(const Poly& o) const {
        size_t n = std::max(c_.size(), o.c_.size());
        for (size_t k = 0; k < n; ++k)
            if (!(coeff(k) - o.coeff(k)).is_zero()) return false;
        return true;
    }
    bool identical(const Poly& o) const { return compare(*this, o) == 0; }

    static int compare(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size() ? -1 : 1;
        for (size_t k = a.c_.size(); k-- > 0;)
            if (int c = ConstExpr::compare(a.c_[k], b.c_[k])) return c;
        return 0;
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (size_t k = c_.size(); k-- > 0;) {
            if (c_[k].is_zero()) continue;
            std::string piece = term_str(c_[k], k);
            if (out.empty()) {
                out = piece;
            } else if (piece.size() > 1 && piece[0] == '-') {
                out += " - " + piece.substr(1);
            } else {
                out += " + " + piece;
            }
        }
        return out;
    }

private:
    std::vector<ConstExpr> c_;

    void normalize(bool top_known_nonzero) {
        while (!c_.empty()) {
            if (top_known_nonzero && c_.size() >= 1) {
                // caller certifies the top coefficient is non-zero
                if (!c_.back().is_zero()) break;
                c_.pop_back();
                top_known_nonzero = false;
                continue;
            }
            Ternary t = c_.back().zero_test();
            if (t == Ternary::ZERO) {
                c_.pop_back();
            } else if (t == Ternary::NONZERO) {
                break;
            } else {
                throw UndecidedError("undecidable degree: leading coefficient " +
                                     c_.back().str());
            }
        }
    }

    static std::string term_str(const ConstExpr& c, size_t k) {
        std::string zs = k == 0 ? "" : (k == 1 ? "z" : "z^" + std::to_string(k));
        if (k == 0) return coeff_str(c);
        if (c.is_one()) return zs;
        if ((-c).is_one()) return "-" + zs;
        return coeff_str(c) + "*" + zs;
    }

    static std::string coeff_str(const ConstExpr& c) {
        std::string s = c.str();
        // parenthesize sums so the string reparses inside a product
        if (c.rep()->num.size() > 1 && detail::tpoly_is_one(c.rep()->den))
            return "(" + s + ")";
        return s;
    }
};

struct Poly::LeadingSplit {
    unsigned t;
    ConstExpr v;
    Poly rest;
};

inline Poly::LeadingSplit Poly::split_leading() const {
    if (is_zero()) throw DomainError("split_leading on zero polynomial");
    LeadingSplit s;
    s.t = static_cast<unsigned>(degree());
    s.v = leading();
    std::vector<ConstExpr> v(c_.begin(), c_.end() - 1);
    s.rest = from_coeffs(std::move(v));
    return s;
}

// ---- gcd / squarefree machinery over the exact constant field ---------

namespace polydetail {

// quotient and remainder; leading coefficient of b is certified NONZERO
inline std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    Poly rem = a;
    Poly quot;
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        unsigned shift = static_cast<unsigned>(rem.degree() - b.degree());
        ConstExpr factor = rem.leading() / b.leading();
        Poly t = Poly::monomial(factor, shift);
        quot = quot + t;
        rem = rem - t * b;
    }
    return {quot, rem};
}

inline Poly monic(const Poly& p) {
    if (p.is_zero()) return p;
    return p.scaled(ConstExpr::integer(1) / p.leading());
}

inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divrem(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw DomainError("polynomial division is not exact");
    return q;
}

// number of distinct complex roots = degree of the squarefree part
inline unsigned distinct_root_count(const Poly& p) {
    if (p.is_zero()) throw DomainError("root count of zero polynomial");
    if (p.degree() == 0) return 0;
    Poly g = gcd(p, p.derivative());
    Poly sf = exact_div(p, g);
    return static_cast<unsigned>(sf.degree());
}

}  // namespace polydetail

// card2 = #{distinct roots shared by p and p'}, card3 adds p''. Exact gcd
// with three-valued pivots; any UNDECIDED aborts rather than guessing.
inline std::pair<unsigned, unsigned> multiple_zero_cardinality(const Poly& p) {
    if (p.has_params())
        throw DomainError("multiple_zero_cardinality requires parameter-free coefficients");
    if (p.is_zero()) throw DomainError("multiple_zero_cardinality of zero polynomial");
    try {
        Poly d1 = p.derivative();
        unsigned card2 = 0, card3 = 0;
        if (!d1.is_zero()) {
            Poly g2 = polydetail::gcd(p, d1);
            if (g2.degree() > 0) card2 = polydetail::distinct_root_count(g2);
            Poly d2 = d1.derivative();
            if (!d2.is_zero() && g2.degree() > 0) {
                Poly g3 = polydetail::gcd(g2, d2);
                if (g3.degree() > 0) card3 = polydetail::distinct_root_count(g3);
            }
        }
        return {card2, card3};
    } catch (const UndecidedError& e) {
        throw UndecidedError("undecidable cardinality: " + std::string(e.what()));
    }
}

}  // namespace expoly
