#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "expoly/errors.hpp"
#include "expoly/interval.hpp"

namespace expoly {

using Rat = mpq_class;

inline int rat_cmp(const Rat& a, const Rat& b) { return cmp(a, b); }

// floor(a) for rational a, exact
inline mpz_class rat_floor(const Rat& a) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    return q;
}

// Gaussian rational re + im*i; the coefficient field of the canonical form.
struct GRat {
    Rat re, im;

    GRat() : re(0), im(0) {}
    GRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    explicit GRat(long v) : re(v), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    GRat operator-() const { return {-re, -im}; }
    GRat operator+(const GRat& o) const { return {re + o.re, im + o.im}; }
    GRat operator-(const GRat& o) const { return {re - o.re, im - o.im}; }
    GRat operator*(const GRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GRat conj() const { return {re, -im}; }
    GRat inv() const {
        Rat n = re * re + im * im;
        if (n == 0) throw DivisionByZero("1/0 in coefficient field");
        return {re / n, -im / n};
    }

    friend int grat_cmp(const GRat& a, const GRat& b) {
        if (int c = rat_cmp(a.re, b.re)) return c;
        return rat_cmp(a.im, b.im);
    }
    bool operator==(const GRat& o) const { return re == o.re && im == o.im; }
};

struct ConstRep;
using ConstPtr = std::shared_ptr<const ConstRep>;
int rep_cmp(const ConstPtr& a, const ConstPtr& b);

// Transcendental generator of the constant field: pi, log(prime) or a free
// parameter. Parameters may carry a NONZERO assumption; the flag is not part
// of the generator's identity.
struct Gen {
    enum class Kind { Pi, LogPrime, Param } kind;
    unsigned long prime = 0;
    std::string name;
    bool param_nonzero = false;

    static Gen pi() { return {Kind::Pi, 0, {}, false}; }
    static Gen log_prime(unsigned long p) { return {Kind::LogPrime, p, {}, false}; }
    static Gen param(std::string n, bool nonzero) {
        return {Kind::Param, 0, std::move(n), nonzero};
    }
};

inline int gen_cmp(const Gen& a, const Gen& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
    case Gen::Kind::Pi: return 0;
    case Gen::Kind::LogPrime:
        return a.prime < b.prime ? -1 : (a.prime > b.prime ? 1 : 0);
    default: return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
    }
}

// Monomial: product of generator powers (Laurent exponents) and at most one
// exponential factor e^w with w a canonical non-zero constant.
struct Mono {
    std::vector<std::pair<Gen, int>> factors;  // sorted by gen, exponents != 0
    ConstPtr exp_arg;                          // null or canonical non-zero w

    bool is_unit() const { return factors.empty() && !exp_arg; }
};

inline int mono_cmp(const Mono& a, const Mono& b) {
    size_t n = std::min(a.factors.size(), b.factors.size());
    for (size_t k = 0; k < n; ++k) {
        if (int c = gen_cmp(a.factors[k].first, b.factors[k].first)) return c;
        if (a.factors[k].second != b.factors[k].second)
            return a.factors[k].second < b.factors[k].second ? -1 : 1;
    }
    if (a.factors.size() != b.factors.size())
        return a.factors.size() < b.factors.size() ? -1 : 1;
    if (!a.exp_arg && !b.exp_arg) return 0;
    if (!a.exp_arg) return -1;
    if (!b.exp_arg) return 1;
    return rep_cmp(a.exp_arg, b.exp_arg);
}

// Polynomial over the generators: sorted term list, no zero coefficients.
using TPoly = std::vector<std::pair<Mono, GRat>>;

inline int tpoly_cmp(const TPoly& a, const TPoly& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t k = 0; k < n; ++k) {
        if (int c = mono_cmp(a[k].first, b[k].first)) return c;
        if (int c = grat_cmp(a[k].second, b[k].second)) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

// Canonical constant: fraction num/den of generator polynomials. den is
// never zero; single-term denominators are folded into num (Laurent
// exponents), multi-term denominators are kept monic.
struct ConstRep {
    TPoly num, den;
};

inline int rep_cmp(const ConstPtr& a, const ConstPtr& b) {
    if (a == b) return 0;
    if (int c = tpoly_cmp(a->num, b->num)) return c;
    return tpoly_cmp(a->den, b->den);
}

namespace detail {

inline TPoly tpoly_one() {
    return {{Mono{}, GRat(1)}};
}

inline bool tpoly_is_one(const TPoly& p) {
    return p.size() == 1 && p[0].first.is_unit() && p[0].second.is_one();
}

inline void tpoly_sort_merge(TPoly& p) {
    std::sort(p.begin(), p.end(), [](const auto& x, const auto& y) {
        return mono_cmp(x.first, y.first) < 0;
    });
    TPoly out;
    out.reserve(p.size());
    for (auto& t : p) {
        if (!out.empty() && mono_cmp(out.back().first, t.first) == 0)
            out.back().second = out.back().second + t.second;
        else
            out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& t) { return t.second.is_zero(); }),
              out.end());
    p = std::move(out);
}

inline TPoly tpoly_add(const TPoly& a, const TPoly& b) {
    TPoly out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = mono_cmp(a[i].first, b[j].first);
        if (c < 0)
            out.push_back(a[i++]);
        else if (c > 0)
            out.push_back(b[j++]);
        else {
            GRat s = a[i].second + b[j].second;
            if (!s.is_zero()) out.push_back({a[i].first, std::move(s)});
            ++i, ++j;
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
}

inline TPoly tpoly_neg(TPoly a) {
    for (auto& t : a) t.second = -t.second;
    return a;
}

struct ExpNorm {
    GRat mult;
    ConstPtr arg;  // null when the whole exponent folded away
};

ExpNorm exp_normalize(const ConstPtr& w);
ConstPtr make_rep(TPoly num, TPoly den);

// product of two monomials; exp-part renormalization can spill a scalar
struct MonoProd {
    Mono mono;
    GRat scale;
};

inline ConstPtr add_reps(const ConstPtr& a, const ConstPtr& b);
inline ConstPtr mul_reps(const ConstPtr& a, const ConstPtr& b);

inline MonoProd mono_mul(const Mono& a, const Mono& b) {
    MonoProd r;
    r.scale = GRat(1);
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        int c = gen_cmp(a.factors[i].first, b.factors[j].first);
        if (c < 0)
            r.mono.factors.push_back(a.factors[i++]);
        else if (c > 0)
            r.mono.factors.push_back(b.factors[j++]);
        else {
            int e = a.factors[i].second + b.factors[j].second;
            Gen g = a.factors[i].first;
            if (g.kind == Gen::Kind::Param)
                g.param_nonzero = g.param_nonzero || b.factors[j].first.param_nonzero;
            if (e != 0) r.mono.factors.push_back({std::move(g), e});
            ++i, ++j;
        }
    }
    for (; i < a.factors.size(); ++i) r.mono.factors.push_back(a.factors[i]);
    for (; j < b.factors.size(); ++j) r.mono.factors.push_back(b.factors[j]);
    if (a.exp_arg && b.exp_arg) {
        ExpNorm en = exp_normalize(add_reps(a.exp_arg, b.exp_arg));
        r.scale = en.mult;
        r.mono.exp_arg = en.arg;
    } else {
        r.mono.exp_arg = a.exp_arg ? a.exp_arg : b.exp_arg;
    }
    return r;
}

inline Mono mono_inv(const Mono& a, GRat& scale_out) {
    Mono r;
    r.factors = a.factors;
    for (auto& f : r.factors) f.second = -f.second;
    if (a.exp_arg) {
        ExpNorm en = exp_normalize(make_rep(tpoly_neg(a.exp_arg->num),
                                            a.exp_arg->den));
        scale_out = scale_out * en.mult;
        r.exp_arg = en.arg;
    }
    return r;
}

inline TPoly tpoly_mul(const TPoly& a, const TPoly& b) {
    TPoly out;
    out.reserve(a.size() * b.size());
    for (const auto& ta : a)
        for (const auto& tb : b) {
            MonoProd mp = mono_mul(ta.first, tb.first);
            GRat c = ta.second * tb.second * mp.scale;
            if (!c.is_zero()) out.push_back({std::move(mp.mono), std::move(c)});
        }
    tpoly_sort_merge(out);
    return out;
}

inline TPoly tpoly_scale(TPoly a, const GRat& s) {
    if (s.is_zero()) return {};
    for (auto& t : a) t.second = t.second * s;
    return a;
}

inline ConstPtr make_rep(TPoly num, TPoly den) {
    if (den.empty()) throw DivisionByZero("denominator is identically zero");
    if (num.empty()) return std::make_shared<ConstRep>(ConstRep{{}, tpoly_one()});
    if (den.size() == 1) {
        if (!den[0].first.is_unit()) {
            GRat scale = den[0].second.inv();
            Mono inv = mono_inv(den[0].first, scale);
            TPoly out;
            out.reserve(num.size());
            for (auto& t : num) {
                MonoProd mp = mono_mul(t.first, inv);
                out.push_back({std::move(mp.mono), t.second * scale * mp.scale});
            }
            tpoly_sort_merge(out);
            return std::make_shared<ConstRep>(ConstRep{std::move(out), tpoly_one()});
        }
        if (!den[0].second.is_one()) {
            num = tpoly_scale(std::move(num), den[0].second.inv());
        }
        return std::make_shared<ConstRep>(ConstRep{std::move(num), tpoly_one()});
    }
    // monic denominator w.r.t. the largest monomial
    GRat lead = den.back().second;
    if (!lead.is_one()) {
        GRat s = lead.inv();
        num = tpoly_scale(std::move(num), s);
        den = tpoly_scale(std::move(den), s);
    }
    return std::make_shared<ConstRep>(ConstRep{std::move(num), std::move(den)});
}

inline ConstPtr add_reps(const ConstPtr& a, const ConstPtr& b) {
    if (tpoly_cmp(a->den, b->den) == 0)
        return make_rep(tpoly_add(a->num, b->num), a->den);
    return make_rep(tpoly_add(tpoly_mul(a->num, b->den), tpoly_mul(b->num, a->den)),
                    tpoly_mul(a->den, b->den));
}

inline ConstPtr mul_reps(const ConstPtr& a, const ConstPtr& b) {
    return make_rep(tpoly_mul(a->num, b->num), tpoly_mul(a->den, b->den));
}

// Root-of-unity and prime-power extraction when building e^w. Applied only
// to fraction-free exponents; everything else stays an opaque atom.
inline ExpNorm exp_normalize(const ConstPtr& w) {
    if (w->num.empty()) return {GRat(1), nullptr};
    if (!tpoly_is_one(w->den)) return {GRat(1), w};
    GRat mult(1);
    TPoly out;
    out.reserve(w->num.size());
    for (const auto& term : w->num) {
        const Mono& m = term.first;
        if (!m.exp_arg && m.factors.size() == 1 && m.factors[0].second == 1) {
            const Gen& g = m.factors[0].first;
            if (g.kind == Gen::Kind::Pi) {
                // e^{pi (x + i y)} = e^{pi x} * e^{i pi (y mod 2)}
                GRat c = term.second;
                Rat y = c.im;
                Rat y2 = y - Rat(2) * Rat(rat_floor(y / 2));
                if (y2 == 0 || y2 * 2 == 1 || y2 == 1 || y2 * 2 == 3) {
                    if (y2 * 2 == 1)
                        mult = mult * GRat(Rat(0), Rat(1));
                    else if (y2 == 1)
                        mult = mult * GRat(Rat(-1), Rat(0));
                    else if (y2 * 2 == 3)
                        mult = mult * GRat(Rat(0), Rat(-1));
                    y2 = 0;
                }
                GRat nc(c.re, y2);
                if (!nc.is_zero()) out.push_back({m, std::move(nc)});
                continue;
            }
            if (g.kind == Gen::Kind::LogPrime) {
                // e^{(x + i y) log p} = p^{floor(x)} e^{(frac(x) + i y) log p}
                GRat c = term.second;
                mpz_class fl = rat_floor(c.re);
                if (fl != 0 && mpz_sizeinbase(fl.get_mpz_t(), 2) <= 20) {
                    mpz_class pw;
                    mpz_class base(g.prime);
                    bool negpow = fl < 0;
                    mpz_class e = negpow ? mpz_class(-fl) : fl;
                    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), e.get_ui());
                    Rat factor = negpow ? Rat(mpz_class(1), pw) : Rat(pw);
                    mult = mult * GRat(factor, Rat(0));
                    GRat nc(c.re - Rat(fl), c.im);
                    if (!nc.is_zero()) out.push_back({m, std::move(nc)});
                    continue;
                }
            }
        }
        out.push_back(term);
    }
    if (out.empty()) return {mult, nullptr};
    return {mult, std::make_shared<ConstRep>(ConstRep{std::move(out), tpoly_one()})};
}

inline bool tpoly_has_params(const TPoly& p);

inline bool mono_has_params(const Mono& m) {
    for (const auto& f : m.factors)
        if (f.first.kind == Gen::Kind::Param) return true;
    if (m.exp_arg)
        return tpoly_has_params(m.exp_arg->num) || tpoly_has_params(m.exp_arg->den);
    return false;
}

inline bool tpoly_has_params(const TPoly& p) {
    for (const auto& t : p)
        if (mono_has_params(t.first)) return true;
    return false;
}

}  // namespace detail

// Assumptions and optional numeric test values for free parameters.
class ParamEnv {
public:
    void declare(const std::string& name, bool nonzero) {
        entries_[name].nonzero = entries_[name].nonzero || nonzero;
    }
    bool is_nonzero(const std::string& name) const {
        auto it = entries_.find(name);
        return it != entries_.end() && it->second.nonzero;
    }
    bool is_declared(const std::string& name) const {
        return entries_.count(name) != 0;
    }
    // assigned test values live behind shared_ptr so the header stays
    // free of a ConstExpr dependency cycle
    void assign(const std::string& name, ConstPtr value) {
        entries_[name].value = std::move(value);
    }
    const ConstPtr* value(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end() || !it->second.value) return nullptr;
        return &it->second.value;
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : entries_) out.push_back(k);
        return out;
    }

private:
    struct Entry {
        bool nonzero = false;
        ConstPtr value;
    };
    std::map<std::string, Entry> entries_;
};

// Exact symbolic complex constant, closed under field operations and exp.
// Values are immutable and always in canonical form.
class ConstExpr {
public:
    ConstExpr() : rep_(zero_rep()) {}
    explicit ConstExpr(ConstPtr rep) : rep_(std::move(rep)) {}

    static ConstExpr integer(long v) { return rational(Rat(v)); }
    static ConstExpr rational(Rat q) { return gaussian(std::move(q), Rat(0)); }
    static ConstExpr rational(long num, long den) { return rational(Rat(num, den)); }
    static ConstExpr gaussian(Rat re, Rat im) {
        GRat c(std::move(re), std::move(im));
        TPoly p;
        if (!c.is_zero()) p.push_back({Mono{}, std::move(c)});
        return ConstExpr(detail::make_rep(std::move(p), detail::tpoly_one()));
    }
    static ConstExpr i() { return gaussian(Rat(0), Rat(1)); }
    static ConstExpr pi() {
        TPoly p{{Mono{{{Gen::pi(), 1}}, nullptr}, GRat(1)}};
        return ConstExpr(detail::make_rep(std::move(p), detail::tpoly_one()));
    }

    // log of a positive rational, decomposed over prime factors
    static ConstExpr log_rational(const Rat& q) {
        if (q <= 0) throw DomainError("log requires a positive rational argument");
        ConstExpr acc;
        acc = add_prime_logs(acc, q.get_num(), 1);
        acc = add_prime_logs(acc, q.get_den(), -1);
        return acc;
    }

    static ConstExpr param(const std::string& name, bool nonzero = false) {
        TPoly p{{Mono{{{Gen::param(name, nonzero), 1}}, nullptr}, GRat(1)}};
        return ConstExpr(detail::make_rep(std::move(p), detail::tpoly_one()));
    }

    static ConstExpr exp(const ConstExpr& w) {
        detail::ExpNorm en = detail::exp_normalize(w.rep_);
        TPoly p;
        if (!en.mult.is_zero()) p.push_back({Mono{{}, en.arg}, en.mult});
        return ConstExpr(detail::make_rep(std::move(p), detail::tpoly_one()));
    }

    const ConstPtr& rep() const { return rep_; }

    bool is_zero() const { return rep_->num.empty(); }
    bool is_one() const {
        return detail::tpoly_is_one(rep_->num) && detail::tpoly_is_one(rep_->den);
    }

    // exact Gaussian-rational view, when the value is one
    std::optional<GRat> as_gaussian() const {
        if (is_zero()) return GRat();
        if (rep_->num.size() == 1 && rep_->num[0].first.is_unit() &&
            detail::tpoly_is_one(rep_->den))
            return rep_->num[0].second;
        return std::nullopt;
    }
    std::optional<Rat> as_rational() const {
        auto g = as_gaussian();
        if (g && g->is_real()) return g->re;
        return std::nullopt;
    }

    bool has_params() const {
        return detail::tpoly_has_params(rep_->num) ||
               detail::tpoly_has_params(rep_->den);
    }

    ConstExpr operator-() const {
        return ConstExpr(detail::make_rep(detail::tpoly_neg(rep_->num), rep_->den));
    }
    friend ConstExpr operator+(const ConstExpr& a, const ConstExpr& b) {
        return ConstExpr(detail::add_reps(a.rep_, b.rep_));
    }
    friend ConstExpr operator-(const ConstExpr& a, const ConstExpr& b) {
        return a + (-b);
    }
    friend ConstExpr operator*(const ConstExpr& a, const ConstExpr& b) {
        return ConstExpr(detail::mul_reps(a.rep_, b.rep_));
    }
    friend ConstExpr operator/(const ConstExpr& a, const ConstExpr& b) {
        if (b.is_zero()) throw DivisionByZero(b.str());
        if (b.zero_test() == Ternary::ZERO) throw DivisionByZero(b.str());
        return ConstExpr(detail::make_rep(detail::tpoly_mul(a.rep_->num, b.rep_->den),
                                          detail::tpoly_mul(a.rep_->den, b.rep_->num)));
    }

    ConstExpr pow(long k) const {
        if (k == 0) return integer(1);
        if (k < 0) return integer(1) / this->pow(-k);
        ConstExpr acc = integer(1);
        ConstExpr base = *this;
        unsigned long e = static_cast<unsigned long>(k);
        while (e) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return acc;
    }

    // complex conjugate; defined on parameter-free values only
    ConstExpr conj() const {
        if (has_params())
            throw DomainError("conjugate of an expression with free parameters");
        return ConstExpr(detail::make_rep(conj_tpoly(rep_->num), conj_tpoly(rep_->den)));
    }

    // structural identity of canonical forms
    bool identical(const ConstExpr& o) const { return rep_cmp(rep_, o.rep_) == 0; }
    // semantic equality decidable by cancellation
    bool equals(const ConstExpr& o) const { return (*this - o).is_zero(); }

    static int compare(const ConstExpr& a, const ConstExpr& b) {
        return rep_cmp(a.rep_, b.rep_);
    }

    // --- zero testing -------------------------------------------------

    Ternary zero_test(const ParamEnv& env, unsigned digits = 50) const {
        if (rep_->num.empty()) return Ternary::ZERO;

        // group terms by their parameter sub-monomial
        struct Group {
            std::vector<std::pair<Gen, int>> key;
            TPoly cofactor;
            bool flags_ok = true;
        };
        std::vector<Group> groups;
        for (const auto& term : rep_->num) {
            Group g;
            Mono cof;
            cof.exp_arg = term.first.exp_arg;
            for (const auto& f : term.first.factors) {
                if (f.first.kind == Gen::Kind::Param) {
                    g.key.push_back(f);
                    if (!f.first.param_nonzero && !env.is_nonzero(f.first.name))
                        g.flags_ok = false;
                } else {
                    cof.factors.push_back(f);
                }
            }
            bool merged = false;
            for (auto& prev : groups) {
                if (key_eq(prev.key, g.key)) {
                    prev.cofactor.push_back({std::move(cof), term.second});
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                g.cofactor.push_back({std::move(cof), term.second});
                groups.push_back(std::move(g));
            }
        }
        if (groups.size() != 1) return Ternary::UNDECIDED;

        Group& g = groups[0];
        detail::tpoly_sort_merge(g.cofactor);
        if (g.cofactor.empty()) return Ternary::ZERO;  // cancelled after stripping
        if (g.cofactor.size() == 1)
            return g.flags_ok ? Ternary::NONZERO : Ternary::UNDECIDED;
        if (detail::tpoly_has_params(g.cofactor)) return Ternary::UNDECIDED;

        // interval ladder on the parameter-free cofactor
        for (unsigned d : ladder(digits)) {
            try {
                ComplexInterval v =
                    eval_tpoly(g.cofactor, bits_for_digits(d), nullptr);
                if (!v.contains_zero())
                    return g.flags_ok ? Ternary::NONZERO : Ternary::UNDECIDED;
            } catch (const IndeterminateInterval&) {
                // widen precision and retry
            }
        }
        return Ternary::UNDECIDED;
    }

    Ternary zero_test(unsigned digits = 50) const {
        static const ParamEnv empty;
        return zero_test(empty, digits);
    }

    // --- numeric evaluation -------------------------------------------

    ComplexInterval eval(unsigned digits = 50, const ParamEnv& env = ParamEnv()) const {
        mpfr_prec_t bits = bits_for_digits(digits);
        for (int attempt = 0; attempt < 5; ++attempt) {
            try {
                return eval_rep(rep_, bits, &env);
            } catch (const IndeterminateInterval&) {
                bits *= 2;
            }
        }
        return eval_rep(rep_, bits, &env);
    }

    std::string str() const;

private:
    ConstPtr rep_;

    static ConstPtr zero_rep() {
        static const ConstPtr z =
            std::make_shared<ConstRep>(ConstRep{{}, detail::tpoly_one()});
        return z;
    }

    static bool key_eq(const std::vector<std::pair<Gen, int>>& a,
                       const std::vector<std::pair<Gen, int>>& b) {
        if (a.size() != b.size()) return false;
        for (size_t k = 0; k < a.size(); ++k)
            if (gen_cmp(a[k].first, b[k].first) != 0 || a[k].second != b[k].second)
                return false;
        return true;
    }

    static std::vector<unsigned> ladder(unsigned start) {
        std::vector<unsigned> out{std::max(start, 16u)};
        for (unsigned d : {200u, 1000u})
            if (d > out.back()) out.push_back(d);
        return out;
    }

    static ConstExpr add_prime_logs(ConstExpr acc, mpz_class n, int sign) {
        // n >= 1, exact prime factorization (values here are tiny)
        for (mpz_class p = 2; n > 1;) {
            if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
                int e = 0;
                while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
                    n /= p;
                    ++e;
                }
                TPoly t{{Mono{{{Gen::log_prime(p.get_ui()), 1}}, nullptr},
                         GRat(Rat(sign * e), Rat(0))}};
                acc = acc + ConstExpr(detail::make_rep(std::move(t), detail::tpoly_one()));
            }
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        }
        return acc;
    }

    static TPoly conj_tpoly(const TPoly& p) {
        TPoly out;
        out.reserve(p.size());
        for (const auto& term : p) {
            GRat c = term.second.conj();
            Mono m;
            m.factors = term.first.factors;
            if (term.first.exp_arg) {
                ConstExpr w(term.first.exp_arg);
                ConstExpr cw = w.conj();
                detail::ExpNorm en = detail::exp_normalize(cw.rep_);
                c = c * en.mult;
                m.exp_arg = en.arg;
            }
            if (!c.is_zero()) out.push_back({std::move(m), std::move(c)});
        }
        detail::tpoly_sort_merge(out);
        return out;
    }

    static ComplexInterval eval_mono(const Mono& m, mpfr_prec_t bits,
                                     const ParamEnv* env) {
        ComplexInterval acc = ComplexInterval::one(bits);
        for (const auto& [g, e] : m.factors) {
            ComplexInterval base(bits);
            switch (g.kind) {
            case Gen::Kind::Pi:
                base = ComplexInterval(RealInterval::pi(bits),
                                       RealInterval::from_long(0, bits));
                break;
            case Gen::Kind::LogPrime:
                base = ComplexInterval(
                    RealInterval::from_long(static_cast<long>(g.prime), bits).log(),
                    RealInterval::from_long(0, bits));
                break;
            case Gen::Kind::Param: {
                const ConstPtr* v = env ? env->value(g.name) : nullptr;
                if (!v) throw UnassignedParameter(g.name);
                base = eval_rep(*v, bits, env);
                break;
            }
            }
            ComplexInterval p = base.pow(static_cast<unsigned long>(e < 0 ? -e : e));
            if (e < 0) p = ComplexInterval::one(bits) / p;
            acc = acc * p;
        }
        if (m.exp_arg) acc = acc * eval_rep(m.exp_arg, bits, env).exp();
        return acc;
    }

    static ComplexInterval eval_tpoly(const TPoly& p, mpfr_prec_t bits,
                                      const ParamEnv* env) {
        ComplexInterval acc(bits);
        for (const auto& [m, c] : p) {
            ComplexInterval coeff =
                ComplexInterval::from_rationals(c.re, c.im, bits);
            acc = acc + coeff * eval_mono(m, bits, env);
        }
        return acc;
    }

    static ComplexInterval eval_rep(const ConstPtr& r, mpfr_prec_t bits,
                                    const ParamEnv* env) {
        ComplexInterval n = eval_tpoly(r->num, bits, env);
        if (detail::tpoly_is_one(r->den)) return n;
        return n / eval_tpoly(r->den, bits, env);
    }

    friend struct ConstPrinter;
};

// Decide the sign of a real-valued parameter-free constant. Returns -1, 0
// or +1; throws UndecidedError when the ladder cannot separate it from 0.
inline int real_sign(const ConstExpr& e, unsigned digits = 50) {
    if (e.zero_test(digits) == Ternary::ZERO) return 0;
    for (unsigned d : {digits, 200u, 1000u}) {
        try {
            ComplexInterval v = e.eval(d);
            if (v.re.is_positive()) return 1;
            if (v.re.is_negative()) return -1;
        } catch (const IndeterminateInterval&) {
        }
    }
    throw UndecidedError("sign of " + e.str());
}

// ---- printing in the CLI grammar -------------------------------------

struct ConstPrinter {
    static std::string rat_str(const Rat& q) {
        std::ostringstream os;
        if (q.get_den() == 1)
            os << q.get_num();
        else
            os << q.get_num() << "/" << q.get_den();
        return os.str();
    }

    // coefficient as a grammar factor; a leading minus and a /q tail are
    // safe inside products, sums need parentheses
    static std::string grat_factor(const GRat& c) {
        if (c.im == 0) return rat_str(c.re);
        if (c.re == 0) {
            if (c.im == 1) return "i";
            if (c.im == -1) return "-i";
            return rat_str(c.im) + "*i";
        }
        std::string s = rat_str(c.re);
        if (c.im > 0)
            s += " + " + (c.im == 1 ? std::string("i") : rat_str(c.im) + "*i");
        else
            s += " - " + (c.im == -1 ? std::string("i") : rat_str(-c.im) + "*i");
        return "(" + s + ")";
    }

    static std::string gen_str(const Gen& g) {
        switch (g.kind) {
        case Gen::Kind::Pi: return "pi";
        case Gen::Kind::LogPrime: return "log(" + std::to_string(g.prime) + ")";
        default: return "param(" + g.name + ")";
        }
    }

    static std::string mono_term(const Mono& m, const GRat& c) {
        std::vector<std::string> numf, denf;
        for (const auto& [g, e] : m.factors) {
            std::string base = gen_str(g);
            int a = e < 0 ? -e : e;
            std::string piece = a == 1 ? base : base + "^" + std::to_string(a);
            (e > 0 ? numf : denf).push_back(piece);
        }
        if (m.exp_arg) numf.push_back("exp(" + tpoly_str(m.exp_arg) + ")");

        std::string out;
        bool coeff_is_one = c.is_one();
        if (!coeff_is_one || numf.empty()) out = grat_factor(c);
        for (const auto& f : numf) {
            if (!out.empty()) out += "*";
            out += f;
        }
        for (const auto& f : denf) out += "/" + f;
        return out;
    }

    static bool leading_negative(const GRat& c) {
        if (c.re != 0) return c.re < 0;
        return c.im < 0;
    }

    static std::string poly_str(const TPoly& p) {
        if (p.empty()) return "0";
        std::string out;
        // print highest monomials first for readability
        for (auto it = p.rbegin(); it != p.rend(); ++it) {
            const auto& [m, c] = *it;
            if (out.empty()) {
                out = mono_term(m, c);
            } else if (leading_negative(c)) {
                out += " - " + mono_term(m, -c);
            } else {
                out += " + " + mono_term(m, c);
            }
        }
        return out;
    }

    static std::string tpoly_str(const ConstPtr& r) {
        if (detail::tpoly_is_one(r->den)) return poly_str(r->num);
        return "(" + poly_str(r->num) + ")/(" + poly_str(r->den) + ")";
    }
};

inline std::string ConstExpr::str() const { return ConstPrinter::tpoly_str(rep_); }

}  // namespace expoly
