#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "expoly/errors.hpp"

namespace expoly {

// Raised when an interval operation cannot produce a finite enclosure
// (division by an interval containing 0, log of a non-positive range).
// Callers escalate precision or report UNDECIDED.
struct IndeterminateInterval : Error {
    explicit IndeterminateInterval(const std::string& what_arg)
        : Error("indeterminate interval: " + what_arg) {}
};

inline mpfr_prec_t bits_for_digits(unsigned digits) {
    // 10^digits ~ 2^(digits * log2 10); pad with guard bits
    return static_cast<mpfr_prec_t>(digits * 3.3219280948873623 + 64);
}

// RAII mpfr_t value
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    Mpfr(const Mpfr& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    int sgn() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

// Closed real interval [lo, hi] with outward rounding. All operations
// guarantee containment of the exact result.
class RealInterval {
public:
    explicit RealInterval(mpfr_prec_t prec) : lo_(prec), hi_(prec), prec_(prec) {
        mpfr_set_zero(lo_.get(), 1);
        mpfr_set_zero(hi_.get(), 1);
    }

    static RealInterval from_rational(const mpq_class& q, mpfr_prec_t prec) {
        RealInterval r(prec);
        mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
        return r;
    }

    static RealInterval from_long(long v, mpfr_prec_t prec) {
        RealInterval r(prec);
        mpfr_set_si(r.lo_.get(), v, MPFR_RNDD);
        mpfr_set_si(r.hi_.get(), v, MPFR_RNDU);
        return r;
    }

    static RealInterval pi(mpfr_prec_t prec) {
        RealInterval r(prec);
        mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
        mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
        return r;
    }

    mpfr_prec_t prec() const { return prec_; }
    const Mpfr& lo() const { return lo_; }
    const Mpfr& hi() const { return hi_; }

    bool contains_zero() const { return lo_.sgn() <= 0 && hi_.sgn() >= 0; }
    bool is_positive() const { return lo_.sgn() > 0; }
    bool is_negative() const { return hi_.sgn() < 0; }
    bool is_exact_zero() const { return lo_.sgn() == 0 && hi_.sgn() == 0; }

    double mid_double() const { return (lo_.to_double() + hi_.to_double()) / 2.0; }

    // hi - lo, rounded up
    Mpfr width() const {
        Mpfr w(prec_);
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w;
    }

    RealInterval operator-() const {
        RealInterval r(prec_);
        mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
        mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
        return r;
    }

    friend RealInterval operator+(const RealInterval& a, const RealInterval& b) {
        RealInterval r(std::max(a.prec_, b.prec_));
        mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return r;
    }

    friend RealInterval operator-(const RealInterval& a, const RealInterval& b) {
        RealInterval r(std::max(a.prec_, b.prec_));
        mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
        mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
        return r;
    }

    friend RealInterval operator*(const RealInterval& a, const RealInterval& b) {
        mpfr_prec_t p = std::max(a.prec_, b.prec_);
        RealInterval r(p);
        Mpfr t(p);
        bool first = true;
        mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
        mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
        for (auto x : as)
            for (auto y : bs) {
                mpfr_mul(t.get(), x, y, MPFR_RNDD);
                if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0)
                    mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
                mpfr_mul(t.get(), x, y, MPFR_RNDU);
                if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0)
                    mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        return r;
    }

    friend RealInterval operator/(const RealInterval& a, const RealInterval& b) {
        if (b.contains_zero())
            throw IndeterminateInterval("real division by interval containing 0");
        mpfr_prec_t p = std::max(a.prec_, b.prec_);
        RealInterval r(p);
        Mpfr t(p);
        bool first = true;
        mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
        mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
        for (auto x : as)
            for (auto y : bs) {
                mpfr_div(t.get(), x, y, MPFR_RNDD);
                if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0)
                    mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
                mpfr_div(t.get(), x, y, MPFR_RNDU);
                if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0)
                    mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        return r;
    }

    RealInterval sqrt() const {
        if (hi_.sgn() < 0)
            throw IndeterminateInterval("sqrt of negative interval");
        RealInterval r(prec_);
        if (lo_.sgn() < 0)  // clamp rounding dust below 0
            mpfr_set_zero(r.lo_.get(), 1);
        else
            mpfr_sqrt(r.lo_.get(), lo_.get(), MPFR_RNDD);
        mpfr_sqrt(r.hi_.get(), hi_.get(), MPFR_RNDU);
        return r;
    }

    RealInterval exp() const {
        RealInterval r(prec_);
        mpfr_exp(r.lo_.get(), lo_.get(), MPFR_RNDD);
        mpfr_exp(r.hi_.get(), hi_.get(), MPFR_RNDU);
        return r;
    }

    RealInterval log() const {
        if (lo_.sgn() <= 0)
            throw IndeterminateInterval("log of non-positive interval");
        RealInterval r(prec_);
        mpfr_log(r.lo_.get(), lo_.get(), MPFR_RNDD);
        mpfr_log(r.hi_.get(), hi_.get(), MPFR_RNDU);
        return r;
    }

    // Range of cos over [lo, hi]: endpoint values plus +-1 whenever a
    // multiple of pi can lie inside the (outward-padded) interval.
    RealInterval cos() const {
        RealInterval r(prec_);
        Mpfr c1(prec_), c2(prec_);
        mpfr_cos(c1.get(), lo_.get(), MPFR_RNDD);
        mpfr_cos(c2.get(), lo_.get(), MPFR_RNDU);
        mpfr_set(r.lo_.get(), c1.get(), MPFR_RNDD);
        mpfr_set(r.hi_.get(), c2.get(), MPFR_RNDU);
        mpfr_cos(c1.get(), hi_.get(), MPFR_RNDD);
        if (mpfr_cmp(c1.get(), r.lo_.get()) < 0) mpfr_set(r.lo_.get(), c1.get(), MPFR_RNDD);
        mpfr_cos(c2.get(), hi_.get(), MPFR_RNDU);
        if (mpfr_cmp(c2.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), c2.get(), MPFR_RNDU);

        RealInterval piv = RealInterval::pi(prec_);
        // candidate integers k with k*pi possibly in [lo, hi]
        Mpfr q(prec_);
        mpfr_div(q.get(), lo_.get(), piv.hi_.get(), MPFR_RNDD);
        mpfr_floor(q.get(), q.get());
        long kmin = mpfr_get_si(q.get(), MPFR_RNDD) - 1;
        mpfr_div(q.get(), hi_.get(), piv.lo_.get(), MPFR_RNDU);
        mpfr_ceil(q.get(), q.get());
        long kmax = mpfr_get_si(q.get(), MPFR_RNDU) + 1;
        if (kmax - kmin > 16) {  // very wide input: just return [-1, 1]
            mpfr_set_si(r.lo_.get(), -1, MPFR_RNDD);
            mpfr_set_si(r.hi_.get(), 1, MPFR_RNDU);
            return r;
        }
        Mpfr kpi_lo(prec_), kpi_hi(prec_);
        for (long k = kmin; k <= kmax; ++k) {
            mpfr_mul_si(kpi_lo.get(), k >= 0 ? piv.lo_.get() : piv.hi_.get(), k, MPFR_RNDD);
            mpfr_mul_si(kpi_hi.get(), k >= 0 ? piv.hi_.get() : piv.lo_.get(), k, MPFR_RNDU);
            // does [kpi_lo, kpi_hi] intersect [lo, hi]?
            if (mpfr_cmp(kpi_hi.get(), lo_.get()) < 0) continue;
            if (mpfr_cmp(kpi_lo.get(), hi_.get()) > 0) continue;
            if ((k % 2 + 2) % 2 == 0)
                mpfr_set_si(r.hi_.get(), 1, MPFR_RNDU);
            else
                mpfr_set_si(r.lo_.get(), -1, MPFR_RNDD);
        }
        return r;
    }

    RealInterval sin() const {
        // sin(x) = cos(x - pi/2)
        RealInterval half_pi = RealInterval::pi(prec_);
        RealInterval two = RealInterval::from_long(2, prec_);
        return (*this - half_pi / two).cos();
    }

    std::string str(int sig = 17) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "[%.*Rg, %.*Rg]", sig, lo_.get(), sig, hi_.get());
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

private:
    Mpfr lo_, hi_;
    mpfr_prec_t prec_;
};

// Rectangular complex interval enclosure.
class ComplexInterval {
public:
    RealInterval re, im;

    explicit ComplexInterval(mpfr_prec_t prec) : re(prec), im(prec) {}
    ComplexInterval(RealInterval r, RealInterval i)
        : re(std::move(r)), im(std::move(i)) {}

    static ComplexInterval from_rationals(const mpq_class& x, const mpq_class& y,
                                          mpfr_prec_t prec) {
        return {RealInterval::from_rational(x, prec),
                RealInterval::from_rational(y, prec)};
    }

    static ComplexInterval one(mpfr_prec_t prec) {
        return {RealInterval::from_long(1, prec), RealInterval::from_long(0, prec)};
    }

    mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }

    ComplexInterval operator-() const { return {-re, -im}; }

    friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
        RealInterval n = b.re * b.re + b.im * b.im;
        if (n.contains_zero())
            throw IndeterminateInterval("complex division by interval containing 0");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }

    ComplexInterval exp() const {
        RealInterval m = re.exp();
        return {m * im.cos(), m * im.sin()};
    }

    ComplexInterval pow(unsigned long k) const {
        ComplexInterval acc = ComplexInterval::one(prec());
        ComplexInterval base = *this;
        while (k != 0) {
            if (k & 1) acc = acc * base;
            k >>= 1;
            if (k != 0) base = base * base;
        }
        return acc;
    }

    RealInterval abs() const { return (re * re + im * im).sqrt(); }

    // max(|re|, |im|) upper bound as double, for quick magnitude checks
    double mag_upper_double() const {
        RealInterval a = abs();
        return a.hi().to_double();
    }

    std::string str(int sig = 17) const {
        return re.str(sig) + " + " + im.str(sig) + "*i";
    }
};

}  // namespace expoly
