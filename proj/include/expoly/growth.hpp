#pragma once

#include <optional>
#include <vector>

#include "expoly/expoly.hpp"
#include "expoly/hull.hpp"

namespace expoly {

// Leading-term growth data of an exponential polynomial: order rho, exponent
// of convergence lambda, and the r^t coefficients of the characteristic and
// zero-counting functions. n_leading empty means o(r^t).
struct GrowthReport {
    unsigned rho = 0;
    unsigned lambda = 0;
    RealInterval t_leading;
    std::optional<RealInterval> n_leading;
    bool mean_type = false;

    GrowthReport() : t_leading(bits_for_digits(50)) {}
    explicit GrowthReport(mpfr_prec_t bits) : t_leading(bits) {}
};

namespace growthdetail {

inline unsigned lambda_of(const ExPoly& f, unsigned digits);

}  // namespace growthdetail

inline GrowthReport indicators(const ExPoly& f, unsigned digits = 50) {
    if (f.is_zero()) throw DomainError("growth indicators of the zero function");
    mpfr_prec_t bits = bits_for_digits(digits);
    NormalizedView v = f.normalized_view();
    GrowthReport r(bits);
    if (v.m() == 0) {
        // ordinary polynomial: rho = lambda = 0, finitely many zeros
        return r;
    }
    r.rho = v.t;

    std::vector<ConstExpr> omegas;
    for (const auto& [w, h] : v.groups) omegas.push_back(w);
    FrequencySet W(omegas, digits);

    HullResult h0hull = convex_hull(W, /*adjoin_origin=*/true, digits);
    RealInterval two_pi = RealInterval::pi(bits) + RealInterval::pi(bits);
    r.t_leading = h0hull.circumference / two_pi;
    r.mean_type = r.t_leading.is_positive();

    bool h0_zero = v.h0.is_zero();
    if (!h0_zero) {
        r.n_leading = r.t_leading;
        r.lambda = v.t;
    } else {
        HullResult whull = convex_hull(W, /*adjoin_origin=*/false, digits);
        if (whull.kind == HullKind::POINT) {
            r.n_leading = std::nullopt;
        } else {
            r.n_leading = whull.circumference / two_pi;
        }
        if (v.m() >= 2) {
            r.lambda = v.t;
        } else {
            r.lambda = growthdetail::lambda_of(v.groups[0].second, digits);
        }
    }
    return r;
}

namespace growthdetail {

inline unsigned lambda_of(const ExPoly& f, unsigned digits) {
    if (f.is_zero()) return 0;
    if (f.is_poly()) return 0;
    return indicators(f, digits).lambda;
}

}  // namespace growthdetail

// zero is a Borel exceptional value iff lambda < rho; polynomials are
// excluded by convention
inline bool is_borel_exceptional_zero(const ExPoly& f, unsigned digits = 50) {
    GrowthReport r = indicators(f, digits);
    return r.rho > 0 && r.lambda < r.rho;
}

}  // namespace expoly
