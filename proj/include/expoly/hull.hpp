#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expoly/constant.hpp"
#include "expoly/errors.hpp"

namespace expoly {

// Re / Im of a parameter-free value as exact real-valued constants.
inline ConstExpr re_part(const ConstExpr& e) {
    return (e + e.conj()) / ConstExpr::integer(2);
}
inline ConstExpr im_part(const ConstExpr& e) {
    return (e - e.conj()) / (ConstExpr::integer(2) * ConstExpr::i());
}

// Im(conj(a) * b): the signed area test underlying every hull predicate.
inline ConstExpr cross(const ConstExpr& a, const ConstExpr& b) {
    return im_part(a.conj() * b);
}

// Finite set of frequencies in the complex plane, pairwise distinct.
class FrequencySet {
public:
    explicit FrequencySet(std::vector<ConstExpr> pts, unsigned digits = 50) {
        if (pts.empty()) throw DomainError("frequency set must be non-empty");
        for (auto& p : pts) {
            bool dup = false;
            for (const auto& q : points_) {
                Ternary d = (p - q).zero_test(digits);
                if (d == Ternary::ZERO) {
                    dup = true;
                    break;
                }
                if (d == Ternary::UNDECIDED)
                    throw UndecidedError("distinctness of " + p.str() + " and " + q.str());
            }
            if (!dup) points_.push_back(std::move(p));
        }
    }

    const std::vector<ConstExpr>& points() const { return points_; }
    size_t size() const { return points_.size(); }

private:
    std::vector<ConstExpr> points_;
};

enum class HullKind { POINT, SEGMENT, POLYGON };

inline const char* to_string(HullKind k) {
    switch (k) {
    case HullKind::POINT: return "POINT";
    case HullKind::SEGMENT: return "SEGMENT";
    default: return "POLYGON";
    }
}

// Hull of the conjugated frequency set. Circumference follows the
// degenerate conventions: a segment counts twice its length, a point is 0.
struct HullResult {
    HullKind kind;
    std::vector<ConstExpr> vertices;  // counterclockwise for POLYGON
    RealInterval circumference;
};

inline RealInterval circumference(const HullResult& h) { return h.circumference; }

namespace hulldetail {

inline int orientation(const ConstExpr& o, const ConstExpr& a, const ConstExpr& b,
                       unsigned digits) {
    return real_sign(cross(a - o, b - o), digits);
}

// lexicographic (Re, Im) comparison with certified signs
inline bool lex_less(const ConstExpr& a, const ConstExpr& b, unsigned digits) {
    int c = real_sign(re_part(a) - re_part(b), digits);
    if (c != 0) return c < 0;
    return real_sign(im_part(a) - im_part(b), digits) < 0;
}

inline RealInterval distance(const ConstExpr& a, const ConstExpr& b, unsigned digits) {
    return (a - b).eval(digits).abs();
}

}  // namespace hulldetail

// Monotone-chain hull over exact sign tests; the frequency conjugation of
// the underlying counting formulas is applied here, not by callers.
inline HullResult convex_hull(const FrequencySet& S, bool adjoin_origin = false,
                              unsigned digits = 50) {
    std::vector<ConstExpr> pts;
    for (const auto& p : S.points()) pts.push_back(p.conj());
    if (adjoin_origin) {
        bool has_zero = false;
        for (const auto& p : pts)
            if (p.zero_test(digits) == Ternary::ZERO) has_zero = true;
        if (!has_zero) pts.push_back(ConstExpr());
    }

    mpfr_prec_t bits = bits_for_digits(digits);
    if (pts.size() == 1)
        return {HullKind::POINT, std::move(pts), RealInterval(bits)};

    std::sort(pts.begin(), pts.end(), [&](const ConstExpr& a, const ConstExpr& b) {
        return hulldetail::lex_less(a, b, digits);
    });

    bool all_collinear = true;
    for (size_t k = 2; k < pts.size() && all_collinear; ++k)
        if (hulldetail::orientation(pts[0], pts[1], pts[k], digits) != 0)
            all_collinear = false;

    if (all_collinear) {
        RealInterval len = hulldetail::distance(pts.front(), pts.back(), digits);
        return {HullKind::SEGMENT,
                {pts.front(), pts.back()},
                len + len};
    }

    // Andrew's monotone chain, counterclockwise output
    std::vector<ConstExpr> lower, upper;
    for (const auto& p : pts) {
        while (lower.size() >= 2 &&
               hulldetail::orientation(lower[lower.size() - 2], lower.back(), p,
                                       digits) <= 0)
            lower.pop_back();
        lower.push_back(p);
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (upper.size() >= 2 &&
               hulldetail::orientation(upper[upper.size() - 2], upper.back(), *it,
                                       digits) <= 0)
            upper.pop_back();
        upper.push_back(*it);
    }
    lower.pop_back();
    upper.pop_back();
    std::vector<ConstExpr> hull = std::move(lower);
    hull.insert(hull.end(), upper.begin(), upper.end());

    RealInterval c(bits);
    for (size_t k = 0; k < hull.size(); ++k)
        c = c + hulldetail::distance(hull[k], hull[(k + 1) % hull.size()], digits);
    return {HullKind::POLYGON, std::move(hull), std::move(c)};
}

// true iff 0 together with all points lies on one line through the origin
inline bool collinear_with_origin(const FrequencySet& S, unsigned digits = 50) {
    const auto& p = S.points();
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (real_sign(cross(p[i], p[j]), digits) != 0) return false;
    return true;
}

// first index pair with omega_i = 2 omega_j
inline std::optional<std::pair<size_t, size_t>> has_double_relation(
    const FrequencySet& S, unsigned digits = 50) {
    const auto& p = S.points();
    if (p.size() < 2) throw DomainError("double relation needs at least two points");
    bool undecided = false;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < p.size(); ++j) {
            if (i == j) continue;
            Ternary t = (p[i] - ConstExpr::integer(2) * p[j]).zero_test(digits);
            if (t == Ternary::ZERO) return std::make_pair(i, j);
            if (t == Ternary::UNDECIDED) undecided = true;
        }
    if (undecided)
        throw UndecidedError("frequency double relation could not be decided");
    return std::nullopt;
}

}  // namespace expoly
