#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expoly/delayop.hpp"
#include "expoly/expoly.hpp"
#include "expoly/growth.hpp"
#include "expoly/hull.hpp"
#include "expoly/poly.hpp"

namespace expoly {

// f^n + sum a_i f^i + q e^Q L(z,f) = P
struct Equation {
    unsigned n;
    std::vector<ConstExpr> a;  // a[i-1] is the weight of f^i, i = 1..n-1
    Poly q, Q, P;
    DelayDiffOp L;

    Equation(unsigned n_, std::vector<ConstExpr> a_, Poly q_, Poly Q_, Poly P_,
             DelayDiffOp L_)
        : n(n_), a(std::move(a_)), q(std::move(q_)), Q(std::move(Q_)),
          P(std::move(P_)), L(std::move(L_)) {
        if (n < 2) throw DomainError("equation degree n must be at least 2");
        if (a.size() != n - 1)
            throw DomainError("expected " + std::to_string(n - 1) +
                              " lower-order weights");
        if (q.is_zero()) throw DomainError("q must not vanish identically");
        if (Q.degree() < 1) throw DomainError("Q must be non-constant");
    }
};

// canonical form of f^n + sum a_i f^i + q e^Q L(z,f) - P; identically zero
// exactly when f solves the equation
inline ExPoly residual(const Equation& eq, const ExPoly& f) {
    ExPoly acc;
    ExPoly fp = f;
    for (unsigned i = 1; i < eq.n; ++i) {
        acc = acc + fp.scaled(eq.a[i - 1]);
        fp = fp * f;
    }
    acc = acc + fp;  // fp == f^n
    acc = acc + ExPoly::term(eq.q, eq.Q) * eq.L.apply(f);
    acc = acc - ExPoly::from_poly(eq.P);
    return acc;
}

// ---- structural solution classes ---------------------------------------

enum class GammaClass { GAMMA0, GAMMA1, GAMMA0P, GAMMA1P, GAMMA2P, NONE };

inline const char* to_string(GammaClass g) {
    switch (g) {
    case GammaClass::GAMMA0: return "GAMMA0";
    case GammaClass::GAMMA1: return "GAMMA1";
    case GammaClass::GAMMA0P: return "GAMMA0P";
    case GammaClass::GAMMA1P: return "GAMMA1P";
    case GammaClass::GAMMA2P: return "GAMMA2P";
    default: return "NONE";
    }
}

inline std::optional<GammaClass> gamma_from_string(const std::string& s) {
    for (GammaClass g : {GammaClass::GAMMA0, GammaClass::GAMMA1, GammaClass::GAMMA0P,
                         GammaClass::GAMMA1P, GammaClass::GAMMA2P, GammaClass::NONE})
        if (s == to_string(g)) return g;
    return std::nullopt;
}

struct SolutionClass {
    GammaClass tag = GammaClass::NONE;
    std::vector<GammaClass> memberships;              // every class f lies in
    std::vector<std::pair<Poly, Poly>> exponentials;  // witness (p_i, alpha_i)
    Poly poly_part;

    bool in(GammaClass g) const {
        for (GammaClass m : memberships)
            if (m == g) return true;
        return false;
    }
};

// Structural match on the canonical term set. The unit-coefficient classes
// are matched literally: e^alpha carries coefficient exactly 1.
inline SolutionClass classify(const ExPoly& f) {
    if (f.is_zero()) throw DomainError("classify of the zero function");
    SolutionClass sc;
    for (const auto& t : f.terms()) {
        if (t.exponent.is_zero())
            sc.poly_part = t.coeff;
        else
            sc.exponentials.push_back({t.coeff, t.exponent});
    }
    size_t e = sc.exponentials.size();
    bool p3_zero = sc.poly_part.is_zero();
    bool p3_const = sc.poly_part.is_constant();
    bool unit_coeff = e == 1 && sc.exponentials[0].first.is_constant() &&
                      sc.exponentials[0].first.coeff(0).is_one();

    if (e == 1 && unit_coeff && p3_zero) sc.memberships.push_back(GammaClass::GAMMA0);
    if (e == 1 && unit_coeff && p3_const) sc.memberships.push_back(GammaClass::GAMMA1);
    if (e == 1 && p3_zero) sc.memberships.push_back(GammaClass::GAMMA0P);
    if (e == 1) sc.memberships.push_back(GammaClass::GAMMA1P);
    if (e >= 1 && e <= 2) sc.memberships.push_back(GammaClass::GAMMA2P);
    sc.tag = sc.memberships.empty() ? GammaClass::NONE : sc.memberships.front();
    return sc;
}

// ---- coefficient functions of the normalized substitution ---------------

// A0 = sum_i b_i H0^(r_i)(z + c_i); A_h carries the delay-differential
// polynomial of H_h times the shift exponential factor, so that
// L(H_h e^{w_h z^t}) = A_h e^{w_h z^t} exactly.
inline std::pair<ExPoly, std::vector<ExPoly>> compute_coefficient_functions(
    const DelayDiffOp& L, const NormalizedView& view) {
    ExPoly a0 = view.h0.is_zero() ? ExPoly() : L.apply(view.h0);
    std::vector<ExPoly> ah;
    for (const auto& [w, h] : view.groups) {
        Poly wzt = Poly::monomial(w, view.t);
        ExPoly group = h * ExPoly::term(Poly(ConstExpr::integer(1)), wzt);
        ExPoly lg = L.apply(group);
        ah.push_back(lg * ExPoly::term(Poly(ConstExpr::integer(1)), -wzt));
    }
    return {std::move(a0), std::move(ah)};
}

// ---- theorem checker -----------------------------------------------------

enum class ClauseStatus { HOLDS, VACUOUS, COUNTEREXAMPLE, UNDECIDED };

inline const char* to_string(ClauseStatus s) {
    switch (s) {
    case ClauseStatus::HOLDS: return "HOLDS";
    case ClauseStatus::VACUOUS: return "VACUOUS";
    case ClauseStatus::COUNTEREXAMPLE: return "COUNTEREXAMPLE";
    default: return "UNDECIDED";
    }
}

inline std::optional<ClauseStatus> clause_status_from_string(const std::string& s) {
    for (ClauseStatus c : {ClauseStatus::HOLDS, ClauseStatus::VACUOUS,
                           ClauseStatus::COUNTEREXAMPLE, ClauseStatus::UNDECIDED})
        if (s == to_string(c)) return c;
    return std::nullopt;
}

struct ClauseResult {
    std::string name;
    ClauseStatus status;
    std::string note;
};

struct ClauseReport {
    std::vector<ClauseResult> clauses;

    const ClauseResult* find(const std::string& name) const {
        for (const auto& c : clauses)
            if (c.name == name) return &c;
        return nullptr;
    }
    bool any_counterexample() const {
        for (const auto& c : clauses)
            if (c.status == ClauseStatus::COUNTEREXAMPLE) return true;
        return false;
    }
    bool any_undecided() const {
        for (const auto& c : clauses)
            if (c.status == ClauseStatus::UNDECIDED) return true;
        return false;
    }
};

namespace theorem {

enum class Tri { True, False, Unknown };

inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }
inline Tri tri_not(Tri a) {
    if (a == Tri::Unknown) return a;
    return a == Tri::True ? Tri::False : Tri::True;
}
inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::True;
}
inline Tri tri_or(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::False;
}

inline Tri const_is_zero(const ConstExpr& c, const ParamEnv& env, unsigned digits) {
    switch (c.zero_test(env, digits)) {
    case Ternary::ZERO: return Tri::True;
    case Ternary::NONZERO: return Tri::False;
    default: return Tri::Unknown;
    }
}

// identity of exponential polynomials read as polynomials in the free
// parameters: holds only under exact cancellation
inline Tri expoly_eq(const ExPoly& x, const ExPoly& y) {
    try {
        return tri((x - y).is_zero());
    } catch (const UndecidedError&) {
        return Tri::Unknown;
    }
}

inline Tri poly_eq(const Poly& x, const Poly& y) {
    try {
        return tri((x - y).is_zero());
    } catch (const UndecidedError&) {
        return Tri::Unknown;
    }
}

inline ClauseStatus status_from(Tri hyp, Tri concl) {
    if (hyp == Tri::False) return ClauseStatus::VACUOUS;
    if (hyp == Tri::Unknown) return ClauseStatus::UNDECIDED;
    switch (concl) {
    case Tri::True: return ClauseStatus::HOLDS;
    case Tri::False: return ClauseStatus::COUNTEREXAMPLE;
    default: return ClauseStatus::UNDECIDED;
    }
}

}  // namespace theorem

// Falsification harness for the classification theorem: every clause's
// hypothesis and conclusion are evaluated on the concrete (equation, f)
// pair; VACUOUS is a first-class outcome.
inline ClauseReport check_theorem(const Equation& eq, const ExPoly& f,
                                  const ParamEnv& env = ParamEnv(),
                                  unsigned digits = 50) {
    using namespace theorem;

    ExPoly res = residual(eq, f);
    if (!res.is_zero())
        throw DomainError("check_theorem requires a verified solution; residual = " +
                          res.str());

    ClauseReport report;
    auto push = [&](const std::string& name, ClauseStatus st, const std::string& note) {
        report.clauses.push_back({name, st, note});
    };
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const UndecidedError& e) {
            push(name, ClauseStatus::UNDECIDED, e.what());
        } catch (const IndeterminateInterval& e) {
            push(name, ClauseStatus::UNDECIDED, e.what());
        }
    };

    SolutionClass cls = classify(f);
    int deg_q = eq.Q.degree();

    // a_i predicates
    Tri all_zero = Tri::True;
    Tri exists_zero = Tri::False;
    for (const auto& ai : eq.a) {
        Tri z = const_is_zero(ai, env, digits);
        all_zero = tri_and(all_zero, z);
        exists_zero = tri_or(exists_zero, z);
    }
    bool p_zero = eq.P.is_zero();

    std::optional<GrowthReport> growth;
    std::string growth_err;
    try {
        growth = indicators(f, digits);
    } catch (const Error& e) {
        growth_err = e.what();
    }
    std::optional<NormalizedView> view;
    std::string view_err;
    try {
        view = f.normalized_view();
    } catch (const Error& e) {
        view_err = e.what();
    }

    // (i) rho(f) = deg Q, mean type
    if (!growth) {
        push("i", ClauseStatus::UNDECIDED, growth_err);
    } else {
        Tri concl = tri(growth->rho == static_cast<unsigned>(deg_q) && growth->mean_type);
        push("i", status_from(Tri::True, concl),
             "rho = " + std::to_string(growth->rho) + ", deg Q = " +
                 std::to_string(deg_q) +
                 (growth->mean_type ? ", mean type" : ", not of mean type"));
    }

    // (ii) forward: Borel exceptional zero => all a_i = 0 and P == 0
    if (!growth) {
        push("ii_fwd", ClauseStatus::UNDECIDED, growth_err);
    } else {
        bool borel = growth->rho > 0 && growth->lambda < growth->rho;
        Tri concl = tri_and(all_zero, tri(p_zero));
        push("ii_fwd", status_from(tri(borel), concl),
             borel ? "zero is Borel exceptional" : "zero is not Borel exceptional");
    }

    // (ii) converse: P == 0 branches on exists a_{i0} = 0
    if (!growth) {
        push("ii_conv", ClauseStatus::UNDECIDED, growth_err);
    } else if (!p_zero) {
        push("ii_conv", ClauseStatus::VACUOUS, "P is not identically zero");
    } else if (exists_zero == Tri::Unknown) {
        push("ii_conv", ClauseStatus::UNDECIDED, "vanishing of some a_i undecided");
    } else if (exists_zero == Tri::True) {
        Tri concl = tri_and(all_zero, tri(growth->lambda < growth->rho));
        push("ii_conv", status_from(Tri::True, concl),
             "some a_i vanishes: expect all a_j = 0 and lambda < rho");
    } else {
        Tri concl = tri(growth->lambda == growth->rho);
        push("ii_conv", status_from(Tri::True, concl),
             "no a_i vanishes: expect lambda = rho");
    }

    // (iii) forward: f in Gamma0' => all a_i = 0 and P == 0
    push("iii_fwd", status_from(tri(cls.in(GammaClass::GAMMA0P)),
                                tri_and(all_zero, tri(p_zero))),
         cls.in(GammaClass::GAMMA0P) ? "f lies in Gamma0'" : "f not in Gamma0'");

    // (iii) converse, with the all-shifts-equal reading as hypothesis on L
    guarded("iii_conv", [&] {
        Tri shifts_eq = Tri::True;
        auto shifts = eq.L.tail_shifts();
        for (size_t i = 0; i < shifts.size(); ++i)
            for (size_t j = i + 1; j < shifts.size(); ++j)
                shifts_eq = tri_and(
                    shifts_eq,
                    const_is_zero(shifts[i] - shifts[j], env, digits));
        Tri hyp = tri_and(tri(p_zero), tri_and(exists_zero, shifts_eq));
        if (hyp == Tri::False) {
            push("iii_conv", ClauseStatus::VACUOUS,
                 "hypothesis fails (P, a_i or unequal shifts)");
            return;
        }
        if (!growth) {
            push("iii_conv", ClauseStatus::UNDECIDED, growth_err);
            return;
        }
        Tri lam = tri(growth->rho > 0 && growth->lambda == growth->rho - 1);
        Tri concl = tri_or(lam, tri(cls.in(GammaClass::GAMMA0P)));
        push("iii_conv", status_from(hyp, concl),
             "checks lambda = rho - 1 or f in Gamma0'");
    });

    // (iv) multiple-zero cardinality clause, n >= 3
    guarded("iv", [&] {
        if (eq.n < 3) {
            push("iv", ClauseStatus::VACUOUS, "n < 3");
            return;
        }
        if (exists_zero == Tri::False) {
            push("iv", ClauseStatus::VACUOUS, "no a_i vanishes");
            return;
        }
        if (exists_zero == Tri::Unknown) {
            push("iv", ClauseStatus::UNDECIDED, "vanishing of some a_i undecided");
            return;
        }
        std::vector<ConstExpr> pc(eq.n + 1);
        pc[eq.n] = ConstExpr::integer(1);
        for (unsigned i = 1; i < eq.n; ++i) pc[i] = eq.a[i - 1];
        Poly p = Poly::from_coeffs(std::move(pc));
        if (p.has_params()) {
            push("iv", ClauseStatus::UNDECIDED, "p(z) carries free parameters");
            return;
        }
        auto [card2, card3] = multiple_zero_cardinality(p);
        if (card3 < 1 && card2 < 2) {
            push("iv", ClauseStatus::VACUOUS,
                 "cardinality hypothesis fails (card2 = " + std::to_string(card2) +
                     ", card3 = " + std::to_string(card3) + ")");
            return;
        }
        Tri concl = tri_and(tri(p_zero),
                            tri_and(all_zero, tri(cls.in(GammaClass::GAMMA0P))));
        concl = tri_and(concl, tri(card2 < 2));
        push("iv", status_from(Tri::True, concl),
             "card2 = " + std::to_string(card2) + ", card3 = " + std::to_string(card3));
    });

    // (v) n = 2 with a_1 != 0
    Tri a1_nonzero =
        eq.n == 2 ? tri_not(const_is_zero(eq.a[0], env, digits)) : Tri::False;
    Tri hyp_v = tri_and(tri(eq.n == 2), a1_nonzero);

    guarded("v_a", [&] {
        if (hyp_v == Tri::False) {
            push("v_a", ClauseStatus::VACUOUS, "needs n = 2 and a_1 != 0");
            return;
        }
        if (!view) {
            push("v_a", ClauseStatus::UNDECIDED, view_err);
            return;
        }
        Tri hyp = tri_and(hyp_v, tri(view->m() >= 2));
        if (hyp == Tri::False) {
            push("v_a", ClauseStatus::VACUOUS, "m < 2");
            return;
        }
        std::vector<ConstExpr> omegas;
        for (const auto& [w, h] : view->groups) omegas.push_back(w);
        auto rel = has_double_relation(FrequencySet(omegas, digits), digits);
        Tri concl = tri_and(tri(rel.has_value()), tri(cls.in(GammaClass::GAMMA2P)));
        std::string note = rel ? "omega_" + std::to_string(rel->first + 1) + " = 2 omega_" +
                                     std::to_string(rel->second + 1)
                               : "no double frequency relation";
        push("v_a", status_from(hyp, concl), note);
    });

    // (v)(b) with subcases (I), (II), (III); all that hold are reported
    guarded("v_b", [&] {
        Tri hyp = hyp_v;
        if (hyp != Tri::False) {
            if (!view) {
                for (const char* nm : {"v_b", "v_b_I", "v_b_II", "v_b_III"})
                    push(nm, ClauseStatus::UNDECIDED, view_err);
                return;
            }
            hyp = tri_and(hyp, tri(view->m() == 1));
        }
        if (hyp == Tri::False) {
            for (const char* nm : {"v_b", "v_b_I", "v_b_II", "v_b_III"})
                push(nm, ClauseStatus::VACUOUS, "needs n = 2, a_1 != 0 and m = 1");
            return;
        }
        if (hyp == Tri::Unknown) {
            for (const char* nm : {"v_b", "v_b_I", "v_b_II", "v_b_III"})
                push(nm, ClauseStatus::UNDECIDED, "hypothesis undecided");
            return;
        }

        const ConstExpr& a1 = eq.a[0];
        const ExPoly& h0 = view->h0;
        const ConstExpr& w1 = view->groups[0].first;
        const ExPoly& h1 = view->groups[0].second;
        ConstExpr half = ConstExpr::rational(1, 2);

        auto qsplit = eq.Q.split_leading();
        const Poly& q_rest = qsplit.rest;
        ConstExpr b0 = eq.L.b0();
        ExPoly lf = eq.L.apply(f);
        ExPoly h1sq = h1 * h1;

        // (I) t = 1, rho = 1, polynomial H0 and H1, deg Q = 1
        Tri sub1 = Tri::Unknown;
        if (growth)
            sub1 = tri(view->t == 1 && growth->rho == 1 && h0.is_poly() &&
                       h1.is_poly() && deg_q == 1);

        // (II) H0 = -a1/2, P = -a1^2/4, H1^2 = (b0 a1 / 2) q e^{Q_{t-1}},
        //      L(z,f) = b0 H0
        Tri sub2 = expoly_eq(h0, ExPoly::constant(-a1 * half));
        sub2 = tri_and(sub2, poly_eq(eq.P, Poly(-a1 * a1 * ConstExpr::rational(1, 4))));
        sub2 = tri_and(sub2, expoly_eq(h1sq, ExPoly::term(eq.q.scaled(b0 * a1 * half),
                                                          q_rest)));
        sub2 = tri_and(sub2, expoly_eq(lf, h0.scaled(b0)));

        // (III) H0 = -a1/2, P = -a1^2/4, H1^2 = -q e^{Q_{t-1}} A_1,
        //       L(z,f) = A_1 e^{w1 z^t}
        auto [a0fn, ahfns] = compute_coefficient_functions(eq.L, *view);
        const ExPoly& A1 = ahfns[0];
        Tri sub3 = expoly_eq(h0, ExPoly::constant(-a1 * half));
        sub3 = tri_and(sub3, poly_eq(eq.P, Poly(-a1 * a1 * ConstExpr::rational(1, 4))));
        sub3 = tri_and(sub3, expoly_eq(h1sq, -(ExPoly::term(eq.q, q_rest) * A1)));
        sub3 = tri_and(sub3,
                       expoly_eq(lf, A1 * ExPoly::term(Poly(ConstExpr::integer(1)),
                                                       Poly::monomial(w1, view->t))));

        auto push_sub = [&](const char* nm, Tri sub) {
            if (sub == Tri::True)
                push(nm, ClauseStatus::HOLDS, "identities verified");
            else if (sub == Tri::False)
                push(nm, ClauseStatus::VACUOUS, "identities do not hold here");
            else
                push(nm, ClauseStatus::UNDECIDED, "identities undecided");
        };
        Tri concl = tri_and(tri(cls.in(GammaClass::GAMMA1P)),
                            tri_or(sub1, tri_or(sub2, sub3)));
        push("v_b", status_from(Tri::True, concl),
             "f in Gamma1' and at least one of (I)/(II)/(III)");
        // spec order of detection: (II), then (III), then (I)
        push_sub("v_b_II", sub2);
        push_sub("v_b_III", sub3);
        push_sub("v_b_I", sub1);
    });

    return report;
}

}  // namespace expoly
