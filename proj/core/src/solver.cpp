#include "ratingforge/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "ratingforge/menu.hpp"
#include "ratingforge/numeric.hpp"

namespace ratingforge {

double V_of(const ProblemSpec& spec, double theta0) {
    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    const auto& opt = spec.options();
    double q_std = spec.q_indiff(theta0);
    double thetaL = spec.theta_L(theta0);
    auto breaks = spec.dist().breakpoints();
    double pool = 0.0, reveal = 0.0;
    double pool_lo = std::max(theta0, lo);
    if (thetaL > pool_lo)
        pool = num::integrate(
            [&](double t) { return spec.psi(q_std, t) * spec.dist().pdf(t); }, pool_lo,
            thetaL, breaks, opt.quad_rel, opt.quad_abs);
    if (hi > thetaL)
        reveal = num::integrate(
            [&](double t) { return spec.psi(spec.q_full(t), t) * spec.dist().pdf(t); },
            thetaL, hi, breaks, opt.quad_rel, opt.quad_abs);
    return pool + reveal;
}

double V_prime(const ProblemSpec& spec, double theta0) {
    CharacteristicCtx ctx(spec, theta0);
    double q_std = ctx.q_standard();
    double closed = ctx.A() * q_std - spec.psi(q_std, theta0) * spec.dist().pdf(theta0);
#ifndef NDEBUG
    // finite-difference cross-check on analytic cost families; interpolated
    // costs carry their own resolution bias and are covered by unit tests
    if (spec.cost().describe().family != "tabulated" && theta0 > 1e-4 &&
        theta0 < spec.theta_hi() - 1e-4 &&
        std::abs(theta0 - spec.theta_lo()) > 1e-4) {
        double h = 1e-5;
        double fd = (V_of(spec, theta0 + h) - V_of(spec, theta0 - h)) / (2 * h);
        assert(std::abs(closed - fd) <= 1e-4 * (1.0 + std::abs(closed)) + 1e-5);
    }
#endif
    return closed;
}

CutoffSolution solve_cutoff(const ProblemSpec& spec) {
    const double hi = spec.theta_hi();
    const auto& opt = spec.options();
    const std::size_t n = opt.scan_n;

    std::vector<double> xs = num::linspace(0.0, hi, n + 1);
    std::vector<double> vp(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) vp[i] = V_prime(spec, xs[i]);

    const double flat_tol = 1e-7 * (1.0 + std::abs(vp[0]));
    bool all_positive = true;
    for (double v : vp) all_positive &= (v > flat_tol);
    if (all_positive)
        throw solver_error(solver_errc::no_root,
                           "solve_cutoff: V' > 0 on the whole interval (ill-posed)");

    std::vector<double> candidates{0.0, spec.theta_lo()};
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        bool flat_i = std::abs(vp[i]) <= flat_tol;
        if (flat_i) candidates.push_back(xs[i]);
        if ((vp[i] > 0) != (vp[i + 1] > 0) && !flat_i &&
            std::abs(vp[i + 1]) > flat_tol) {
            // bisect; on kinks (f jumps at theta_lo) this converges to the kink
            double a = xs[i], b = xs[i + 1];
            for (int it = 0; it < 60; ++it) {
                double m = 0.5 * (a + b);
                double vm = V_prime(spec, m);
                if (std::abs(vm) <= 1e-12) {
                    a = b = m;
                    break;
                }
                if ((vm > 0) == (vp[i] > 0))
                    a = m;
                else
                    b = m;
            }
            candidates.push_back(0.5 * (a + b));
        }
    }
    if (std::abs(vp.back()) <= flat_tol) candidates.push_back(hi);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                     candidates.end());

    double vmax = -std::numeric_limits<double>::infinity();
    std::vector<double> values(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        values[i] = V_of(spec, candidates[i]);
        vmax = std::max(vmax, values[i]);
    }
    const double tie_tol = std::max(1e-10, 1e-9 * std::abs(vmax));

    CutoffSolution sol;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (values[i] >= vmax - tie_tol) sol.candidates.push_back(candidates[i]);
    sol.theta0 = sol.candidates.front();  // tie-break toward the smallest cutoff
    sol.value = vmax;
    sol.set_lo = sol.candidates.front();
    sol.set_hi = sol.candidates.back();
    sol.plateau = sol.set_hi - sol.set_lo > 1e-7 * (1.0 + hi);
    if (sol.plateau) {
        // confirm flatness in the middle before reporting a maximizing interval
        double mid = 0.5 * (sol.set_lo + sol.set_hi);
        if (V_of(spec, mid) < vmax - std::max(1e-8, 1e-6 * std::abs(vmax))) {
            sol.plateau = false;
            sol.set_hi = sol.set_lo;
        }
    }
    double vp0 = V_prime(spec, sol.theta0);
    if (sol.plateau)
        sol.kkt = "plateau";
    else if (sol.theta0 <= 1e-12)
        sol.kkt = vp0 <= flat_tol ? "boundary-zero" : "boundary";
    else if (std::abs(vp0) <= 1e-6 * (1.0 + std::abs(vp0)))
        sol.kkt = "interior-root";
    else
        sol.kkt = "kink";
    return sol;
}

DeterministicScheme build_scheme(const ProblemSpec& spec, double theta0) {
    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    double thetaL = spec.theta_L(theta0);
    double q_std = spec.q_indiff(theta0);

    DeterministicScheme sch;
    double cut = std::clamp(theta0, lo, hi);
    if (cut > lo + 1e-12)
        sch.segments.push_back({lo, cut, SegmentKind::exclusion, 0.0});
    if (thetaL > cut + 1e-12)
        sch.segments.push_back({cut, thetaL, SegmentKind::pooling, q_std});
    double reveal_lo = std::max(thetaL, cut);
    if (hi > reveal_lo + 1e-12)
        sch.segments.push_back({reveal_lo, hi, SegmentKind::reveal, 0.0});
    if (sch.segments.empty())  // theta0 at (or beyond) the top: everyone excluded
        sch.segments.push_back({lo, hi, SegmentKind::exclusion, 0.0});
    // close the cover exactly
    sch.segments.front().lo = lo;
    sch.segments.back().hi = hi;
    return sch;
}

double scheme_payoff(const ProblemSpec& spec, const DeterministicScheme& scheme) {
    ic_audit_or_throw(spec, scheme);
    const auto& opt = spec.options();
    auto breaks = spec.dist().breakpoints();
    double total = 0.0;
    for (const Segment& s : scheme.segments) {
        switch (s.kind) {
            case SegmentKind::exclusion:
                break;  // psi(0, theta) = 0
            case SegmentKind::pooling:
                total += num::integrate(
                    [&](double t) { return spec.psi(s.standard, t) * spec.dist().pdf(t); },
                    s.lo, s.hi, breaks, opt.quad_rel, opt.quad_abs);
                break;
            case SegmentKind::reveal:
                total += num::integrate(
                    [&](double t) {
                        return spec.psi(spec.q_full(t), t) * spec.dist().pdf(t);
                    },
                    s.lo, s.hi, breaks, opt.quad_rel, opt.quad_abs);
                break;
        }
    }
    return total;
}

std::string regime_label(const ProblemSpec& spec, double theta0,
                         const DeterministicScheme& scheme) {
    bool has_reveal = false, has_pool = false, has_excl = false;
    for (const Segment& s : scheme.segments) {
        has_reveal |= s.kind == SegmentKind::reveal;
        has_pool |= s.kind == SegmentKind::pooling;
        has_excl |= s.kind == SegmentKind::exclusion;
    }
    if (!has_reveal) return "pass-fail";
    if (!has_pool && !has_excl) return "fully-revealing";
    if (!has_excl && theta0 <= spec.theta_lo() + 1e-9) return "lower-censorship-no-exclusion";
    return "lower-censorship";
}

SolveResult classify_regime(const ProblemSpec& spec, std::size_t oracle_grid_n) {
    SolveResult res;
    CutoffSolution sol = solve_cutoff(spec);
    res.cutoff = sol.theta0;
    res.plateau = sol.plateau;
    res.set_lo = sol.set_lo;
    res.set_hi = sol.set_hi;
    res.scheme = build_scheme(spec, sol.theta0);
    res.value = scheme_payoff(spec, res.scheme);

    CharacteristicCtx ctx(spec, sol.theta0);
    res.s_reports = check_S(ctx);
    res.c_report = check_C(ctx);
    res.sufficiency_only = !spec.linear_delegation_mode();

    res.regime = regime_label(spec, sol.theta0, res.scheme);
    // payoff-equal cutoffs with a different structure are reported as ties
    for (double c : sol.candidates) {
        if (std::abs(c - sol.theta0) < 1e-9) continue;
        std::string l = regime_label(spec, c, build_scheme(spec, c));
        if (l != res.regime &&
            std::find(res.tie_regimes.begin(), res.tie_regimes.end(), l) ==
                res.tie_regimes.end())
            res.tie_regimes.push_back(l);
    }

    bool conditions_hold = res.s_reports.S.holds && res.c_report.holds;
    if (!conditions_hold && spec.linear_delegation_mode()) {
        // the iff propositions say lower censorship is not optimal here
        res.regime = "multi-standard";
    }

    if (oracle_grid_n > 0) {
        auto grid = anchored_quality_grid(spec, sol.theta0, oracle_grid_n);
        MenuSolution dp = dp_optimal_menu(spec, grid);
        res.oracle_ran = true;
        res.oracle_value = dp.value;
        res.oracle_menu = dp.menu.levels;
        // value stays the scheme payoff; a multi-standard label with a higher
        // oracle value is exactly the disagreement this flag records
        res.oracle_agrees = res.value >= dp.value - 1e-6;
    }
    return res;
}

}  // namespace ratingforge
