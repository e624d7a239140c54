#include "ratingforge/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratingforge/numeric.hpp"
#include "ratingforge/menu.hpp"
#include "ratingforge/solver.hpp"

namespace ratingforge {

namespace {

constexpr double kEps = 1e-15;

// r sampled with the one-sided limit pointing into (lo, hi)
double sample_r(const CharacteristicCtx& ctx, double t, double lo, double hi) {
    if (t <= lo) return ctx.r_right(t);
    if (t >= hi) return ctx.r_left(t);
    return ctx.r(t);
}

// monotone-decrease margin on [lo, hi]: -max adjacent increase of g
ConditionReport monotone_decreasing_report(const std::string& id, const ProblemSpec& spec,
                                           const std::function<double(double)>& g,
                                           double lo, double hi) {
    ConditionReport rep;
    rep.id = id;
    const double tol = spec.options().tol_mono;
    if (!(hi > lo + kEps)) {
        rep.holds = true;
        rep.margin = 0.0;
        rep.witness = hi;
        rep.note = "vacuous";
        return rep;
    }
    const std::size_t n = spec.options().grid_n;
    auto xs = num::linspace(lo, hi, n);
    double prev = g(xs[0]);
    double worst = -std::numeric_limits<double>::infinity();
    double witness = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double cur = g(xs[i]);
        double inc = cur - prev;
        if (inc > worst) {
            worst = inc;
            witness = xs[i];
        }
        prev = cur;
    }
    rep.margin = -worst;
    rep.witness = witness;
    rep.holds = rep.margin >= -tol;
    return rep;
}

struct DefectScan {
    double margin = std::numeric_limits<double>::infinity();
    double witness = 0.0;
    bool vacuous = true;
};

// min over [lo, hi] of defect(theta) = R(theta) - R(theta0) - A (theta - theta0),
// grid scan refined 10x around sign changes and the coarse minimizer
DefectScan defect_min(const CharacteristicCtx& ctx, double A, double lo, double hi) {
    DefectScan out;
    if (!(hi > lo + kEps)) return out;
    out.vacuous = false;
    const std::size_t n = ctx.spec().options().grid_n;
    const double theta0 = ctx.cutoff();
    const double R0 = ctx.R(theta0);
    auto xs = num::linspace(lo, hi, n);
    auto Rv = ctx.R_values(xs);
    std::vector<double> defect(xs.size());
    std::size_t imin = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        defect[i] = Rv[i] - R0 - A * (xs[i] - theta0);
        if (defect[i] < defect[imin]) imin = i;
    }
    out.margin = defect[imin];
    out.witness = xs[imin];
    auto refine_cell = [&](std::size_t i) {
        for (int k = 1; k < 10; ++k) {
            double x = xs[i] + (xs[i + 1] - xs[i]) * k / 10.0;
            double d = ctx.R(x) - R0 - A * (x - theta0);
            if (d < out.margin) {
                out.margin = d;
                out.witness = x;
            }
        }
    };
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        bool sign_change = (defect[i] < 0) != (defect[i + 1] < 0);
        bool near_min = (i + 1 >= imin && i <= imin + 1);
        if (sign_change || near_min) refine_cell(i);
    }
    return out;
}

}  // namespace

SBundle check_S(const CharacteristicCtx& ctx) {
    const ProblemSpec& spec = ctx.spec();
    const double tol = spec.options().tol_cond;
    const double theta0 = ctx.cutoff();
    const double thetaL = ctx.theta_L();
    const double A = ctx.A();

    SBundle b;
    b.A = A;
    for (auto* rep : {&b.S, &b.S1, &b.S2}) {
        rep->cutoff = theta0;
        rep->witness = theta0;
    }
    b.S.id = "S";
    b.S1.id = "S1";
    b.S2.id = "S2";

    DefectScan s1 = defect_min(ctx, A, std::min(theta0 + kEps, thetaL), thetaL);
    DefectScan s2 = defect_min(ctx, A, 0.0, std::max(0.0, theta0 - kEps));

    auto fill = [&](ConditionReport& rep, const DefectScan& d) {
        if (d.vacuous) {
            rep.holds = true;
            rep.margin = 0.0;
            rep.note = "vacuous";
            return;
        }
        rep.margin = d.margin;
        rep.witness = d.witness;
        rep.holds = d.margin >= -tol;
    };
    fill(b.S1, s1);
    fill(b.S2, s2);

    // strict positivity of A: A <= tol counts as failure (margin A - 2 tol)
    double strict = A - 2.0 * tol;
    b.S.margin = strict;
    b.S.witness = theta0;
    if (s1.vacuous && s2.vacuous) {
        // the condition interval degenerates to {theta0}: the defect there is
        // identically zero (the equality case)
        b.S.margin = std::min(0.0, strict);
    }
    if (!s1.vacuous && s1.margin < b.S.margin) {
        b.S.margin = s1.margin;
        b.S.witness = s1.witness;
    }
    if (!s2.vacuous && s2.margin < b.S.margin) {
        b.S.margin = s2.margin;
        b.S.witness = s2.witness;
    }
    b.S.holds = b.S.margin >= -tol;
    return b;
}

ConditionReport check_C(const CharacteristicCtx& ctx) {
    const ProblemSpec& spec = ctx.spec();
    const double thetaL = ctx.theta_L();
    const double hi = spec.theta_hi();
    ConditionReport rep = monotone_decreasing_report(
        "C", spec, [&](double t) { return sample_r(ctx, t, thetaL, hi); }, thetaL, hi);
    rep.cutoff = ctx.cutoff();
    return rep;
}

namespace {

double theta_c_inverse(const ProblemSpec& spec, double target) {
    // theta_c is increasing with theta_c(0) = 0 and theta_c(hi) >= hi
    return num::find_crossing_increasing(
        [&](double x) { return spec.theta_c(x); }, 0.0, spec.theta_hi(), target, 1e-11);
}

}  // namespace

QuasiClass classify_quasi(const ProblemSpec& spec) {
    const double tol = spec.options().tol_cond;
    const double lo = spec.theta_lo(), hi = spec.theta_hi();

    std::vector<double> candidates;
    CutoffSolution sol = solve_cutoff(spec);
    candidates.push_back(sol.theta0);
    if (sol.plateau) {
        candidates.push_back(sol.set_lo);
        candidates.push_back(sol.set_hi);
    }
    for (double c : sol.candidates) candidates.push_back(c);
    candidates.push_back(0.0);
    candidates.push_back(lo);
    if (spec.theta_c(hi) > hi)  // the cutoff whose bunching region ends exactly at theta_hi
        candidates.push_back(theta_c_inverse(spec, hi));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                     candidates.end());

    QuasiClass out;
    auto add_label = [&](const std::string& l, double cutoff) {
        if (std::find(out.labels.begin(), out.labels.end(), l) == out.labels.end())
            out.labels.push_back(l);
        // precedence: quasi-decreasing > quasi-increasing > quasi-unimodal
        auto rank = [](const std::string& s) {
            if (s == "quasi-decreasing") return 0;
            if (s == "quasi-increasing") return 1;
            return 2;
        };
        if (out.label == "none" || rank(l) < rank(out.label)) {
            out.label = l;
            out.witness_cutoff = cutoff;
        }
    };

    auto probe = [&](double theta0) {
        if (theta0 < 0.0 || theta0 > hi) return;
        CharacteristicCtx ctx(spec, theta0);
        SBundle sb = check_S(ctx);
        ConditionReport c = check_C(ctx);
        out.reports.push_back(sb.S);
        out.reports.push_back(c);
        if (!sb.S.holds) return;
        if (c.holds) add_label("quasi-unimodal", theta0);
        if (ctx.theta_c() >= hi - tol) add_label("quasi-increasing", theta0);
        if (c.holds && theta0 <= lo + tol) add_label("quasi-decreasing", theta0);
    };
    for (double c : candidates) probe(c);

    if (out.label == "none") {
        // exhaustive fallback scan at coarse resolution, then a full probe of
        // the best few cells
        std::vector<std::pair<double, double>> scored;  // (S-defect proxy, cutoff)
        for (double t0 : num::linspace(0.0, hi, 201)) {
            CharacteristicCtx ctx(spec, t0);
            double A = ctx.A();
            if (!(A > tol)) continue;
            auto xs = num::linspace(0.0, ctx.theta_L(), 129);
            auto Rv = ctx.R_values(xs);
            double R0 = ctx.R(t0);
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < xs.size(); ++i)
                worst = std::min(worst, Rv[i] - R0 - A * (xs[i] - t0));
            scored.emplace_back(worst, t0);
        }
        std::sort(scored.rbegin(), scored.rend());
        for (std::size_t i = 0; i < std::min<std::size_t>(scored.size(), 3); ++i)
            probe(scored[i].second);
    }
    return out;
}

std::vector<ConditionReport> check_Sj_Cj(const ProblemSpec& spec,
                                         const DeterministicScheme& scheme) {
    // structural and IC validation first; malformed schemes do not get reports
    ic_audit_or_throw(spec, scheme);

    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    const double kappa = spec.kappa();
    const double tol = spec.options().tol_cond;
    auto ld = spec.ld();

    std::vector<double> base_breaks{lo, hi};
    for (const Segment& s : scheme.segments)
        if (s.lo > lo && s.lo < hi) base_breaks.push_back(s.lo);
    for (double k : spec.dist().breakpoints()) base_breaks.push_back(k);
    std::sort(base_breaks.begin(), base_breaks.end());

    auto r_j = [&](double theta_j, double t) {
        double f = spec.dist().pdf(t);
        double F = spec.dist().cdf(t);
        double Fj = spec.dist().cdf(theta_j);
        if (ld) return (ld->beta(t) - ld->alpha * t) * f - ld->alpha * (F - Fj);
        if (f <= 0.0) return -kappa * (F - Fj);
        double tc = std::clamp(t, lo, hi);
        double q = scheme.quality(spec, tc);
        return spec.psi_q(q, t) * f - kappa * (t - spec.cost().cp(q)) * f -
               kappa * (F - Fj);
    };
    auto integral_rj = [&](double theta_j, double a, double b) {
        return num::integrate([&](double t) { return r_j(theta_j, t); }, a, b, base_breaks,
                              spec.options().quad_rel, spec.options().quad_abs);
    };

    std::vector<ConditionReport> reports;
    int jump_index = 0;
    for (std::size_t i = 1; i < scheme.segments.size(); ++i) {
        const Segment& left = scheme.segments[i - 1];
        const Segment& right = scheme.segments[i];
        double theta_j = right.lo;
        double q_left = left.kind == SegmentKind::reveal ? spec.q_full(theta_j)
                        : left.kind == SegmentKind::pooling ? left.standard
                                                            : 0.0;
        if (right.kind != SegmentKind::pooling) continue;  // continuous boundary
        double q_right = right.standard;
        if (q_right - q_left <= 1e-10) continue;

        double a = spec.cost().cp(q_left);
        double b = spec.cost().cp(q_right);
        double Aj = integral_rj(theta_j, theta_j, b) / (b - theta_j);

        ConditionReport rep;
        rep.id = "S-j";
        rep.cutoff = theta_j;
        rep.segment = jump_index;
        double margin = std::numeric_limits<double>::infinity();
        double witness = theta_j;
        auto xs = num::linspace(a, b, spec.options().grid_n);
        // cumulative defect sweep over the stated interval [c'(q_{j-1}), c'(q_j)]
        double acc = integral_rj(theta_j, theta_j, xs[0]);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (k > 0) acc += integral_rj(theta_j, xs[k - 1], xs[k]);
            double d = acc - Aj * (xs[k] - theta_j);
            if (d < margin) {
                margin = d;
                witness = xs[k];
            }
        }
        // equality enforcement at interior boundary types
        for (double bt : {a, b}) {
            if (bt <= lo + tol || bt >= hi - tol) continue;
            double d = integral_rj(theta_j, theta_j, bt) - Aj * (bt - theta_j);
            if (-std::abs(d) < margin) {
                margin = -std::abs(d);
                witness = bt;
            }
        }
        rep.margin = margin;
        rep.witness = witness;
        rep.holds = margin >= -tol;
        reports.push_back(rep);
        ++jump_index;
    }

    int reveal_index = 0;
    for (const Segment& s : scheme.segments) {
        if (s.kind != SegmentKind::reveal) continue;
        ConditionReport rep = monotone_decreasing_report(
            "C-j", spec, [&](double t) { return r_j(s.lo, t); }, s.lo, s.hi);
        rep.cutoff = s.lo;
        rep.segment = reveal_index++;
        reports.push_back(rep);
    }
    return reports;
}

double N1_of(const ProblemSpec& spec, double theta) {
    double qf = spec.q_full(theta);
    double f = spec.dist().pdf(theta);
    double fp = spec.dist().pdf_deriv(theta);
    double cpp = spec.cost().cpp(qf);
    double curvature = cpp > 0 ? spec.psi_qq(qf, theta) / cpp : 0.0;
    return (curvature + spec.psi_qtheta(qf, theta)) * theta +
           spec.psi_q(qf, theta) * (1.0 + theta * fp / f);
}

ConditionReport check_N1(const ProblemSpec& spec, double lo, double hi) {
    // keep clear of endpoint density zeros
    double a = lo, b = hi;
    const double h = (spec.theta_hi() - spec.theta_lo()) / 4000.0;
    while (a < b && spec.dist().pdf(a) <= 1e-12) a += h;
    while (b > a && spec.dist().pdf(b) <= 1e-12) b -= h;
    ConditionReport rep = monotone_decreasing_report(
        "N1", spec, [&](double t) { return N1_of(spec, t); }, a, b);
    rep.cutoff = lo;
    return rep;
}

ConditionReport check_N2(const ProblemSpec& spec, double theta_j, double A_j, double lo,
                         double hi, bool relaxed) {
    const double kappa = spec.kappa();
    double Fj = spec.dist().cdf(theta_j);
    auto n2 = [&](double t) {
        double f = spec.dist().pdf(t);
        if (f <= 1e-14) f = 1e-14;
        if (relaxed) return kappa * t + kappa * spec.dist().cdf(t) / f;
        return A_j / f + kappa * t + kappa * (spec.dist().cdf(t) - Fj) / f;
    };
    double a = lo, b = hi;
    const double h = (spec.theta_hi() - spec.theta_lo()) / 4000.0;
    while (a < b && spec.dist().pdf(a) <= 1e-12) a += h;
    while (b > a && spec.dist().pdf(b) <= 1e-12) b -= h;
    ConditionReport rep = monotone_decreasing_report("N2", spec, n2, a, b);
    rep.cutoff = theta_j;
    if (relaxed) rep.note = "relaxed-footnote";
    return rep;
}

double G_of(const CharacteristicCtx& ctx, double theta) {
    const ProblemSpec& spec = ctx.spec();
    const double thetaL = ctx.theta_L();
    const double kappa = ctx.kappa();
    if (!(thetaL - theta > 1e-12))
        throw spec_error("G_of: theta must be strictly below theta_L");
    double integral = num::integrate(
        [&](double t) { return spec.psi_q(ctx.q_standard(), t) * spec.dist().pdf(t); },
        theta, thetaL, ctx.breakpoints(), spec.options().quad_rel,
        spec.options().quad_abs);
    double F = spec.dist().cdf(theta);
    double F0 = spec.dist().cdf(ctx.cutoff());
    return integral / (thetaL - theta) -
           kappa * (theta - ctx.theta_c()) * (1.0 - F) / (thetaL - theta) -
           kappa * (1.0 - F0);
}

std::pair<ConditionReport, ConditionReport> check_AB(const ProblemSpec& spec,
                                                     double theta0) {
    CharacteristicCtx ctx(spec, theta0);
    const double tol = spec.options().tol_cond;
    const double thetaL = ctx.theta_L();

    ConditionReport ab1;
    ab1.id = "AB-i";
    ab1.cutoff = theta0;
    if (thetaL - theta0 <= 1e-12) {
        ab1.holds = true;
        ab1.margin = 0.0;
        ab1.witness = theta0;
        ab1.note = "vacuous";
    } else {
        // G(theta|theta0) <= G(theta0|theta0) rewritten as the chord defect
        // R(theta) - R(theta0) - A_AB (theta - theta0) >= 0, the same units as (S1)
        double A_AB = G_of(ctx, theta0);
        DefectScan d = defect_min(ctx, A_AB, theta0 + kEps, thetaL);
        ab1.margin = d.margin;
        ab1.witness = d.witness;
        ab1.holds = d.margin >= -tol;
    }

    ConditionReport ab2 = check_C(ctx);
    ab2.id = "AB-ii";

    SBundle sb = check_S(ctx);
    if (sb.S1.holds && !ab1.holds) ab1.note = "s1-holds-ab-gap";
    return {ab1, ab2};
}

}  // namespace ratingforge
