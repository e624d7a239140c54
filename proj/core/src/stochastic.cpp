#include "ratingforge/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratingforge/conditions.hpp"
#include "ratingforge/numeric.hpp"

namespace ratingforge {

void Allocation::validate() const {
    if (theta.size() < 2 || theta.size() != q.size() || theta.size() != w.size())
        throw spec_error("allocation: need >= 2 aligned (theta, q, w) rows");
    for (std::size_t i = 1; i < theta.size(); ++i) {
        if (!(theta[i] > theta[i - 1]))
            throw spec_error("allocation: theta grid must be strictly increasing");
        if (q[i] < q[i - 1] - 1e-9)
            throw spec_error("allocation: q must be increasing (IC-Mon)");
        if (w[i] < w[i - 1] - 1e-9)
            throw spec_error("allocation: w must be increasing (implied by IC)");
    }
}

Allocation allocation_from_scheme(const ProblemSpec& spec,
                                  const DeterministicScheme& scheme, std::size_t n) {
    Allocation a;
    std::vector<double> grid = num::linspace(spec.theta_lo(), spec.theta_hi(), n);
    for (const Segment& s : scheme.segments)
        if (s.lo > spec.theta_lo() && s.lo < spec.theta_hi()) grid.push_back(s.lo);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    a.theta = grid;
    a.q.reserve(grid.size());
    for (double t : grid) a.q.push_back(scheme.quality(spec, t));
    a.w = a.q;  // deterministic ratings pay the chosen quality
    a.rent0 = 0.0;
    return a;
}

std::vector<double> envelope_wage(const ProblemSpec& spec, const std::vector<double>& theta,
                                  const std::vector<double>& q, double rent0) {
    if (theta.size() != q.size() || theta.size() < 2)
        throw spec_error("envelope_wage: need aligned theta/q grids");
    const std::size_t n = theta.size();
    std::vector<double> w(n, 0.0);
    double t0 = theta.front();
    if (t0 < 1e-12) {
        if (rent0 > 1e-12)
            throw solver_error(solver_errc::divergence,
                               "envelope_wage: positive rent at theta = 0 is infeasible");
        w[0] = 0.0;  // limit value; IR binds with q(0) = 0
    } else {
        w[0] = (spec.cost().c(q.front()) + rent0) / t0;
    }
    // flag cells where q jumps: the wage jumps with it, and the trapezoid must
    // not straddle the discontinuity (the left value carries the whole cell)
    double scale = (q.back() - q.front()) / (theta.back() - theta.front());
    double integral = 0.0;  // int_{theta_lo}^{theta_k} w, trapezoid
    for (std::size_t k = 1; k < n; ++k) {
        double h = theta[k] - theta[k - 1];
        bool jump = (q[k] - q[k - 1]) > 50.0 * h * (std::abs(scale) + 1.0) + 1e-9;
        if (jump) {
            // theta w - c(q) = I_{k-1} + h w_{k-1} + rent0 (jump at theta_k)
            w[k] = (spec.cost().c(q[k]) + integral + h * w[k - 1] + rent0) / theta[k];
            integral += h * w[k - 1];
            continue;
        }
        // theta w - c(q) = I_{k-1} + (h/2)(w_{k-1} + w_k) + rent0, solve for w_k
        double denom = theta[k] - 0.5 * h;
        if (denom <= 0.0)
            throw solver_error(solver_errc::divergence,
                               "envelope_wage: grid too coarse near theta = 0");
        w[k] = (spec.cost().c(q[k]) + integral + 0.5 * h * w[k - 1] + rent0) / denom;
        integral += 0.5 * h * (w[k - 1] + w[k]);
    }
    return w;
}

double envelope_residual(const ProblemSpec& spec, const Allocation& alloc) {
    alloc.validate();
    const std::size_t n = alloc.theta.size();
    auto I = num::cumulative_parabolic(alloc.theta, alloc.w);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double lhs = alloc.theta[k] * alloc.w[k] - spec.cost().c(alloc.q[k]);
        double rhs = I[k] + alloc.rent0;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

FeasibilityReport feasibility_check(const ProblemSpec& spec, const Allocation& alloc) {
    alloc.validate();
    const std::size_t n = alloc.theta.size();
    FeasibilityReport rep;
    // D by cumulative trapezoid of (w - q) f on the allocation grid
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i)
        integrand[i] = (alloc.w[i] - alloc.q[i]) * spec.dist().pdf(alloc.theta[i]);
    rep.D = num::cumulative_trapezoid(alloc.theta, integrand);

    rep.mps_margin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rep.mps_margin = std::min(rep.mps_margin, rep.D[i]);
        if (!rep.has_violation && rep.D[i] < -1e-8) {
            rep.has_violation = true;
            rep.first_violation_theta = alloc.theta[i];
        }
    }
    rep.mps_holds = !rep.has_violation;
    rep.bp_residual = rep.D.back();

    rep.bp_decides = true;  // Corollary: w' <= q' everywhere => BP alone decides
    for (std::size_t i = 1; i < n && rep.bp_decides; ++i) {
        double dw = alloc.w[i] - alloc.w[i - 1];
        double dq = alloc.q[i] - alloc.q[i - 1];
        if (dw > dq + 1e-9) rep.bp_decides = false;
    }
    return rep;
}

double elasticity(const Distribution& dist, double theta) {
    double f = dist.pdf(theta);
    if (f <= 0.0) throw spec_error("elasticity: density is zero at theta");
    return theta * dist.pdf_deriv(theta) / f;
}

NoisyTest noisy_test(const ProblemSpec& spec, const Allocation& alloc) {
    alloc.validate();
    if (alloc.theta.front() < spec.theta_lo() - 1e-9 ||
        alloc.theta.back() > spec.theta_hi() + 1e-9)
        throw spec_error("noisy_test: allocation grid leaves the support");
    const std::size_t n = alloc.theta.size();
    for (std::size_t i = 1; i < n; ++i) {
        double dw = alloc.w[i] - alloc.w[i - 1];
        double dq = alloc.q[i] - alloc.q[i - 1];
        if (dw > dq + 1e-9)
            throw solver_error(solver_errc::precondition_violated,
                               "noisy_test: requires w' <= q' on the grid");
    }
    // w_hat over the induced quality range (dedupe pooled runs)
    std::vector<double> qs, ws;
    for (std::size_t i = 0; i < n; ++i) {
        if (!qs.empty() && alloc.q[i] <= qs.back() + 1e-12) continue;
        qs.push_back(alloc.q[i]);
        ws.push_back(alloc.w[i]);
    }
    if (qs.size() < 2)
        throw solver_error(solver_errc::precondition_violated,
                           "noisy_test: degenerate quality range");
    num::Pchip w_hat(qs, ws);

    NoisyTest out;
    auto gap = [&](double x) { return w_hat(x) - x; };
    double g_lo = gap(qs.front()), g_hi = gap(qs.back());
    double tol = 1e-10 * (1.0 + std::abs(ws.back()));
    bool all_zero = true;
    for (double x : qs) all_zero &= std::abs(gap(x)) <= 1e-9;
    if (all_zero) {
        out.q_pool = 0.5 * (qs.front() + qs.back());  // w = q: degenerate, p = 0
        out.q = alloc.q;
        out.p.assign(n, 0.0);
        return out;
    }
    if ((g_lo > 0) == (g_hi > 0)) {
        // scan for an interior sign change (BP guarantees one when it holds)
        double prev = qs.front(), gprev = g_lo;
        bool found = false;
        for (double x : num::linspace(qs.front(), qs.back(), 257)) {
            double g = gap(x);
            if ((g > 0) != (gprev > 0)) {
                out.q_pool = num::find_root(gap, prev, x, tol);
                found = true;
                break;
            }
            prev = x;
            gprev = g;
        }
        if (!found)
            throw solver_error(solver_errc::precondition_violated,
                               "noisy_test: w_hat has no fixed point on the range");
    } else {
        out.q_pool = num::find_root(gap, qs.front(), qs.back(), tol);
    }

    out.q = alloc.q;
    out.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double q = alloc.q[i];
        if (std::abs(q - out.q_pool) < 1e-10) {
            out.p[i] = 0.0;
            continue;
        }
        double p = (q - w_hat(q)) / (q - out.q_pool);
        if (p < -1e-6 || p > 1.0 + 1e-6)
            throw solver_error(solver_errc::precondition_violated,
                               "noisy_test: disclosure probability escapes [0, 1]");
        out.p[i] = std::clamp(p, 0.0, 1.0);
    }
    return out;
}

double pooled_posterior_mean(const ProblemSpec& spec, const Allocation& alloc,
                             const NoisyTest& test) {
    const std::size_t n = alloc.theta.size();
    std::vector<double> num_i(n), den_i(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = spec.dist().pdf(alloc.theta[i]);
        num_i[i] = test.p[i] * alloc.q[i] * f;
        den_i[i] = test.p[i] * f;
    }
    double numer = num::cumulative_trapezoid(alloc.theta, num_i).back();
    double denom = num::cumulative_trapezoid(alloc.theta, den_i).back();
    if (denom <= 1e-14)
        throw solver_error(solver_errc::precondition_violated,
                           "pooled_posterior_mean: pooled score has zero mass");
    return numer / denom;
}

std::vector<ImprovementFlag> improvement_scan(const ProblemSpec& spec,
                                              const DeterministicScheme& scheme) {
    std::vector<ImprovementFlag> flags;
    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    for (const Segment& s : scheme.segments) {
        if (s.kind == SegmentKind::reveal) {
            ConditionReport rep = check_N1(spec, s.lo, s.hi);
            if (!rep.holds)
                flags.push_back({s.lo, s.hi, "reveal-n1-conclusive", rep});
        } else if (s.kind == SegmentKind::pooling) {
            bool whole_support = s.lo <= lo + 1e-9 && s.hi >= hi - 1e-9;
            // the anchor is the cutoff type of the standard, AC(q_j), which
            // sits below theta_lo for no-exclusion schemes
            double theta_j = s.standard > 0.0
                                 ? spec.cost().c(s.standard) / s.standard
                                 : s.lo;
            double A_j = 0.0;
            if (!whole_support) {
                CharacteristicCtx ctx(spec, theta_j);
                A_j = ctx.A();
            }
            ConditionReport rep = check_N2(spec, theta_j, A_j, s.lo, s.hi, whole_support);
            if (!rep.holds) {
                rep.note = rep.note.empty() ? "advisory" : rep.note + ";advisory";
                flags.push_back({s.lo, s.hi, "pool-n2-advisory", rep});
            }
        }
    }
    return flags;
}

namespace {

double wedge_weight(FeeMode mode, double alpha) {
    if (mode == FeeMode::monopoly) return 1.0;
    if (!(alpha > 0.0)) throw spec_error("fee_wedge: regulator weight must be > 0");
    return (2.0 * alpha - 1.0) / alpha;
}

}  // namespace

double fee_wedge(const ProblemSpec& spec, FeeMode mode, double alpha, double theta) {
    // multiplicative cost: c_q = c'(q)/theta, c_qtheta = -c'(q)/theta^2, so the
    // marginal condition pins c'(q*) = theta^2 f / (theta f + W (1 - F))
    double W = wedge_weight(mode, alpha);
    double f = spec.dist().pdf(theta);
    if (f <= 0.0) throw spec_error("fee_wedge: density is zero at theta");
    double denom = theta * f + W * (1.0 - spec.dist().cdf(theta));
    if (denom <= 0.0) return 0.0;  // corner: q* = 0
    return theta * f / denom;      // = c_q(q*, theta) = w'/q'
}

double fee_wedge_quality(const ProblemSpec& spec, FeeMode mode, double alpha,
                         double theta) {
    double wedge = fee_wedge(spec, mode, alpha, theta);
    if (wedge <= 0.0) return 0.0;
    return spec.q_full(wedge * theta);  // c'(q*) = wedge * theta
}

}  // namespace ratingforge
