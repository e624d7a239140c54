#pragma once

#include <string>
#include <vector>

#include "ratingforge/conditions.hpp"
#include "ratingforge/scheme.hpp"

namespace ratingforge {

/// Tabulated direct mechanism (theta_k, q_k, w_k) with the lowest-type rent.
struct Allocation {
    std::vector<double> theta;
    std::vector<double> q;
    std::vector<double> w;
    double rent0 = 0.0;

    void validate() const;
};

/// MPS/BP audit of an allocation: D(theta) = int (w - q) dF, its minimum, the
/// BP residual D(theta_hi), and the Corollary shortcut flag (w' <= q'
/// everywhere makes BP alone decide feasibility).
struct FeasibilityReport {
    bool mps_holds = false;
    double mps_margin = 0.0;
    bool has_violation = false;
    double first_violation_theta = 0.0;
    double bp_residual = 0.0;
    bool bp_decides = false;
    std::vector<double> D;
};

/// Tabulate a deterministic scheme as an allocation with w = q on a grid that
/// includes every scheme breakpoint.
Allocation allocation_from_scheme(const ProblemSpec& spec,
                                  const DeterministicScheme& scheme, std::size_t n);

/// Interim wage from (IC-Env): theta w - c(q) = int w + rent0, solved by
/// forward trapezoid recursion on the allocation grid.
std::vector<double> envelope_wage(const ProblemSpec& spec, const std::vector<double>& theta,
                                  const std::vector<double>& q, double rent0);

/// Max residual of the envelope equation for a given (theta, q, w) table.
double envelope_residual(const ProblemSpec& spec, const Allocation& alloc);

FeasibilityReport feasibility_check(const ProblemSpec& spec, const Allocation& alloc);

/// Density elasticity theta f'(theta) / f(theta).
double elasticity(const Distribution& dist, double theta);

/// Albano-Lizzeri noisy test: disclosure probability p(q) = (q - w_hat(q)) /
/// (q - q_pool) with p(q_pool) = 0 at the fixed point of w_hat.
struct NoisyTest {
    std::vector<double> q;
    std::vector<double> p;
    double q_pool = 0.0;
};

NoisyTest noisy_test(const ProblemSpec& spec, const Allocation& alloc);

/// Posterior mean of the pooled score induced by p and the equilibrium
/// assignment (quadrature over the allocation); equals q_pool under (BP).
double pooled_posterior_mean(const ProblemSpec& spec, const Allocation& alloc,
                             const NoisyTest& test);

/// Interval flagged by the stochastic-improvement scan.
struct ImprovementFlag {
    double lo = 0.0, hi = 0.0;
    std::string kind;  // "reveal-n1-conclusive" | "pool-n2-advisory"
    ConditionReport report;
};

/// Runs (N1) on revealing segments (failures conclusive per the
/// full-revelation lemma) and (N2) on pooling segments (failures advisory).
std::vector<ImprovementFlag> improvement_scan(const ProblemSpec& spec,
                                              const DeterministicScheme& scheme);

enum class FeeMode { monopoly, regulator };

/// Wedge c_q(q*(theta), theta) of the constant-fee marginal condition
/// c_q = 1 + W (1-F)/f c_qtheta, W = 1 (monopoly) or (2 alpha - 1)/alpha
/// (regulator); a wedge < 1 means a noisy test implements the optimum.
double fee_wedge(const ProblemSpec& spec, FeeMode mode, double alpha, double theta);
/// The quality solving that marginal condition (0 at the corner).
double fee_wedge_quality(const ProblemSpec& spec, FeeMode mode, double alpha, double theta);

}  // namespace ratingforge
