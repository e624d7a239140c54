#pragma once

#include <vector>

#include "ratingforge/conditions.hpp"

namespace ratingforge {

/// Full-separation scheme of the ability-signaling case: wage w = theta, the
/// quality path solves c'(q_f) q_f' = theta from the binding IR at the bottom.
struct SeparationScheme {
    std::vector<double> theta;
    std::vector<double> q;

    /// Market wage over the induced quality range (inverse interpolation).
    double w_hat(double quality) const;
    double q_at(double theta_value) const;
};

/// Integrates the separation ODE by RK4 on an n-point grid; theta_lo = 0
/// starts at 1e-6 from the exact local value c(q) = theta^2 / 2.
SeparationScheme full_separation(const ProblemSpec& spec, std::size_t n = 2001);

/// J(theta | q_f): the virtual-value-like index whose monotonicity decides
/// full separation.
double J_of(const ProblemSpec& spec, const SeparationScheme& scheme, double theta);

/// Monotone-increase margin of J over the support.
ConditionReport check_full_separation(const ProblemSpec& spec);

/// Convexity of q_f on [theta_L, theta_hi] by second differences (separation
/// at the top).
ConditionReport separation_at_top(const ProblemSpec& spec, double theta_L);

/// Constant-testing-fee design for the rho-weighted certifier objective.
struct FeeDesign {
    double rho = 1.0;
    double cutoff = 0.0;     // participation cutoff theta0*
    double fee = 0.0;        // P*
    double outside_wage = 0.0;  // E[theta | theta <= theta0*]
    std::vector<double> theta;
    std::vector<double> q;   // induced investment q*(theta)
    std::vector<double> w;   // interim wage w*(theta)
    double max_w_slope = 0.0;
};

/// Solves the pointwise first-order condition for q*, the stated cutoff and
/// fee formulas, and the wage integral; errors when the noisy-test validity
/// w*' < 1 fails.
FeeDesign fee_design(const ProblemSpec& spec, double rho, std::size_t n = 2001);

/// Additive-cost (c(q, theta) = c(q - theta)) separation index under effort
/// maximization. The full-separation effort is the constant e_f = c'^{-1}(1),
/// so the index is J = -1/c'(e_f) - (1-F)/f (c''/c'^2) e_f' with e_f' = 0.
double additive_separation_index(const CostFn& cost, const Distribution& dist,
                                 double theta);

}  // namespace ratingforge
