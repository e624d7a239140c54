#pragma once

#include <string>
#include <vector>

#include "ratingforge/conditions.hpp"
#include "ratingforge/scheme.hpp"

namespace ratingforge {

/// Principal value of lower censorship with cutoff theta0:
/// int_{theta0}^{theta_L} psi(q_i(theta0), t) dF + int_{theta_L}^{hi} psi(q_f(t), t) dF.
double V_of(const ProblemSpec& spec, double theta0);

/// Closed-form V'(theta0) = A(theta0) q_i(theta0) - psi(q_i(theta0), theta0) f(theta0).
double V_prime(const ProblemSpec& spec, double theta0);

struct CutoffSolution {
    double theta0 = 0.0;
    double value = 0.0;
    std::string kkt;   // "interior-root" | "boundary-zero" | "kink" | "plateau"
    bool plateau = false;
    double set_lo = 0.0, set_hi = 0.0;  // maximizing cutoff set
    std::vector<double> candidates;     // payoff-maximizing candidates (ties included)
};

/// Root of the first-order condition (OPT), ties broken toward the smallest
/// maximizing cutoff; plateaus report the full maximizing set.
CutoffSolution solve_cutoff(const ProblemSpec& spec);

/// Lower-censorship scheme at cutoff theta0: exclusion below theta0, pooling
/// at q_i(theta0) up to theta_L(theta0), revealing above. Empty segments drop.
DeterministicScheme build_scheme(const ProblemSpec& spec, double theta0);

/// int psi(q(theta), theta) dF over the scheme segments (IC-audited first).
double scheme_payoff(const ProblemSpec& spec, const DeterministicScheme& scheme);

struct SolveResult {
    DeterministicScheme scheme;
    double cutoff = 0.0;
    double value = 0.0;
    std::string regime;  // fully-revealing | lower-censorship |
                         // lower-censorship-no-exclusion | pass-fail | multi-standard
    std::vector<std::string> tie_regimes;
    bool plateau = false;
    double set_lo = 0.0, set_hi = 0.0;
    SBundle s_reports;
    ConditionReport c_report;
    bool sufficiency_only = false;  // general (non-LD) mode: conditions only certify
    bool oracle_ran = false;
    bool oracle_agrees = false;
    double oracle_value = 0.0;
    std::vector<double> oracle_menu;
};

/// Solve, build, check and label the optimal deterministic regime. With
/// `oracle_grid_n` > 0 the result is cross-checked against the menu DP on an
/// anchored quality grid of that size.
SolveResult classify_regime(const ProblemSpec& spec, std::size_t oracle_grid_n = 12);

/// Structural label of a scheme built at `theta0` (shared by classify/tie logic).
std::string regime_label(const ProblemSpec& spec, double theta0,
                         const DeterministicScheme& scheme);

}  // namespace ratingforge
