#pragma once

#include <string>
#include <vector>

#include "ratingforge/scheme.hpp"

namespace ratingforge {

/// Delegation set: sorted distinct quality levels, implicit outside option 0.
struct Menu {
    std::vector<double> levels;
};

struct GridSpec {
    std::vector<double> qualities;
    std::vector<double> thetas;
};

/// Agent best response: argmax over menu and the outside option of
/// theta q - c(q); exact ties go to the larger quality.
double best_response(const CostFn& cost, const Menu& menu, double theta);

/// Principal value of a delegation set: indifference thresholds between
/// consecutive undominated items, psi integrated over the induced assignment.
double menu_payoff(const ProblemSpec& spec, const Menu& menu);

struct MenuSolution {
    Menu menu;
    double value = 0.0;
};

/// Exhaustive subset oracle (grid size <= 20). Ties break toward fewer
/// elements, then lexicographically smallest.
MenuSolution brute_force_menus(const ProblemSpec& spec, const std::vector<double>& grid);

/// O(n^3) dynamic program over ordered menu items; value and menu match
/// brute_force_menus exactly (identical payoff decomposition and tie-breaks).
MenuSolution dp_optimal_menu(const ProblemSpec& spec, const std::vector<double>& grid);

/// Quality grid for oracle runs: pooled standard of the candidate cutoff and
/// q_f(theta_hi) anchored, remaining levels spread over the revealing range.
std::vector<double> anchored_quality_grid(const ProblemSpec& spec, double cutoff,
                                          std::size_t n);

/// One audited IC requirement with its numeric residual.
struct IcCheck {
    std::string what;
    double at = 0.0;
    double residual = 0.0;
};

struct IcAuditReport {
    bool ok = false;
    double max_residual = 0.0;
    std::vector<IcCheck> checks;
};

/// Audits a scheme against the incentive-compatibility structure lemma:
/// ordering/alternation, jump indifference, pooling widths via the clamped
/// c' inverse, and the participation standard at the cutoff.
IcAuditReport ic_audit(const ProblemSpec& spec, const DeterministicScheme& scheme);

/// ic_audit that throws malformed-scheme on failure (used by payoff paths).
void ic_audit_or_throw(const ProblemSpec& spec, const DeterministicScheme& scheme);

/// Additive-cost-mode constants: e_f solves c'(e) = 1, e_i is the positive
/// fixed point of c(e) = e.
std::pair<double, double> additive_cost_constants(const CostFn& cost);

/// Quadratic-effort cutoff slack 2 f(theta0) - [F(theta0+1) - F(theta0-1)].
double additive_cutoff_margin(const Distribution& dist, double theta0);

}  // namespace ratingforge
