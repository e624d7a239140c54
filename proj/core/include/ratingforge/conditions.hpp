#pragma once

#include <string>
#include <vector>

#include "ratingforge/characteristic.hpp"
#include "ratingforge/scheme.hpp"

namespace ratingforge {

/// Pass/fail plus the signed worst-case slack and the point attaining it.
/// holds is margin >= -tol_cond; a positive margin is genuine headroom.
struct ConditionReport {
    std::string id;
    bool holds = false;
    double margin = 0.0;
    double witness = 0.0;
    double cutoff = 0.0;
    int segment = -1;     // segment index for the multi-standard checks
    std::string note;     // "vacuous", "advisory", "relaxed-footnote", ...
};

/// Subgradient condition (S) with its bunching-side (S1) and exclusion-side
/// (S2) decomposition. S.margin = min(S1, S2, A - tol).
struct SBundle {
    ConditionReport S, S1, S2;
    double A = 0.0;
};

SBundle check_S(const CharacteristicCtx& ctx);

/// Condition (C): r decreasing on (theta_L, theta_hi]; vacuous when the
/// revealing region is empty.
ConditionReport check_C(const CharacteristicCtx& ctx);

/// Quasi-shape classification of r via witness cutoffs. `labels` holds every
/// satisfied label; `label` applies the documented precedence
/// quasi-decreasing > quasi-increasing > quasi-unimodal.
struct QuasiClass {
    std::string label = "none";
    std::vector<std::string> labels;
    double witness_cutoff = 0.0;
    std::vector<ConditionReport> reports;
};

QuasiClass classify_quasi(const ProblemSpec& spec);

/// Multi-standard conditions (S-j)/(C-j) along a scheme: one S-j report per
/// jump (with equality enforcement at interior boundary types) and one C-j
/// report per revealing interval.
std::vector<ConditionReport> check_Sj_Cj(const ProblemSpec& spec,
                                         const DeterministicScheme& scheme);

/// Condition (N1): N1(theta) decreasing on [lo, hi].
ConditionReport check_N1(const ProblemSpec& spec, double lo, double hi);
double N1_of(const ProblemSpec& spec, double theta);

/// Condition (N2) on a pooling segment [lo, hi] anchored at theta_j with
/// multiplier A_j; `relaxed` switches to the bunching-without-exclusion form.
ConditionReport check_N2(const ProblemSpec& spec, double theta_j, double A_j, double lo,
                         double hi, bool relaxed = false);

/// Amador-Bagwell comparison: AB(i) via G(theta|theta0) and AB(ii) (= (C)).
/// AB(i) margins use the same chord-defect units as (S1), so the two agree
/// exactly whenever theta_c(theta0) <= theta_hi.
std::pair<ConditionReport, ConditionReport> check_AB(const ProblemSpec& spec, double theta0);

/// Appendix-D G function (exposed for the chord-equivalence property test).
double G_of(const CharacteristicCtx& ctx, double theta);

}  // namespace ratingforge
