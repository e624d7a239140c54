#pragma once

#include <iosfwd>
#include <string>

#include "ratingforge/conditions.hpp"
#include "ratingforge/menu.hpp"
#include "ratingforge/signaling.hpp"
#include "ratingforge/solver.hpp"
#include "ratingforge/stochastic.hpp"

namespace ratingforge::io {

/// Strict-schema JSON loaders: unknown fields are errors.
ProblemSpec load_problem(const std::string& json_text);
ProblemSpec load_problem_file(const std::string& path);

/// JSON renderers (deterministic field order, no wall-clock content).
std::string to_json(const ConditionReport& rep);
std::string to_json(const SBundle& b);
std::string to_json(const SolveResult& res, const ProblemSpec& spec);
std::string to_json(const QuasiClass& qc);
std::string to_json(const FeasibilityReport& rep);
std::string to_json(const FeeDesign& fd);
std::string to_json(const IcAuditReport& rep);

/// Scheme CSV (theta,q,segment_kind); segment boundaries are emitted exactly
/// so the import reconstructs the same breakpoints.
std::string scheme_to_csv(const ProblemSpec& spec, const DeterministicScheme& scheme,
                          std::size_t rows_per_segment = 33);
DeterministicScheme scheme_from_csv(const ProblemSpec& spec, const std::string& csv);

/// Allocation CSV (theta,q,w[,D]); D is ignored on import.
std::string allocation_to_csv(const Allocation& alloc, const std::vector<double>* D = nullptr);
Allocation allocation_from_csv(const std::string& csv);

std::string conditions_to_csv(const std::vector<ConditionReport>& reports);

/// Menu choice table (theta, chosen_q) sampled on an n-point type grid.
std::string menu_choices_to_csv(const ProblemSpec& spec, const Menu& menu, std::size_t n);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ratingforge::io
