#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratingforge {

/// Error raised when an instance fails validation (bad parameters, schema
/// violations, invariant breaches detected at construction).
class spec_error : public std::runtime_error {
public:
    explicit spec_error(const std::string& what) : std::runtime_error(what) {}
};

enum class solver_errc {
    bracket_failure,
    no_root,
    grid_too_large,
    precondition_violated,
    degenerate_cost,
    malformed_scheme,
    divergence,
    validity_violated,
};

/// Error raised by solvers and checkers when a numerical procedure cannot
/// proceed (failed bracket, oversized enumeration, violated precondition).
class solver_error : public std::runtime_error {
public:
    solver_error(solver_errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    solver_errc code() const { return code_; }

private:
    solver_errc code_;
};

const char* to_string(solver_errc c);

/// Numeric knobs shared across modules. Defaults match the tolerances the
/// checkers and tests are built around; instances are immutable once a
/// ProblemSpec is constructed.
struct NumericOptions {
    double tol_root = 1e-10;     // absolute residual for bracketed root finds
    double quad_rel = 1e-9;      // adaptive Simpson relative tolerance
    double quad_abs = 1e-12;     // adaptive Simpson absolute floor
    double tol_cond = 1e-8;      // condition margin tolerance
    double tol_mono = 1e-8;      // weak monotonicity tolerance at grid resolution
    std::size_t grid_n = 2001;   // default per-interval condition grid
    std::size_t scan_n = 512;    // sign-change scan for V'
    bool allow_linear_cost = false;  // permit c'(0) > 0 (ability-signaling runs)
};

/// Worker cap used by parallel enumeration; reads RATING_FORGE_THREADS.
std::size_t worker_count();

}  // namespace ratingforge
