#pragma once

#include <vector>

#include "ratingforge/problem.hpp"

namespace ratingforge {

/// Characteristic function context at a candidate cutoff theta0: evaluates
/// r(theta), its primitive R(theta), chord slopes L and the multiplier A that
/// the optimality conditions are written in. In linear-delegation mode r uses
/// the closed (beta(theta) - alpha theta) f - alpha (F - F(theta0)) form; in
/// general mode it is the piecewise exclusion / bunching / revealing form
/// evaluated along the lower-censorship scheme at theta0. Off the support the
/// constant extension values kappa F(theta0) and -kappa (1 - F(theta0)) apply.
class CharacteristicCtx {
public:
    CharacteristicCtx(ProblemSpec spec, double theta0);

    const ProblemSpec& spec() const { return spec_; }
    double cutoff() const { return theta0_; }
    double kappa() const { return kappa_; }
    bool linear_mode() const { return linear_; }
    double theta_c() const { return theta_c_; }
    double theta_L() const { return theta_L_; }
    /// Pooled standard q_i(theta0).
    double q_standard() const { return q_std_; }

    /// r at theta: right-continuous at interior jumps, in-support values at
    /// the endpoints (the constant extension applies strictly outside).
    double r(double theta) const { return r_side(theta, 0); }
    double r_left(double theta) const { return r_side(theta, -1); }
    double r_right(double theta) const { return r_side(theta, +1); }

    /// R(theta) = int_{theta_lo}^theta r; constant-extension tails are exact.
    double R(double theta) const;
    /// Batch R over a sorted grid (single cumulative sweep).
    std::vector<double> R_values(const std::vector<double>& thetas) const;

    /// Chord slope of R between theta0 and theta; one-sided r limit at theta0.
    double L_slope(double theta) const;

    /// Multiplier A(theta0): chord of R between theta0 and theta_c(theta0),
    /// r(theta0+) when the chord degenerates (theta0 = 0).
    double A() const { return A_; }
    /// Equivalent psi_q-integral form of A (agreement asserted in debug).
    double A_psi_form() const;

    /// Integration breakpoints: support ends, cutoff, theta_c and density kinks.
    const std::vector<double>& breakpoints() const { return breaks_; }

private:
    double r_side(double theta, int side) const;
    double panel_integral(double a, double b) const;
    double compute_A() const;

    ProblemSpec spec_;
    double theta0_;
    double kappa_;
    bool linear_;
    double theta_c_, theta_L_, q_std_;
    double F0_;
    std::vector<double> breaks_;       // sorted, within [theta_lo, theta_hi]
    std::vector<double> prefix_;       // R at each breakpoint
    double A_ = 0.0;
};

}  // namespace ratingforge
