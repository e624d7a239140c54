#pragma once

#include <functional>
#include <vector>

#include "ratingforge/common.hpp"

namespace ratingforge::num {

using Fn = std::function<double(double)>;

/// Bracketed root find: bisection refined by secant steps. The bracket
/// [lo, hi] must satisfy sign(f(lo)) != sign(f(hi)) (zero endpoints accepted).
/// Stops when |f(x)| <= tol_resid or the bracket collapses.
double find_root(const Fn& f, double lo, double hi, double tol_resid = 1e-10);

/// Leftmost point where the increasing predicate value crosses target:
/// returns inf{x in [lo,hi] : g(x) >= target} by bisection on the predicate.
/// Used for inverses of weakly increasing maps (c', AC).
double find_crossing_increasing(const Fn& g, double lo, double hi, double target,
                                double tol_resid = 1e-10);

/// Adaptive Simpson on [a, b]. Splits first at the supplied breakpoints so the
/// integrand is only ever sampled on panels where it is smooth.
double integrate(const Fn& f, double a, double b,
                 const std::vector<double>& breakpoints = {},
                 double rel_tol = 1e-9, double abs_tol = 1e-12);

/// Prefix integrals of f along sorted grid points: out[i] = int_{xs[0]}^{xs[i]} f.
/// Each gap is integrated adaptively, so accuracy does not depend on grid size.
std::vector<double> cumulative(const Fn& f, const std::vector<double>& xs,
                               double rel_tol = 1e-9, double abs_tol = 1e-12);

/// Cumulative integral of tabulated samples by the trapezoid rule.
std::vector<double> cumulative_trapezoid(const std::vector<double>& xs,
                                         const std::vector<double>& ys);

/// Cumulative integral of tabulated samples using sliding three-point
/// parabolas; O(h^3) local error, used where trapezoid is too coarse.
std::vector<double> cumulative_parabolic(const std::vector<double>& xs,
                                         const std::vector<double>& ys);

/// Golden-section minimizer on [lo, hi].
double golden_minimize(const Fn& f, double lo, double hi, double tol_x = 1e-10);

/// Uniform grid of n points on [a, b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

struct GridMin {
    double x = 0.0;
    double value = 0.0;
};

/// Minimum of f over a grid on [a, b], refined 10x around every sign change
/// and around the coarse minimizer before the value is declared.
GridMin min_scan(const Fn& f, double a, double b, std::size_t n,
                 int refine_factor = 10);

/// Monotone cubic (Fritsch-Carlson) interpolant through strictly increasing
/// abscissae. Used for tabulated distribution and cost families.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    double derivative(double x) const;

    double x_front() const { return xs_.front(); }
    double x_back() const { return xs_.back(); }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    std::size_t segment(double x) const;

    std::vector<double> xs_, ys_, d_;  // d_ = node derivatives
};

/// Classic fixed-step RK4 for a scalar IVP y' = f(x, y), returning y at every
/// grid node.
std::vector<double> rk4(const std::function<double(double, double)>& f,
                        const std::vector<double>& xs, double y0);

}  // namespace ratingforge::num
