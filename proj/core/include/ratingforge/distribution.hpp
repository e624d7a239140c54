#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ratingforge/common.hpp"

namespace ratingforge {

/// Type support [theta_lo, theta_hi], theta_lo >= 0.
struct Support {
    double theta_lo = 0.0;
    double theta_hi = 1.0;

    double length() const { return theta_hi - theta_lo; }
    bool contains(double t) const { return t >= theta_lo && t <= theta_hi; }
    void validate() const;
};

/// Serializable family descriptor (tag + scalar params + optional tables).
struct FamilyDescriptor {
    std::string family;
    std::map<std::string, double> params;
    std::vector<double> nodes;
    std::vector<double> values;
};

/// Type distribution on a bounded support with the extension convention
/// f = 0 off-support, F = 0 below and F = 1 above (exactly).
class Distribution {
public:
    static Distribution uniform(Support s);
    /// f proportional to exp(-rate * theta); rate < 0 gives an increasing density.
    static Distribution truncated_exponential(Support s, double rate);
    /// f proportional to (theta + shift)^-(alpha+1); shift = 0 is the classic
    /// Pareto tail (requires theta_lo > 0), shift > 0 admits theta_lo = 0.
    static Distribution truncated_pareto(Support s, double alpha, double shift = 0.0);
    /// Triangular bump peaking at `peak`, optionally on a constant pedestal.
    static Distribution triangular(Support s, double peak, double floor = 0.0);
    /// f proportional to floor + t^a (1-t)^b with t the position in the support;
    /// integer exponents keep the CDF polynomial.
    static Distribution beta_poly(Support s, int a, int b, double floor = 0.0);
    /// Density samples on strictly increasing nodes spanning the support; the
    /// CDF is a monotone cubic through the cumulative values and f is its
    /// derivative.
    static Distribution tabulated(std::vector<double> nodes, std::vector<double> density);

    const Support& support() const;
    double pdf(double theta) const;
    double cdf(double theta) const;
    /// f'(theta); analytic where the family provides one, centered difference
    /// (h = support/4000) for tabulated data.
    double pdf_deriv(double theta) const;

    double mean() const;
    /// Density argmax located by grid scan plus golden refinement.
    double mode() const;
    /// Interior points where f has kinks; always passed to integrators.
    std::vector<double> breakpoints() const;

    FamilyDescriptor describe() const;

    struct Impl;
    explicit Distribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

}  // namespace ratingforge
