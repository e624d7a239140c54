#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ratingforge/common.hpp"
#include "ratingforge/distribution.hpp"

namespace ratingforge {

/// Investment cost c(q) of the multiplicative specification c(q, theta) = c(q)/theta.
/// Exposes c, c', c''.
class CostFn {
public:
    /// c(q) = q^p / p, p >= 2.
    static CostFn power(double p);
    /// c(q) = scale * q^p, p >= 1 (p < 2 is only accepted for signaling runs).
    static CostFn scaled_power(double scale, double p);
    /// Convex samples (q_k, c_k) interpolated by a monotone cubic.
    static CostFn tabulated(std::vector<double> qs, std::vector<double> cs);

    double c(double q) const;
    double cp(double q) const;   // c'
    double cpp(double q) const;  // c''

    /// True when c'(0) = 0 (required outside of ability-signaling runs).
    bool zero_marginal_at_origin() const;
    /// Proportionality coefficient when c(q) = coef * q^2, used to lower
    /// quadratic-loss objectives to linear delegation.
    std::optional<double> quadratic_coefficient() const;

    FamilyDescriptor describe() const;

    struct Impl;
    explicit CostFn(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

}  // namespace ratingforge
