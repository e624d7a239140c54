#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ratingforge/cost.hpp"

namespace ratingforge {

/// beta(theta) weight used by the linear-delegation and quadratic-loss
/// families: affine b0 + b1*theta, or monotone-cubic tabulated samples.
struct BetaSpec {
    static BetaSpec affine(double b0, double b1 = 0.0);
    static BetaSpec tabulated(std::vector<double> thetas, std::vector<double> values);

    double operator()(double theta) const;
    double deriv(double theta) const;
    bool is_affine() const { return tab_ == nullptr; }

    double b0 = 1.0, b1 = 0.0;
    std::shared_ptr<const void> tab_;  // Pchip, type-erased
};

/// Linear-delegation reduction: psi(q,theta) = beta(theta) q - alpha c(q).
struct LDView {
    BetaSpec beta;
    double alpha = 0.0;
};

/// Principal objective psi(q, theta) with first and second partials.
class Objective {
public:
    static Objective quality_max();
    static Objective linear_delegation(BetaSpec beta, double alpha);
    /// psi = beta(theta) q - q^2/2 (the normalized quadratic-loss form).
    static Objective quadratic_loss(BetaSpec beta = BetaSpec::affine(1.0));
    /// psi_q samples on a (q, theta) grid, bilinear; psi recovered by
    /// integrating over q so psi(0, theta) = 0 holds by construction.
    static Objective custom(std::vector<double> q_nodes, std::vector<double> theta_nodes,
                            std::vector<std::vector<double>> psi_q_values);

    double psi(double q, double theta, const CostFn& cost) const;
    double psi_q(double q, double theta, const CostFn& cost) const;
    double psi_qq(double q, double theta, const CostFn& cost) const;
    double psi_qtheta(double q, double theta, const CostFn& cost) const;

    /// Present when the family reduces to linear delegation against this cost.
    std::optional<LDView> linear_delegation_view(const CostFn& cost) const;

    FamilyDescriptor describe() const;

    struct Impl;
    explicit Objective(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

}  // namespace ratingforge
