#pragma once

#include <memory>
#include <optional>

#include "ratingforge/common.hpp"
#include "ratingforge/cost.hpp"
#include "ratingforge/distribution.hpp"
#include "ratingforge/objective.hpp"

namespace ratingforge {

/// Immutable problem instance: support, type distribution, cost, objective,
/// numeric options. Construction validates every family invariant including
/// the downward-bias audit; instances that fail do not reach the solvers.
class ProblemSpec {
public:
    static ProblemSpec make(Support support, Distribution dist, CostFn cost,
                            Objective objective, NumericOptions opts = {});

    const Support& support() const { return state_->support; }
    const Distribution& dist() const { return state_->dist; }
    const CostFn& cost() const { return state_->cost; }
    const Objective& objective() const { return state_->objective; }
    const NumericOptions& options() const { return state_->opts; }

    double theta_lo() const { return state_->support.theta_lo; }
    double theta_hi() const { return state_->support.theta_hi; }

    /// Upper end of the quality domain, q_max = q_indiff(theta_hi).
    double q_max() const;

    /// Full-revelation quality: the infimum solution of c'(q) = theta.
    double q_full(double theta) const;
    /// Indifference quality: c(q)/q = theta with q_indiff >= q_full; 0 at theta = 0.
    double q_indiff(double theta) const;
    /// theta_c(theta0) = c'(q_indiff(theta0)); may exceed theta_hi.
    double theta_c(double theta0) const;
    /// med{theta_c(theta0), theta_lo, theta_hi}: start of the revealing region.
    double theta_L(double theta0) const;
    /// Relative concavity inf -psi_qq / c''; exact alpha under linear delegation.
    double kappa() const;

    double psi(double q, double theta) const;
    double psi_q(double q, double theta) const;
    double psi_qq(double q, double theta) const;
    double psi_qtheta(double q, double theta) const;

    const std::optional<LDView>& ld() const { return state_->ld; }
    bool linear_delegation_mode() const { return state_->ld.has_value(); }

private:
    struct State {
        Support support;
        Distribution dist;
        CostFn cost;
        Objective objective;
        NumericOptions opts;
        std::optional<LDView> ld;
        double q_max = 0.0;
        double kappa = 0.0;
        bool q_max_valid = false;
        State(Support s, Distribution d, CostFn c, Objective o, NumericOptions n)
            : support(s), dist(std::move(d)), cost(std::move(c)), objective(std::move(o)),
              opts(n) {}
    };
    explicit ProblemSpec(std::shared_ptr<const State> st) : state_(std::move(st)) {}

    std::shared_ptr<const State> state_;
};

}  // namespace ratingforge
