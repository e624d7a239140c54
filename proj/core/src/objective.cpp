#include "ratingforge/objective.hpp"

#include <algorithm>
#include <cmath>

#include "ratingforge/numeric.hpp"

namespace ratingforge {

BetaSpec BetaSpec::affine(double b0, double b1) {
    BetaSpec b;
    b.b0 = b0;
    b.b1 = b1;
    return b;
}

BetaSpec BetaSpec::tabulated(std::vector<double> thetas, std::vector<double> values) {
    if (thetas.size() < 2 || thetas.size() != values.size())
        throw spec_error("beta: need >= 2 aligned samples");
    BetaSpec b;
    b.tab_ = std::make_shared<num::Pchip>(std::move(thetas), std::move(values));
    return b;
}

double BetaSpec::operator()(double theta) const {
    if (tab_) return (*static_cast<const num::Pchip*>(tab_.get()))(theta);
    return b0 + b1 * theta;
}

double BetaSpec::deriv(double theta) const {
    if (tab_) return static_cast<const num::Pchip*>(tab_.get())->derivative(theta);
    return b1;
}

struct Objective::Impl {
    virtual ~Impl() = default;
    virtual double psi(double q, double t, const CostFn& c) const = 0;
    virtual double psi_q(double q, double t, const CostFn& c) const = 0;
    virtual double psi_qq(double q, double t, const CostFn& c) const = 0;
    virtual double psi_qt(double q, double t, const CostFn& c) const = 0;
    virtual std::optional<LDView> ld(const CostFn& c) const = 0;
    virtual FamilyDescriptor describe() const = 0;
};

namespace {

struct QualityMaxImpl final : Objective::Impl {
    double psi(double q, double, const CostFn&) const override { return q; }
    double psi_q(double, double, const CostFn&) const override { return 1.0; }
    double psi_qq(double, double, const CostFn&) const override { return 0.0; }
    double psi_qt(double, double, const CostFn&) const override { return 0.0; }
    std::optional<LDView> ld(const CostFn&) const override {
        return LDView{BetaSpec::affine(1.0), 0.0};
    }
    FamilyDescriptor describe() const override { return {"quality-max", {}, {}, {}}; }
};

struct LinDelImpl final : Objective::Impl {
    BetaSpec beta;
    double alpha = 0.0;
    double psi(double q, double t, const CostFn& c) const override {
        return beta(t) * q - alpha * c.c(q);
    }
    double psi_q(double q, double t, const CostFn& c) const override {
        return beta(t) - alpha * c.cp(q);
    }
    double psi_qq(double q, double, const CostFn& c) const override {
        return -alpha * c.cpp(q);
    }
    double psi_qt(double, double t, const CostFn&) const override { return beta.deriv(t); }
    std::optional<LDView> ld(const CostFn&) const override { return LDView{beta, alpha}; }
    FamilyDescriptor describe() const override {
        FamilyDescriptor d{"linear-delegation", {{"alpha", alpha}}, {}, {}};
        if (beta.is_affine()) {
            d.params["beta0"] = beta.b0;
            d.params["beta1"] = beta.b1;
        } else {
            const auto* p = static_cast<const num::Pchip*>(beta.tab_.get());
            d.nodes = p->xs();
            d.values = p->ys();
        }
        return d;
    }
};

struct QuadLossImpl final : Objective::Impl {
    BetaSpec beta;
    double psi(double q, double t, const CostFn&) const override {
        return beta(t) * q - 0.5 * q * q;
    }
    double psi_q(double q, double t, const CostFn&) const override { return beta(t) - q; }
    double psi_qq(double, double, const CostFn&) const override { return -1.0; }
    double psi_qt(double, double t, const CostFn&) const override { return beta.deriv(t); }
    std::optional<LDView> ld(const CostFn& c) const override {
        // beta q - q^2/2 is linear delegation only against a quadratic cost
        if (auto coef = c.quadratic_coefficient())
            return LDView{beta, 1.0 / (2.0 * *coef)};
        return std::nullopt;
    }
    FamilyDescriptor describe() const override {
        FamilyDescriptor d{"quadratic-loss", {}, {}, {}};
        if (beta.is_affine()) {
            d.params["beta0"] = beta.b0;
            d.params["beta1"] = beta.b1;
        }
        return d;
    }
};

struct CustomImpl final : Objective::Impl {
    std::vector<double> qs, ts;
    std::vector<std::vector<double>> g;  // psi_q samples, g[i][j] at (qs[i], ts[j])

    std::size_t cell(const std::vector<double>& xs, double x) const {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin());
        if (i == 0) return 0;
        if (i >= xs.size()) return xs.size() - 2;
        return i - 1;
    }
    double bilinear(double q, double t) const {
        q = std::clamp(q, qs.front(), qs.back());
        t = std::clamp(t, ts.front(), ts.back());
        std::size_t i = cell(qs, q), j = cell(ts, t);
        double u = (q - qs[i]) / (qs[i + 1] - qs[i]);
        double v = (t - ts[j]) / (ts[j + 1] - ts[j]);
        return (1 - u) * (1 - v) * g[i][j] + u * (1 - v) * g[i + 1][j] +
               (1 - u) * v * g[i][j + 1] + u * v * g[i + 1][j + 1];
    }
    double psi(double q, double t, const CostFn&) const override {
        // integrate the bilinear psi_q in q; exact per cell (trapezoid of a
        // linear-in-q function)
        q = std::clamp(q, qs.front(), qs.back());
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < qs.size() && qs[i] < q; ++i) {
            double hi = std::min(q, qs[i + 1]);
            acc += 0.5 * (hi - qs[i]) * (bilinear(qs[i], t) + bilinear(hi, t));
        }
        return acc;
    }
    double psi_q(double q, double t, const CostFn&) const override {
        return bilinear(q, t);
    }
    double psi_qq(double q, double t, const CostFn&) const override {
        std::size_t i = cell(qs, std::clamp(q, qs.front(), qs.back()));
        double h = qs[i + 1] - qs[i];
        return (bilinear(qs[i + 1], t) - bilinear(qs[i], t)) / h;
    }
    double psi_qt(double q, double t, const CostFn&) const override {
        std::size_t j = cell(ts, std::clamp(t, ts.front(), ts.back()));
        double h = ts[j + 1] - ts[j];
        return (bilinear(q, ts[j + 1]) - bilinear(q, ts[j])) / h;
    }
    std::optional<LDView> ld(const CostFn&) const override { return std::nullopt; }
    FamilyDescriptor describe() const override {
        FamilyDescriptor d{"custom-tabulated", {}, qs, {}};
        d.values = ts;
        return d;
    }
};

}  // namespace

Objective Objective::quality_max() {
    return Objective(std::make_shared<QualityMaxImpl>());
}

Objective Objective::linear_delegation(BetaSpec beta, double alpha) {
    if (alpha < 0) throw spec_error("linear-delegation: alpha must be >= 0");
    auto impl = std::make_shared<LinDelImpl>();
    impl->beta = std::move(beta);
    impl->alpha = alpha;
    return Objective(impl);
}

Objective Objective::quadratic_loss(BetaSpec beta) {
    auto impl = std::make_shared<QuadLossImpl>();
    impl->beta = std::move(beta);
    return Objective(impl);
}

Objective Objective::custom(std::vector<double> q_nodes, std::vector<double> theta_nodes,
                            std::vector<std::vector<double>> psi_q_values) {
    if (q_nodes.size() < 2 || theta_nodes.size() < 2)
        throw spec_error("custom objective: need >= 2 nodes per axis");
    if (psi_q_values.size() != q_nodes.size())
        throw spec_error("custom objective: psi_q rows must match q nodes");
    for (const auto& row : psi_q_values)
        if (row.size() != theta_nodes.size())
            throw spec_error("custom objective: psi_q columns must match theta nodes");
    auto impl = std::make_shared<CustomImpl>();
    impl->qs = std::move(q_nodes);
    impl->ts = std::move(theta_nodes);
    impl->g = std::move(psi_q_values);
    return Objective(impl);
}

double Objective::psi(double q, double theta, const CostFn& cost) const {
    return impl_->psi(q, theta, cost);
}
double Objective::psi_q(double q, double theta, const CostFn& cost) const {
    return impl_->psi_q(q, theta, cost);
}
double Objective::psi_qq(double q, double theta, const CostFn& cost) const {
    return impl_->psi_qq(q, theta, cost);
}
double Objective::psi_qtheta(double q, double theta, const CostFn& cost) const {
    return impl_->psi_qt(q, theta, cost);
}
std::optional<LDView> Objective::linear_delegation_view(const CostFn& cost) const {
    return impl_->ld(cost);
}
FamilyDescriptor Objective::describe() const { return impl_->describe(); }

}  // namespace ratingforge
