#include "ratingforge/cost.hpp"

#include <cmath>

#include "ratingforge/numeric.hpp"

namespace ratingforge {

struct CostFn::Impl {
    virtual ~Impl() = default;
    virtual double c(double q) const = 0;
    virtual double cp(double q) const = 0;
    virtual double cpp(double q) const = 0;
    virtual bool zero_marginal() const = 0;
    virtual std::optional<double> quad_coef() const { return std::nullopt; }
    virtual FamilyDescriptor describe() const = 0;
};

namespace {

struct PowerImpl final : CostFn::Impl {
    double p = 2.0;
    double c(double q) const override { return std::pow(q, p) / p; }
    double cp(double q) const override { return std::pow(q, p - 1.0); }
    double cpp(double q) const override {
        return q > 0 ? (p - 1.0) * std::pow(q, p - 2.0) : (p == 2.0 ? 1.0 : 0.0);
    }
    bool zero_marginal() const override { return true; }
    std::optional<double> quad_coef() const override {
        if (p == 2.0) return 0.5;
        return std::nullopt;
    }
    FamilyDescriptor describe() const override { return {"power", {{"p", p}}, {}, {}}; }
};

struct ScaledPowerImpl final : CostFn::Impl {
    double scale = 1.0, p = 2.0;
    double c(double q) const override { return scale * std::pow(q, p); }
    double cp(double q) const override {
        if (p == 1.0) return scale;
        return scale * p * std::pow(q, p - 1.0);
    }
    double cpp(double q) const override {
        if (p <= 1.0) return 0.0;
        if (p == 2.0) return 2.0 * scale;
        return q > 0 ? scale * p * (p - 1.0) * std::pow(q, p - 2.0) : 0.0;
    }
    bool zero_marginal() const override { return p > 1.0; }
    std::optional<double> quad_coef() const override {
        if (p == 2.0) return scale;
        return std::nullopt;
    }
    FamilyDescriptor describe() const override {
        return {"scaled-power", {{"scale", scale}, {"p", p}}, {}, {}};
    }
};

struct TabulatedCostImpl final : CostFn::Impl {
    num::Pchip interp;
    std::vector<double> raw_q, raw_c;
    double fd_h = 1e-6;
    double c(double q) const override {
        if (q >= interp.x_back())  // linear continuation at the top slope
            return interp(interp.x_back()) +
                   interp.derivative(interp.x_back()) * (q - interp.x_back());
        return interp(q);
    }
    double cp(double q) const override {
        if (q >= interp.x_back()) return interp.derivative(interp.x_back());
        return interp.derivative(q);
    }
    double cpp(double q) const override {
        double lo = std::max(0.0, q - fd_h), hi = q + fd_h;
        return (cp(hi) - cp(lo)) / (hi - lo);
    }
    bool zero_marginal() const override { return interp.derivative(0.0) <= 1e-9; }
    FamilyDescriptor describe() const override {
        return {"tabulated", {}, raw_q, raw_c};
    }
};

}  // namespace

CostFn CostFn::power(double p) {
    if (!(p >= 2.0)) throw spec_error("power cost: p must be >= 2");
    auto impl = std::make_shared<PowerImpl>();
    impl->p = p;
    return CostFn(impl);
}

CostFn CostFn::scaled_power(double scale, double p) {
    if (!(scale > 0)) throw spec_error("scaled-power cost: scale must be > 0");
    if (!(p >= 1.0)) throw spec_error("scaled-power cost: p must be >= 1");
    auto impl = std::make_shared<ScaledPowerImpl>();
    impl->scale = scale;
    impl->p = p;
    return CostFn(impl);
}

CostFn CostFn::tabulated(std::vector<double> qs, std::vector<double> cs) {
    if (qs.size() < 3 || qs.size() != cs.size())
        throw spec_error("tabulated cost: need >= 3 aligned samples");
    if (qs.front() != 0.0 || cs.front() != 0.0)
        throw spec_error("tabulated cost: first sample must be (0, 0)");
    for (std::size_t i = 1; i < qs.size(); ++i)
        if (!(cs[i] > cs[i - 1])) throw spec_error("tabulated cost: c must be increasing");
    // convexity of the data: secant slopes increasing
    double prev = (cs[1] - cs[0]) / (qs[1] - qs[0]);
    for (std::size_t i = 2; i < qs.size(); ++i) {
        double s = (cs[i] - cs[i - 1]) / (qs[i] - qs[i - 1]);
        if (s < prev - 1e-12) throw spec_error("tabulated cost: samples are not convex");
        prev = s;
    }
    auto impl = std::make_shared<TabulatedCostImpl>();
    impl->interp = num::Pchip(qs, cs);
    impl->fd_h = qs.back() / 4000.0;
    impl->raw_q = std::move(qs);
    impl->raw_c = std::move(cs);
    return CostFn(impl);
}

double CostFn::c(double q) const { return impl_->c(q); }
double CostFn::cp(double q) const { return impl_->cp(q); }
double CostFn::cpp(double q) const { return impl_->cpp(q); }
bool CostFn::zero_marginal_at_origin() const { return impl_->zero_marginal(); }
std::optional<double> CostFn::quadratic_coefficient() const { return impl_->quad_coef(); }
FamilyDescriptor CostFn::describe() const { return impl_->describe(); }

}  // namespace ratingforge
