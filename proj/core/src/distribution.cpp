#include "ratingforge/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ratingforge/numeric.hpp"

namespace ratingforge {

void Support::validate() const {
    if (!(theta_lo >= 0.0)) throw spec_error("support: theta_lo must be >= 0");
    if (!(theta_hi > theta_lo)) throw spec_error("support: theta_hi must exceed theta_lo");
    if (!std::isfinite(theta_lo) || !std::isfinite(theta_hi))
        throw spec_error("support: bounds must be finite");
}

struct Distribution::Impl {
    Support sup;
    virtual ~Impl() = default;
    // raw density/CDF on the support; extension handled by the wrapper
    virtual double pdf_in(double t) const = 0;
    virtual double cdf_in(double t) const = 0;
    virtual double dpdf_in(double t) const = 0;
    virtual std::vector<double> kinks() const { return {}; }
    virtual FamilyDescriptor describe() const = 0;
};

namespace {

struct UniformImpl final : Distribution::Impl {
    double pdf_in(double) const override { return 1.0 / sup.length(); }
    double cdf_in(double t) const override { return (t - sup.theta_lo) / sup.length(); }
    double dpdf_in(double) const override { return 0.0; }
    FamilyDescriptor describe() const override { return {"uniform", {}, {}, {}}; }
};

struct ExpImpl final : Distribution::Impl {
    double rate = 1.0;
    double norm = 1.0;  // f = norm * exp(-rate t)
    double pdf_in(double t) const override { return norm * std::exp(-rate * t); }
    double cdf_in(double t) const override {
        return norm / rate * (std::exp(-rate * sup.theta_lo) - std::exp(-rate * t));
    }
    double dpdf_in(double t) const override { return -rate * pdf_in(t); }
    FamilyDescriptor describe() const override {
        return {"truncated-exponential", {{"rate", rate}}, {}, {}};
    }
};

struct ParetoImpl final : Distribution::Impl {
    double alpha = 2.0, shift = 0.0;
    double norm = 1.0;  // f = norm * (t + shift)^-(alpha+1)
    double pdf_in(double t) const override {
        return norm * std::pow(t + shift, -(alpha + 1.0));
    }
    double cdf_in(double t) const override {
        return norm / alpha *
               (std::pow(sup.theta_lo + shift, -alpha) - std::pow(t + shift, -alpha));
    }
    double dpdf_in(double t) const override {
        return -(alpha + 1.0) * norm * std::pow(t + shift, -(alpha + 2.0));
    }
    FamilyDescriptor describe() const override {
        return {"truncated-pareto", {{"alpha", alpha}, {"shift", shift}}, {}, {}};
    }
};

struct TriangularImpl final : Distribution::Impl {
    double peak = 0.5, floor = 0.0;
    double mass = 1.0;  // shape = floor + hat(t), f = shape / mass
    double hat(double t) const {
        if (t <= peak) {
            double w = peak - sup.theta_lo;
            return w > 0 ? (t - sup.theta_lo) / w : 1.0;
        }
        double w = sup.theta_hi - peak;
        return w > 0 ? (sup.theta_hi - t) / w : 1.0;
    }
    double pdf_in(double t) const override { return (floor + hat(t)) / mass; }
    double cdf_in(double t) const override {
        double base = floor * (t - sup.theta_lo);
        double wl = peak - sup.theta_lo;
        double tri;
        if (t <= peak) {
            tri = wl > 0 ? (t - sup.theta_lo) * (t - sup.theta_lo) / (2.0 * wl) : 0.0;
        } else {
            double wr = sup.theta_hi - peak;
            double right = wr > 0
                               ? wr / 2.0 - (sup.theta_hi - t) * (sup.theta_hi - t) / (2.0 * wr)
                               : 0.0;
            tri = wl / 2.0 + right;
        }
        return (base + tri) / mass;
    }
    double dpdf_in(double t) const override {
        if (t < peak) return 1.0 / ((peak - sup.theta_lo) * mass);
        if (t > peak) return -1.0 / ((sup.theta_hi - peak) * mass);
        return 0.0;
    }
    std::vector<double> kinks() const override { return {peak}; }
    FamilyDescriptor describe() const override {
        return {"triangular", {{"peak", peak}, {"floor", floor}}, {}, {}};
    }
};

struct BetaPolyImpl final : Distribution::Impl {
    int a = 1, b = 1;
    double floor = 0.0;
    double mass = 1.0;                 // in t-units, f = shape(t) / (mass * len)
    std::vector<double> anti_coeffs;   // antiderivative of t^a (1-t)^b

    double t_of(double theta) const { return (theta - sup.theta_lo) / sup.length(); }
    double shape(double t) const {
        return floor + std::pow(t, a) * std::pow(1.0 - t, b);
    }
    double shape_int(double t) const {
        // int_0^t u^a (1-u)^b du via the binomial expansion coefficients
        double acc = 0.0, p = std::pow(t, a + 1);
        for (std::size_t k = 0; k < anti_coeffs.size(); ++k) {
            acc += anti_coeffs[k] * p;
            p *= t;
        }
        return acc;
    }
    double shape_deriv(double t) const {
        double ta = std::pow(t, a), tb = std::pow(1.0 - t, b);
        double d = 0.0;
        if (a > 0) d += a * std::pow(t, a - 1) * tb;
        if (b > 0) d -= b * ta * std::pow(1.0 - t, b - 1);
        return d;
    }
    double pdf_in(double theta) const override {
        return shape(t_of(theta)) / (mass * sup.length());
    }
    double cdf_in(double theta) const override {
        double t = t_of(theta);
        return (floor * t + shape_int(t)) / mass;
    }
    double dpdf_in(double theta) const override {
        return shape_deriv(t_of(theta)) / (mass * sup.length() * sup.length());
    }
    FamilyDescriptor describe() const override {
        return {"beta-poly",
                {{"a", double(a)}, {"b", double(b)}, {"floor", floor}},
                {},
                {}};
    }
};

struct TabulatedImpl final : Distribution::Impl {
    num::Pchip F;
    std::vector<double> raw_nodes, raw_density;
    double fd_h = 1e-4;

    double pdf_in(double t) const override { return F.derivative(t); }
    double cdf_in(double t) const override { return F(t); }
    double dpdf_in(double t) const override {
        double lo = std::max(sup.theta_lo, t - fd_h);
        double hi = std::min(sup.theta_hi, t + fd_h);
        return (F.derivative(hi) - F.derivative(lo)) / (hi - lo);
    }
    std::vector<double> kinks() const override {
        std::vector<double> ks(raw_nodes.begin() + 1, raw_nodes.end() - 1);
        return ks;
    }
    FamilyDescriptor describe() const override {
        return {"tabulated", {}, raw_nodes, raw_density};
    }
};

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

Distribution Distribution::uniform(Support s) {
    s.validate();
    auto impl = std::make_shared<UniformImpl>();
    impl->sup = s;
    return Distribution(impl);
}

Distribution Distribution::truncated_exponential(Support s, double rate) {
    s.validate();
    if (std::abs(rate) < 1e-12)
        throw spec_error("truncated-exponential: rate too close to 0, use uniform");
    auto impl = std::make_shared<ExpImpl>();
    impl->sup = s;
    impl->rate = rate;
    double z = (std::exp(-rate * s.theta_lo) - std::exp(-rate * s.theta_hi)) / rate;
    impl->norm = 1.0 / z;
    return Distribution(impl);
}

Distribution Distribution::truncated_pareto(Support s, double alpha, double shift) {
    s.validate();
    if (!(alpha > 0)) throw spec_error("truncated-pareto: alpha must be > 0");
    if (!(s.theta_lo + shift > 0))
        throw spec_error("truncated-pareto: theta_lo + shift must be > 0");
    auto impl = std::make_shared<ParetoImpl>();
    impl->sup = s;
    impl->alpha = alpha;
    impl->shift = shift;
    double z = (std::pow(s.theta_lo + shift, -alpha) - std::pow(s.theta_hi + shift, -alpha)) /
               alpha;
    impl->norm = 1.0 / z;
    return Distribution(impl);
}

Distribution Distribution::triangular(Support s, double peak, double floor) {
    s.validate();
    if (!(peak > s.theta_lo && peak < s.theta_hi))
        throw spec_error("triangular: peak must be interior to the support");
    if (floor < 0) throw spec_error("triangular: floor must be >= 0");
    auto impl = std::make_shared<TriangularImpl>();
    impl->sup = s;
    impl->peak = peak;
    impl->floor = floor;
    impl->mass = floor * s.length() + 0.5 * s.length();
    return Distribution(impl);
}

Distribution Distribution::beta_poly(Support s, int a, int b, double floor) {
    s.validate();
    if (a < 0 || b < 0) throw spec_error("beta-poly: exponents must be >= 0");
    if (floor < 0) throw spec_error("beta-poly: floor must be >= 0");
    if (a == 0 && b == 0 && floor == 0.0)
        throw spec_error("beta-poly: degenerate flat shape, use uniform");
    auto impl = std::make_shared<BetaPolyImpl>();
    impl->sup = s;
    impl->a = a;
    impl->b = b;
    impl->floor = floor;
    for (int k = 0; k <= b; ++k)
        impl->anti_coeffs.push_back(binom(b, k) * ((k % 2) ? -1.0 : 1.0) /
                                    double(a + k + 1));
    impl->mass = floor + impl->shape_int(1.0);
    return Distribution(impl);
}

Distribution Distribution::tabulated(std::vector<double> nodes, std::vector<double> density) {
    if (nodes.size() < 4 || nodes.size() != density.size())
        throw spec_error("tabulated: need >= 4 aligned nodes");
    Support s{nodes.front(), nodes.back()};
    s.validate();
    for (double f : density)
        if (!(f >= 0.0) || !std::isfinite(f))
            throw spec_error("tabulated: density values must be finite and >= 0");
    double peak = *std::max_element(density.begin(), density.end());
    if (!(peak > 0)) throw spec_error("tabulated: density is identically zero");

    auto cum = num::cumulative_parabolic(nodes, density);
    double total = cum.back();
    if (!(total > 0)) throw spec_error("tabulated: zero total mass");
    for (double& c : cum) c /= total;
    // monotone repair of rounding noise before interpolation
    for (std::size_t i = 1; i < cum.size(); ++i) cum[i] = std::max(cum[i], cum[i - 1]);
    cum.back() = 1.0;

    auto impl = std::make_shared<TabulatedImpl>();
    impl->sup = s;
    impl->F = num::Pchip(nodes, cum);
    impl->raw_nodes = std::move(nodes);
    impl->raw_density = std::move(density);
    impl->fd_h = s.length() / 4000.0;
    return Distribution(impl);
}

const Support& Distribution::support() const { return impl_->sup; }

double Distribution::pdf(double theta) const {
    const Support& s = impl_->sup;
    if (theta < s.theta_lo || theta > s.theta_hi) return 0.0;
    return impl_->pdf_in(theta);
}

double Distribution::cdf(double theta) const {
    const Support& s = impl_->sup;
    if (theta < s.theta_lo) return 0.0;
    if (theta > s.theta_hi) return 1.0;
    return std::clamp(impl_->cdf_in(theta), 0.0, 1.0);
}

double Distribution::pdf_deriv(double theta) const {
    const Support& s = impl_->sup;
    if (theta < s.theta_lo || theta > s.theta_hi) return 0.0;
    return impl_->dpdf_in(theta);
}

double Distribution::mean() const {
    const Support& s = impl_->sup;
    return num::integrate([this](double t) { return t * impl_->pdf_in(t); }, s.theta_lo,
                          s.theta_hi, breakpoints());
}

double Distribution::mode() const {
    const Support& s = impl_->sup;
    auto neg = [this](double t) { return -impl_->pdf_in(t); };
    auto coarse = num::min_scan(neg, s.theta_lo, s.theta_hi, 4001, 10);
    double w = s.length() / 4000.0;
    double lo = std::max(s.theta_lo, coarse.x - w);
    double hi = std::min(s.theta_hi, coarse.x + w);
    return num::golden_minimize(neg, lo, hi, 1e-12);
}

std::vector<double> Distribution::breakpoints() const { return impl_->kinks(); }

FamilyDescriptor Distribution::describe() const { return impl_->describe(); }

}  // namespace ratingforge
