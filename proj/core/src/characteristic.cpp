#include "ratingforge/characteristic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "ratingforge/numeric.hpp"

namespace ratingforge {

CharacteristicCtx::CharacteristicCtx(ProblemSpec spec, double theta0)
    : spec_(std::move(spec)), theta0_(theta0) {
    if (!(theta0 >= 0.0) || !(theta0 <= spec_.theta_hi() + 1e-12))
        throw spec_error("characteristic: cutoff must lie in [0, theta_hi]");
    kappa_ = spec_.kappa();
    linear_ = spec_.linear_delegation_mode();
    q_std_ = spec_.q_indiff(theta0_);
    theta_c_ = spec_.cost().cp(q_std_);
    theta_L_ = std::max(std::min(theta_c_, spec_.theta_hi()), spec_.theta_lo());
    F0_ = spec_.dist().cdf(theta0_);

    const double lo = spec_.theta_lo(), hi = spec_.theta_hi();
    breaks_ = {lo, hi};
    auto push = [&](double x) {
        if (x > lo && x < hi) breaks_.push_back(x);
    };
    push(theta0_);
    push(theta_c_);
    for (double k : spec_.dist().breakpoints()) push(k);
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                  breaks_.end());

    prefix_.assign(breaks_.size(), 0.0);
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        prefix_[i] = prefix_[i - 1] + panel_integral(breaks_[i - 1], breaks_[i]);
    A_ = compute_A();
}

// Panel integral of r with endpoint samples taken from inside the panel, so
// Simpson never reads the wrong side of a jump.
double CharacteristicCtx::panel_integral(double a, double b) const {
    if (!(b > a)) return 0.0;
    const double mid = 0.5 * (a + b);
    const auto& opt = spec_.options();
    return num::integrate(
        [this, mid](double t) { return r_side(t, t <= mid ? +1 : -1); }, a, b, {},
        opt.quad_rel, opt.quad_abs);
}

double CharacteristicCtx::r_side(double theta, int side) const {
    // side: -1 left limit, +1 right limit, 0 the function value (right-
    // continuous at interior jumps, in-support at both endpoints)
    const Support& sup = spec_.support();
    if (theta < sup.theta_lo || (theta == sup.theta_lo && side < 0))
        return kappa_ * F0_;
    if (theta > sup.theta_hi || (theta == sup.theta_hi && side > 0))
        return -kappa_ * (1.0 - F0_);

    const double f = spec_.dist().pdf(theta);
    const double F = spec_.dist().cdf(theta);
    if (linear_) {
        const auto& ld = *spec_.ld();
        return (ld.beta(theta) - ld.alpha * theta) * f - ld.alpha * (F - F0_);
    }
    // general mode: r(theta | q(theta)) along the lower-censorship scheme
    bool excluded = theta < theta0_ || (theta == theta0_ && side < 0);
    if (excluded)
        return (spec_.psi_q(0.0, theta) - kappa_ * theta) * f - kappa_ * (F - F0_);
    bool bunched = theta < theta_c_ || (theta == theta_c_ && side < 0);
    if (bunched)
        return (spec_.psi_q(q_std_, theta) - kappa_ * (theta - theta_c_)) * f -
               kappa_ * (F - F0_);
    double psi_term = f > 0.0 ? spec_.psi_q(spec_.q_full(theta), theta) * f : 0.0;
    return psi_term - kappa_ * (F - F0_);
}

double CharacteristicCtx::R(double theta) const {
    const double lo = spec_.theta_lo(), hi = spec_.theta_hi();
    if (theta <= lo) return -kappa_ * F0_ * (lo - theta);
    if (theta >= hi) return prefix_.back() - kappa_ * (1.0 - F0_) * (theta - hi);
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), theta);
    std::size_t j = static_cast<std::size_t>(it - breaks_.begin());
    j = (j == 0) ? 0 : j - 1;
    return prefix_[j] + panel_integral(breaks_[j], theta);
}

std::vector<double> CharacteristicCtx::R_values(const std::vector<double>& thetas) const {
    std::vector<double> out(thetas.size());
    if (thetas.empty()) return out;
    const double lo = spec_.theta_lo(), hi = spec_.theta_hi();
    std::size_t bi = 0;
    double x_prev = thetas.front();
    double acc = R(x_prev);
    out[0] = acc;
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        double x = thetas[i];
        assert(x >= x_prev && "R_values requires a sorted grid");
        if (x <= lo || x_prev >= hi) {
            out[i] = R(x);  // constant-extension tails are closed-form
            acc = out[i];
            x_prev = x;
            continue;
        }
        if (x_prev < lo) {  // cross into the support once, then sweep
            acc = R(lo);
            x_prev = lo;
            bi = 0;
        }
        double stop = std::min(x, hi);
        while (bi < breaks_.size() && breaks_[bi] <= x_prev) ++bi;
        double from = x_prev;
        while (bi < breaks_.size() && breaks_[bi] < stop) {
            acc += panel_integral(from, breaks_[bi]);
            from = breaks_[bi];
            ++bi;
        }
        acc += panel_integral(from, stop);
        if (x > hi) {
            out[i] = acc - kappa_ * (1.0 - F0_) * (x - hi);
            x_prev = hi;
        } else {
            out[i] = acc;
            x_prev = x;
        }
    }
    return out;
}

double CharacteristicCtx::L_slope(double theta) const {
    if (std::abs(theta - theta0_) < 1e-12)
        return theta >= theta0_ ? r_right(theta0_) : r_left(theta0_);
    return (R(theta) - R(theta0_)) / (theta - theta0_);
}

double CharacteristicCtx::compute_A() const {
    if (theta_c_ - theta0_ < 1e-12) return r_right(theta0_);
    return (R(theta_c_) - R(theta0_)) / (theta_c_ - theta0_);
}

double CharacteristicCtx::A_psi_form() const {
    if (theta_c_ - theta0_ < 1e-12) return r_right(theta0_);
    const auto& opt = spec_.options();
    double upper = std::max(theta_L_, theta0_);
    double integral = num::integrate(
        [this](double t) { return spec_.psi_q(q_std_, t) * spec_.dist().pdf(t); }, theta0_,
        upper, breakpoints(), opt.quad_rel, opt.quad_abs);
    return integral / (theta_c_ - theta0_);
}

}  // namespace ratingforge
