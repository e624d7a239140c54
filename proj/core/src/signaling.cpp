#include "ratingforge/signaling.hpp"

#include <algorithm>
#include <cmath>

#include "ratingforge/menu.hpp"
#include "ratingforge/numeric.hpp"

namespace ratingforge {

double additive_separation_index(const CostFn& cost, const Distribution& dist,
                                 double theta) {
    auto [e_f, e_i] = additive_cost_constants(cost);
    (void)e_i;
    double cp = cost.cp(e_f);          // = 1 by the definition of e_f
    double ef_prime = 1.0 / cp - 1.0;  // the constant-effort ODE residual slope
    double f = dist.pdf(theta);
    double hz = f > 0.0 ? (1.0 - dist.cdf(theta)) / f : 0.0;
    return -1.0 / cp - hz * cost.cpp(e_f) / (cp * cp) * ef_prime;
}

double SeparationScheme::w_hat(double quality) const {
    // w(theta) = theta, so the wage of a quality is the type that produces it
    num::Pchip inv(q, theta);
    return inv(quality);
}

double SeparationScheme::q_at(double theta_value) const {
    num::Pchip fwd(theta, q);
    return fwd(theta_value);
}

SeparationScheme full_separation(const ProblemSpec& spec, std::size_t n) {
    const CostFn& cost = spec.cost();
    double lo = spec.theta_lo(), hi = spec.theta_hi();
    double start = lo;
    if (start < 1e-6) start = 1e-6;

    // IR pins c(q(theta_lo)) = theta_lo^2; integrating the ODE gives
    // c(q(theta)) = (theta^2 - theta_lo^2)/2 + theta_lo^2 exactly, which we use
    // only for the initial node
    double c0 = (start * start - lo * lo) / 2.0 + lo * lo;
    double q_hint = 1.0;
    for (int k = 0; k < 60 && cost.c(q_hint) < c0; ++k) q_hint *= 2.0;
    double q0 = c0 <= 0.0 ? 0.0
                          : num::find_crossing_increasing(
                                [&](double q) { return cost.c(q); }, 0.0, q_hint, c0,
                                1e-13);

    SeparationScheme out;
    out.theta = num::linspace(start, hi, n);
    out.q = num::rk4(
        [&](double t, double q) {
            double cp = cost.cp(q);
            if (cp <= 1e-12) cp = 1e-12;
            return t / cp;
        },
        out.theta, q0);
    return out;
}

namespace {

// g(theta) = psi_q(q_f(theta), theta) / c'(q_f(theta)), the integrand of J
double g_of(const ProblemSpec& spec, const SeparationScheme& scheme, double t) {
    double q = scheme.q_at(t);
    double cp = spec.cost().cp(q);
    if (cp <= 1e-12) cp = 1e-12;
    return spec.psi_q(q, t) / cp;
}

double J_eval(const ProblemSpec& spec, const SeparationScheme& scheme, double t,
              double tail_integral) {
    double f = spec.dist().pdf(t);
    double g = g_of(spec, scheme, t);
    if (f <= 1e-12) return g * t;  // tail/f -> 0 at a density zero of the top
    return g * t - tail_integral / f;
}

}  // namespace

double J_of(const ProblemSpec& spec, const SeparationScheme& scheme, double theta) {
    const auto& opt = spec.options();
    double tail = num::integrate(
        [&](double x) { return g_of(spec, scheme, x) * spec.dist().pdf(x); }, theta,
        spec.theta_hi(), spec.dist().breakpoints(), opt.quad_rel, opt.quad_abs);
    return J_eval(spec, scheme, theta, tail);
}

ConditionReport check_full_separation(const ProblemSpec& spec) {
    SeparationScheme scheme = full_separation(spec);
    const auto& opt = spec.options();
    const double lo = scheme.theta.front();

    // tail integrals on the scheme grid by one reverse sweep
    const auto& xs = scheme.theta;
    std::vector<double> gf(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        gf[i] = g_of(spec, scheme, xs[i]) * spec.dist().pdf(xs[i]);
    auto prefix = num::cumulative_parabolic(xs, gf);
    double total = prefix.back();

    ConditionReport rep;
    rep.id = "J-increasing";
    rep.cutoff = lo;
    double worst = std::numeric_limits<double>::infinity();
    double witness = lo;
    double prev = J_eval(spec, scheme, xs[0], total - prefix[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double cur = J_eval(spec, scheme, xs[i], total - prefix[i]);
        double inc = cur - prev;
        if (inc < worst) {
            worst = inc;
            witness = xs[i];
        }
        prev = cur;
    }
    rep.margin = worst;  // smallest increment; >= -tol means increasing
    rep.witness = witness;
    rep.holds = rep.margin >= -opt.tol_mono;
    return rep;
}

ConditionReport separation_at_top(const ProblemSpec& spec, double theta_L) {
    SeparationScheme scheme = full_separation(spec);
    ConditionReport rep;
    rep.id = "qf-convexity";
    rep.cutoff = theta_L;
    double worst = std::numeric_limits<double>::infinity();
    double witness = theta_L;
    const auto& xs = scheme.theta;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (xs[i] < theta_L) continue;
        double second = scheme.q[i + 1] - 2.0 * scheme.q[i] + scheme.q[i - 1];
        if (second < worst) {
            worst = second;
            witness = xs[i];
        }
    }
    rep.margin = worst;
    rep.witness = witness;
    rep.holds = rep.margin >= -spec.options().tol_mono;
    return rep;
}

FeeDesign fee_design(const ProblemSpec& spec, double rho, std::size_t n) {
    if (!(rho > 0.0 && rho <= 1.0)) throw spec_error("fee_design: rho must be in (0, 1]");
    const CostFn& cost = spec.cost();
    const Distribution& dist = spec.dist();
    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    const auto& opt = spec.options();

    FeeDesign out;
    out.rho = rho;
    out.theta = num::linspace(std::max(lo, 1e-9), hi, n);

    // pointwise FOC c_q = (1-rho)/rho + (1-F)/f c_qtheta; with c(q)/theta this
    // pins c'(q*) = ((1-rho)/rho) theta^2 f / (theta f + (1 - F)), corner at 0
    auto q_star = [&](double t) {
        double f = dist.pdf(t);
        if (f <= 0.0) return 0.0;
        double denom = t * f + (1.0 - dist.cdf(t));
        double target = (1.0 - rho) / rho * t * t * f / denom;
        if (target <= 0.0) return 0.0;
        return spec.q_full(target);
    };
    out.q.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.q[i] = q_star(out.theta[i]);

    // participation cutoff: sup of the strictly-negative set of the stated
    // bracket; empty set -> theta_lo (full participation)
    auto bracket = [&](double t) {
        double q = q_star(t);
        double f = dist.pdf(t);
        double c_over = cost.c(q) / t;
        double c_theta = -cost.c(q) / (t * t);
        double hz = f > 0.0 ? (1.0 - dist.cdf(t)) / f : 0.0;
        return (1.0 - rho) * q + (rho - 1.0) * t - rho * c_over + rho * hz * c_theta;
    };
    double cutoff = lo;
    {
        double last_neg = std::numeric_limits<double>::quiet_NaN();
        auto xs = num::linspace(std::max(lo, 1e-9), hi, 1001);
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (bracket(xs[i]) < -1e-12) last_neg = xs[i];
        if (!std::isnan(last_neg)) {
            // refine the upper edge of the negative set by bisection
            double a = last_neg, b = std::min(hi, last_neg + (hi - lo) / 1000.0);
            if (bracket(b) < -1e-12) {
                cutoff = b;
            } else {
                for (int it = 0; it < 80; ++it) {
                    double m = 0.5 * (a + b);
                    if (bracket(m) < -1e-12)
                        a = m;
                    else
                        b = m;
                }
                cutoff = 0.5 * (a + b);
            }
        }
    }
    out.cutoff = cutoff;

    // P* = E[theta] - E[ c(q*,theta) - (1-F)/f c_theta(q*,theta) | theta >= cutoff ]
    double mean_theta = dist.mean();
    double tail_mass = 1.0 - dist.cdf(cutoff);
    double cond = 0.0;
    if (tail_mass > 1e-12) {
        // theta = 0 is excluded by a hair so the c(q)/theta limits stay finite
        double a = std::max(cutoff, lo + 1e-9);
        double integral = num::integrate(
            [&](double t) {
                double q = q_star(t);
                double f = dist.pdf(t);
                double hz = f > 0.0 ? (1.0 - dist.cdf(t)) / f : 0.0;
                double c_theta = -cost.c(q) / (t * t);
                return (cost.c(q) / t - hz * c_theta) * f;
            },
            a, hi, dist.breakpoints(), opt.quad_rel, opt.quad_abs);
        cond = integral / tail_mass;
    } else {
        double t = hi;
        double q = q_star(t);
        cond = cost.c(q) / t;  // degenerate tail: hazard term vanishes
    }
    out.fee = mean_theta - cond;

    // outside wage E[theta | theta <= cutoff]
    double below_mass = dist.cdf(cutoff);
    if (below_mass > 1e-12) {
        double integral =
            num::integrate([&](double t) { return t * dist.pdf(t); }, lo, cutoff,
                           dist.breakpoints(), opt.quad_rel, opt.quad_abs);
        out.outside_wage = integral / below_mass;
    } else {
        out.outside_wage = lo;
    }

    // w*(theta) = int_cutoff^theta c_q(q*, t) q*'(t) dt + P* above the cutoff
    out.w.assign(n, out.outside_wage);
    std::vector<double> slope(n, 0.0);
    double h = (out.theta.back() - out.theta.front()) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double t = out.theta[i];
        double tl = std::max(out.theta.front(), t - h), tr = std::min(hi, t + h);
        double dq = (q_star(tr) - q_star(tl)) / (tr - tl);
        slope[i] = cost.cp(out.q[i]) / t * dq;  // c_q q*' = w*'
    }
    out.max_w_slope = *std::max_element(slope.begin(), slope.end());
    if (out.max_w_slope >= 1.0)
        throw solver_error(solver_errc::validity_violated,
                           "fee_design: w*' >= 1 somewhere; outside the proposition's "
                           "hypothesis (rho too small / cost not convex enough)");
    auto wage_integral = num::cumulative_parabolic(out.theta, slope);
    double at_cutoff = 0.0;
    {
        num::Pchip interp(out.theta, wage_integral);
        at_cutoff = interp(std::clamp(cutoff, out.theta.front(), out.theta.back()));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (out.theta[i] >= cutoff)
            out.w[i] = wage_integral[i] - at_cutoff + out.fee;
    return out;
}

}  // namespace ratingforge
