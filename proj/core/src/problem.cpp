#include "ratingforge/problem.hpp"

#include <cmath>
#include <sstream>

#include "ratingforge/numeric.hpp"

namespace ratingforge {

namespace {

double solve_q_full(const CostFn& cost, double theta, double hint_hi, double tol) {
    if (theta <= 0.0) return 0.0;
    double hi = std::max(hint_hi, 1e-6);
    for (int k = 0; k < 7; ++k) {
        if (cost.cp(hi) >= theta)
            return num::find_crossing_increasing([&](double q) { return cost.cp(q); }, 0.0,
                                                 hi, theta, tol);
        hi *= 2.0;
    }
    throw solver_error(solver_errc::bracket_failure,
                       "q_full: marginal cost never reaches theta (malformed cost)");
}

double solve_q_indiff(const CostFn& cost, double theta, double q_f, double hint_hi,
                      double tol) {
    if (theta <= 0.0) return 0.0;
    auto ac = [&](double q) { return q > 0 ? cost.c(q) / q : cost.cp(0.0); };
    double hi = std::max({hint_hi, 2.0 * q_f, 1e-6});
    for (int k = 0; k < 7; ++k) {
        if (ac(hi) >= theta) {
            double lo = std::max(q_f, 0.0);
            return num::find_crossing_increasing(ac, lo, hi, theta, tol);
        }
        hi *= 2.0;
    }
    throw solver_error(solver_errc::bracket_failure,
                       "q_indiff: average cost never reaches theta (malformed cost)");
}

double compute_kappa(const ProblemSpec& spec) {
    if (auto ld = spec.ld()) return ld->alpha;
    const double q_max = spec.q_max();
    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    const double eps = 1e-12;
    double best = std::numeric_limits<double>::infinity();
    double best_q = q_max, best_t = lo;
    auto ratio = [&](double q, double t) -> std::optional<double> {
        double cpp = spec.cost().cpp(q);
        double pqq = spec.psi_qq(q, t);
        if (cpp <= eps) {
            if (pqq < -eps)
                throw solver_error(solver_errc::degenerate_cost,
                                   "kappa: c'' = 0 where psi_qq < 0 (kappa unbounded)");
            return std::nullopt;
        }
        return -pqq / cpp;
    };
    const std::size_t n = 101;
    for (std::size_t i = 1; i <= n; ++i) {
        double q = q_max * double(i) / double(n);
        for (std::size_t j = 0; j < n; ++j) {
            double t = lo + (hi - lo) * double(j) / double(n - 1);
            if (auto r = ratio(q, t); r && *r < best) {
                best = *r;
                best_q = q;
                best_t = t;
            }
        }
    }
    if (!std::isfinite(best)) return 0.0;
    // local refinement around the grid argmin, one golden pass per coordinate
    auto in_q = [&](double q) {
        auto r = ratio(q, best_t);
        return r ? *r : std::numeric_limits<double>::infinity();
    };
    double wq = q_max / double(n);
    best_q = num::golden_minimize(in_q, std::max(1e-9 * q_max, best_q - wq),
                                  std::min(q_max, best_q + wq), 1e-10);
    auto in_t = [&](double t) {
        auto r = ratio(best_q, t);
        return r ? *r : std::numeric_limits<double>::infinity();
    };
    double wt = (hi - lo) / double(n);
    best_t = num::golden_minimize(in_t, std::max(lo, best_t - wt),
                                  std::min(hi, best_t + wt), 1e-10);
    if (auto r = ratio(best_q, best_t)) best = std::min(best, *r);
    return best;
}

}  // namespace

ProblemSpec ProblemSpec::make(Support support, Distribution dist, CostFn cost,
                              Objective objective, NumericOptions opts) {
    support.validate();
    const Support& ds = dist.support();
    if (std::abs(ds.theta_lo - support.theta_lo) > 1e-12 ||
        std::abs(ds.theta_hi - support.theta_hi) > 1e-12)
        throw spec_error("problem: distribution support does not match the stated support");
    if (std::abs(dist.cdf(support.theta_lo)) > 1e-9 ||
        std::abs(dist.cdf(support.theta_hi) - 1.0) > 1e-9)
        throw spec_error("problem: CDF endpoints are not 0/1 within tolerance");

    // density positive on the interior (endpoint zeros are tolerated)
    for (double t : num::linspace(support.theta_lo, support.theta_hi, 257)) {
        bool endpoint = (t == support.theta_lo || t == support.theta_hi);
        double f = dist.pdf(t);
        if (!std::isfinite(f) || f < 0.0 || (!endpoint && f <= 0.0)) {
            std::ostringstream os;
            os << "problem: density must be positive on the support interior, f(" << t
               << ") = " << f;
            throw spec_error(os.str());
        }
    }

    if (!cost.zero_marginal_at_origin() && !opts.allow_linear_cost)
        throw spec_error(
            "problem: cost has c'(0) > 0; only ability-signaling runs accept this "
            "(set allow_linear_cost)");

    auto state = std::make_shared<State>(support, std::move(dist), std::move(cost),
                                         std::move(objective), opts);
    state->ld = state->objective.linear_delegation_view(state->cost);
    if (state->ld && !(state->ld->alpha >= 0))
        throw spec_error("problem: linear-delegation alpha must be >= 0");

    ProblemSpec spec{std::shared_ptr<const State>(state)};

    if (state->cost.zero_marginal_at_origin()) {
        state->q_max = solve_q_indiff(state->cost, support.theta_hi,
                                      solve_q_full(state->cost, support.theta_hi, 1.0,
                                                   opts.tol_root),
                                      1.0, opts.tol_root);
        state->q_max_valid = true;
    }

    // objective sanity on a grid: psi(0,.) = 0, psi_q(0,.) > 0, psi_qq <= 0
    for (double t : num::linspace(support.theta_lo, support.theta_hi, 101)) {
        if (std::abs(spec.psi(0.0, t)) > 1e-9)
            throw spec_error("problem: objective must satisfy psi(0, theta) = 0");
        if (!(spec.psi_q(0.0, t) > 0.0))
            throw spec_error("problem: objective must satisfy psi_q(0, theta) > 0");
    }
    if (state->q_max_valid) {
        for (double t : num::linspace(support.theta_lo, support.theta_hi, 51))
            for (double q : num::linspace(state->q_max / 50.0, state->q_max, 50))
                if (spec.psi_qq(q, t) > 1e-9)
                    throw spec_error("problem: objective must be concave in q");

        // downward-bias audit (Assumption on psi_q at the full-revelation quality)
        for (double t : num::linspace(support.theta_lo, support.theta_hi, 1001)) {
            double qf = spec.q_full(t);
            double g = spec.psi_q(qf, t);
            if (g < -1e-9) {
                std::ostringstream os;
                os << "problem: downward-bias audit failed, psi_q(q_f(theta), theta) = "
                   << g << " at theta = " << t;
                throw spec_error(os.str());
            }
        }
        state->kappa = compute_kappa(spec);
    } else if (state->ld) {
        state->kappa = state->ld->alpha;
    }
    return spec;
}

double ProblemSpec::q_max() const {
    if (!state_->q_max_valid)
        throw solver_error(solver_errc::precondition_violated,
                           "q_max is undefined for linear-cost (signaling) instances");
    return state_->q_max;
}

double ProblemSpec::q_full(double theta) const {
    double hint = state_->q_max_valid ? 2.0 * state_->q_max : 1.0;
    return solve_q_full(state_->cost, theta, hint, state_->opts.tol_root);
}

double ProblemSpec::q_indiff(double theta) const {
    if (theta <= 0.0) return 0.0;
    double qf = q_full(theta);
    double hint = state_->q_max_valid ? 2.0 * state_->q_max : 2.0 * qf;
    return solve_q_indiff(state_->cost, theta, qf, hint, state_->opts.tol_root);
}

double ProblemSpec::theta_c(double theta0) const { return state_->cost.cp(q_indiff(theta0)); }

double ProblemSpec::theta_L(double theta0) const {
    double tc = theta_c(theta0);
    return std::max(std::min(tc, theta_hi()), theta_lo());
}

double ProblemSpec::kappa() const { return state_->kappa; }

double ProblemSpec::psi(double q, double theta) const {
    return state_->objective.psi(q, theta, state_->cost);
}
double ProblemSpec::psi_q(double q, double theta) const {
    return state_->objective.psi_q(q, theta, state_->cost);
}
double ProblemSpec::psi_qq(double q, double theta) const {
    return state_->objective.psi_qq(q, theta, state_->cost);
}
double ProblemSpec::psi_qtheta(double q, double theta) const {
    return state_->objective.psi_qtheta(q, theta, state_->cost);
}

}  // namespace ratingforge
