#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ratingforge/problem.hpp"
#include "ratingforge/scheme.hpp"

namespace fixtures {

using namespace ratingforge;

inline ProblemSpec u01_qmax() {
    Support s{0.0, 1.0};
    return ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(2.0),
                             Objective::quality_max());
}

// f = 2 theta on [0,1]
inline ProblemSpec increasing_qmax() {
    Support s{0.0, 1.0};
    return ProblemSpec::make(s, Distribution::beta_poly(s, 1, 0), CostFn::power(2.0),
                             Objective::quality_max());
}

// f = 2 - 2 theta on [0,1]
inline ProblemSpec decreasing_qmax() {
    Support s{0.0, 1.0};
    return ProblemSpec::make(s, Distribution::beta_poly(s, 0, 1), CostFn::power(2.0),
                             Objective::quality_max());
}

inline ProblemSpec triangular_qmax(double peak = 0.5) {
    Support s{0.0, 1.0};
    return ProblemSpec::make(s, Distribution::triangular(s, peak), CostFn::power(2.0),
                             Objective::quality_max());
}

// left-skewed unimodal on [1,2]: theta_c(theta_lo) = 2 >= theta_hi
inline ProblemSpec leftskew_12() {
    Support s{1.0, 2.0};
    return ProblemSpec::make(s, Distribution::beta_poly(s, 3, 1, 0.05), CostFn::power(2.0),
                             Objective::quality_max());
}

inline ProblemSpec pareto_13(double alpha = 2.0) {
    Support s{1.0, 3.0};
    return ProblemSpec::make(s, Distribution::truncated_pareto(s, alpha),
                             CostFn::power(2.0), Objective::quality_max());
}

// Pareto-shaped tail admitting theta_lo = 0 (shifted power density)
inline ProblemSpec lomax_01(double alpha = 2.0) {
    Support s{0.0, 1.0};
    return ProblemSpec::make(s, Distribution::truncated_pareto(s, alpha, 1.0),
                             CostFn::power(2.0), Objective::quality_max());
}

// state-independent quadratic loss: psi = q - q^2/2 against c = q^2/2 (LD, alpha = 1)
inline ProblemSpec quadloss_u01() {
    Support s{0.0, 1.0};
    return ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(2.0),
                             Objective::quadratic_loss());
}

// running example of the stochastic sections: U[1,5], c = q^2/2, psi = q
inline ProblemSpec running_u15() {
    Support s{1.0, 5.0};
    return ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(2.0),
                             Objective::quality_max());
}

inline ProblemSpec uniform_05() {
    Support s{0.0, 5.0};
    return ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(2.0),
                             Objective::quality_max());
}

// decreasing density on [1,3] whose elasticity rises (heavier tail than any
// single power law): f proportional to theta^-2 + 10 theta^-6
inline ProblemSpec heavytail_13() {
    Support s{1.0, 3.0};
    std::vector<double> nodes, dens;
    const std::size_t n = 401;
    for (std::size_t i = 0; i < n; ++i) {
        double t = 1.0 + 2.0 * double(i) / double(n - 1);
        nodes.push_back(t);
        dens.push_back(std::pow(t, -2.0) + 10.0 * std::pow(t, -6.0));
    }
    return ProblemSpec::make(s, Distribution::tabulated(nodes, dens), CostFn::power(2.0),
                             Objective::quality_max());
}

// Bimodal density on [0, 5] built so the two-standard scheme 0|2|4|q_f is
// exactly optimal: piecewise-linear shape through the knots below with the
// corners blended by quadratics (half-width 0.12), node values solved so the
// jump tangency and chord-consistency equalities hold.
inline Distribution bimodal_05_density() {
    static const double knots[] = {0.0, 1.0, 1.8, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0};
    static const double vals[] = {0.3,
                                  1.016299672907,
                                  1.1,
                                  0.487233592096,
                                  0.425,
                                  0.441252272727,
                                  0.585,
                                  0.18,
                                  0.09};
    const int nk = 9;
    const double W = 0.09;
    auto pl = [&](double t) {
        int i = 0;
        while (i + 2 < nk && t > knots[i + 1]) ++i;
        double u = (t - knots[i]) / (knots[i + 1] - knots[i]);
        return vals[i] + u * (vals[i + 1] - vals[i]);
    };
    auto slope = [&](int i) {
        return (vals[i + 1] - vals[i]) / (knots[i + 1] - knots[i]);
    };
    auto shape = [&](double t) {
        for (int i = 1; i + 1 < nk; ++i) {
            if (std::abs(t - knots[i]) < W) {
                double sl = slope(i - 1), sr = slope(i);
                double x = t - (knots[i] - W);
                return (vals[i] - sl * W) + sl * x + (sr - sl) / (4.0 * W) * x * x;
            }
        }
        return pl(t);
    };
    std::vector<double> nodes, dens;
    const std::size_t n = 2001;
    for (std::size_t i = 0; i < n; ++i) {
        double t = 5.0 * double(i) / double(n - 1);
        nodes.push_back(t);
        dens.push_back(shape(t));
    }
    return Distribution::tabulated(nodes, dens);
}

inline ProblemSpec bimodal_05() {
    Support s{0.0, 5.0};
    return ProblemSpec::make(s, bimodal_05_density(), CostFn::power(2.0),
                             Objective::quality_max());
}

// canonical two-standard scheme on [0, 5] with c = q^2/2
inline DeterministicScheme two_standard_scheme() {
    DeterministicScheme sch;
    sch.segments.push_back({0.0, 1.0, SegmentKind::exclusion, 0.0});
    sch.segments.push_back({1.0, 3.0, SegmentKind::pooling, 2.0});
    sch.segments.push_back({3.0, 4.0, SegmentKind::pooling, 4.0});
    sch.segments.push_back({4.0, 5.0, SegmentKind::reveal, 0.0});
    return sch;
}

// deterministic uniform draw
inline double draw(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 32>(rng);
}

}  // namespace fixtures
