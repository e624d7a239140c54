#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ratingforge/numeric.hpp"

using namespace ratingforge;

TEST_CASE("quadratic cost closed forms: q_f = theta, q_i = 2 theta, theta_c = 2 theta") {
    auto spec = fixtures::u01_qmax();
    CHECK(spec.q_full(0.7) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(spec.q_full(0.0) == 0.0);
    CHECK(spec.q_indiff(0.5) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(spec.q_indiff(0.0) == 0.0);
    CHECK(spec.theta_c(0.0) == doctest::Approx(0.0));
}

TEST_CASE("cubic cost: analytic inverses vs root-found values") {
    Support s{0.0, 4.0};
    auto spec = ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(3.0),
                                  Objective::quality_max());
    // c = q^3/3: c'(q) = q^2 so q_f(4) = 2; AC(q) = q^2/3 so q_i(3) = 3
    CHECK(spec.q_full(4.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(spec.q_indiff(3.0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(spec.theta_c(3.0) == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("theta_c can exceed the support and theta_L clamps by the median rule") {
    Support s{1.0, 2.0};
    auto spec = ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(2.0),
                                  Objective::quality_max());
    CHECK(spec.theta_c(1.5) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(spec.theta_L(1.5) == doctest::Approx(2.0));  // clamped above
    CHECK(spec.theta_L(0.25) == doctest::Approx(1.0));  // theta_c = 0.5 clamps below
}

TEST_CASE("theta_L interior when theta_c lands inside the support") {
    auto spec = fixtures::u01_qmax();
    CHECK(spec.theta_L(0.25) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("kappa: quality max 0, linear delegation exact alpha, quad-loss ratio 1") {
    CHECK(fixtures::u01_qmax().kappa() == 0.0);

    Support s{0.0, 1.0};
    auto ld = ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(2.0),
                                Objective::linear_delegation(BetaSpec::affine(1.0), 0.6));
    CHECK(ld.kappa() == doctest::Approx(0.6));

    CHECK(fixtures::quadloss_u01().kappa() == doctest::Approx(1.0));
}

TEST_CASE("kappa grid infimum for a genuinely nonlinear pairing") {
    // psi = beta q - q^2/2 against c = q^3/3: -psi_qq / c'' = 1 / (2 q), so the
    // infimum over (0, q_max] sits at q_max
    Support s{0.5, 1.0};
    auto spec = ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(3.0),
                                  Objective::quadratic_loss(BetaSpec::affine(2.0)));
    double q_max = spec.q_max();
    CHECK(spec.kappa() == doctest::Approx(1.0 / (2.0 * q_max)).epsilon(1e-4));
}

TEST_CASE("power cost properties on a 1001 grid") {
    for (double p : {2.0, 3.0}) {
        Support s{0.0, 1.0};
        auto spec = ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(p),
                                      Objective::quality_max());
        for (double t : num::linspace(0.0, 1.0, 1001)) {
            double qf = spec.q_full(t);
            double qi = spec.q_indiff(t);
            CHECK(std::abs(qf - std::pow(t, 1.0 / (p - 1.0))) <= 1e-9);
            CHECK(std::abs(qi - std::pow(p * t, 1.0 / (p - 1.0))) <= 1e-9);
            CHECK(qi >= qf - 1e-12);
            if (t > 1e-6) CHECK(qi > qf);
        }
    }
}

TEST_CASE("average cost is increasing along the indifference curve") {
    auto spec = fixtures::pareto_13();
    double prev = -1.0;
    for (double t : num::linspace(1.0, 3.0, 101)) {
        double qi = spec.q_indiff(t);
        double ac = spec.cost().c(qi) / qi;
        CHECK(ac >= prev - 1e-10);
        prev = ac;
    }
}

TEST_CASE("extension convention: cdf exactly 0 below and 1 above the support") {
    auto d = Distribution::triangular(Support{1.0, 2.0}, 1.5);
    CHECK(d.cdf(1.0 - 1e-9) == 0.0);
    CHECK(d.cdf(0.0) == 0.0);
    CHECK(d.cdf(2.0 + 1e-9) == 1.0);
    CHECK(d.cdf(50.0) == 1.0);
    CHECK(d.pdf(0.5) == 0.0);
    CHECK(d.pdf(2.5) == 0.0);
}

TEST_CASE("downward-bias audit refuses and names a witness") {
    // beta(theta) = 0.2 < alpha theta for large theta: psi_q(q_f, theta) < 0
    Support s{0.5, 1.0};
    CHECK_THROWS_WITH_AS(
        ProblemSpec::make(s, Distribution::uniform(s), CostFn::power(2.0),
                          Objective::linear_delegation(BetaSpec::affine(0.2), 1.0)),
        doctest::Contains("downward-bias"), spec_error);
}

TEST_CASE("distribution families normalize and differentiate") {
    Support s{1.0, 3.0};
    auto pareto = Distribution::truncated_pareto(s, 2.0);
    CHECK(pareto.cdf(3.0) == doctest::Approx(1.0));
    CHECK(pareto.cdf(1.0) == doctest::Approx(0.0));
    // constant elasticity -(alpha + 1)
    for (double t : {1.2, 1.9, 2.7})
        CHECK(t * pareto.pdf_deriv(t) / pareto.pdf(t) == doctest::Approx(-3.0).epsilon(1e-12));

    auto expo = Distribution::truncated_exponential(Support{0.0, 1.0}, 2.0);
    double mass = num::integrate([&](double t) { return expo.pdf(t); }, 0.0, 1.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

    auto beta = Distribution::beta_poly(Support{0.0, 1.0}, 1, 0);
    CHECK(beta.pdf(0.5) == doctest::Approx(1.0).epsilon(1e-12));  // f = 2 theta
    CHECK(beta.cdf(0.5) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("tabulated distribution reproduces a smooth density") {
    std::vector<double> nodes, dens;
    for (double t : num::linspace(0.0, 1.0, 201)) {
        nodes.push_back(t);
        dens.push_back(2.0 - 2.0 * t + 0.5);  // affine, strictly positive
    }
    auto d = Distribution::tabulated(nodes, dens);
    double z = 1.0 + 0.5;  // mass of the unnormalized shape
    for (double t : {0.1, 0.45, 0.8})
        CHECK(d.pdf(t) == doctest::Approx((2.5 - 2.0 * t) / z).epsilon(1e-4));
    CHECK(d.cdf(1.0) == doctest::Approx(1.0));
    CHECK(d.mode() == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("mode finder locates interior peaks") {
    CHECK(Distribution::triangular(Support{0.0, 1.0}, 0.37).mode() ==
          doctest::Approx(0.37).epsilon(1e-6));
    CHECK(Distribution::beta_poly(Support{0.0, 1.0}, 2, 2).mode() ==
          doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("linear cost requires the signaling flag") {
    Support s{0.0, 1.0};
    CHECK_THROWS_AS(ProblemSpec::make(s, Distribution::uniform(s),
                                      CostFn::scaled_power(1.0, 1.0),
                                      Objective::quality_max()),
                    spec_error);
    NumericOptions opts;
    opts.allow_linear_cost = true;
    auto spec = ProblemSpec::make(s, Distribution::uniform(s),
                                  CostFn::scaled_power(1.0, 1.0),
                                  Objective::quality_max(), opts);
    CHECK_THROWS_AS(spec.q_max(), solver_error);
}

TEST_CASE("malformed cost trips the bracket guard") {
    auto spec = fixtures::u01_qmax();
    // theta far beyond any reachable marginal cost on the expanded bracket
    CHECK_THROWS_AS(spec.q_full(1e30), solver_error);
}
