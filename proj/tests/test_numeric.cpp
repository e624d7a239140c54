#include <doctest.h>

#include <cmath>

#include "ratingforge/numeric.hpp"

using namespace ratingforge;

TEST_CASE("bracketed root find hits the residual tolerance") {
    auto f = [](double x) { return x * x * x - 2.0; };
    double r = num::find_root(f, 0.0, 2.0, 1e-12);
    CHECK(std::abs(f(r)) <= 1e-12);
    CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-10));
}

TEST_CASE("crossing finder returns the infimum on flat levels") {
    // g is flat at the target on [1, 2]; the infimum of the solution set is 1
    auto g = [](double x) { return x < 1.0 ? x : (x < 2.0 ? 1.0 : x - 1.0); };
    double r = num::find_crossing_increasing(g, 0.0, 3.0, 1.0);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adaptive Simpson with breakpoints integrates a kinked function") {
    auto f = [](double x) { return x < 0.5 ? x : 1.0 - x; };
    double got = num::integrate(f, 0.0, 1.0, {0.5});
    CHECK(got == doctest::Approx(0.25).epsilon(1e-12));

    auto g = [](double x) { return std::sin(10.0 * x); };
    double exact = (1.0 - std::cos(10.0)) / 10.0;
    CHECK(num::integrate(g, 0.0, 1.0) == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("reversed limits flip the sign") {
    auto f = [](double x) { return x; };
    CHECK(num::integrate(f, 1.0, 0.0) == doctest::Approx(-0.5));
}

TEST_CASE("cumulative integration agrees with closed forms") {
    auto xs = num::linspace(0.0, 2.0, 41);
    auto f = [](double x) { return std::exp(x); };
    auto cum = num::cumulative(f, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(cum[i] == doctest::Approx(std::exp(xs[i]) - 1.0).epsilon(1e-10));
}

TEST_CASE("parabolic cumulative beats trapezoid on curved data") {
    auto xs = num::linspace(0.0, 1.0, 101);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(x * x * x);
    auto para = num::cumulative_parabolic(xs, ys);
    auto trap = num::cumulative_trapezoid(xs, ys);
    double err_p = std::abs(para.back() - 0.25);
    double err_t = std::abs(trap.back() - 0.25);
    CHECK(err_p < 1e-10);
    CHECK(err_p < err_t);
}

TEST_CASE("pchip is monotone and interpolates nodes") {
    std::vector<double> xs{0.0, 0.3, 0.5, 0.9, 1.0};
    std::vector<double> ys{0.0, 0.1, 0.6, 0.95, 1.0};
    num::Pchip p(xs, ys);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(p(xs[i]) == doctest::Approx(ys[i]));
    double prev = p(0.0);
    for (double x = 0.0; x <= 1.0; x += 1e-3) {
        double cur = p(x);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
    CHECK(p.derivative(0.4) >= 0.0);
}

TEST_CASE("rk4 solves a linear IVP to high order") {
    auto xs = num::linspace(0.0, 1.0, 101);
    auto ys = num::rk4([](double, double y) { return y; }, xs, 1.0);
    CHECK(ys.back() == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("min_scan refines around the minimizer") {
    auto f = [](double x) { return (x - 0.31234) * (x - 0.31234); };
    auto got = num::min_scan(f, 0.0, 1.0, 101);
    CHECK(std::abs(got.x - 0.31234) < 1e-3);
}
