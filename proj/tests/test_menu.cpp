#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "ratingforge/menu.hpp"
#include "ratingforge/numeric.hpp"
#include "ratingforge/solver.hpp"

using namespace ratingforge;

TEST_CASE("best response: indifference ties go to the larger quality") {
    CostFn cost = CostFn::power(2.0);
    CHECK(best_response(cost, Menu{{2.0, 4.0}}, 3.0) == 4.0);  // exact tie at theta = 3
    CHECK(best_response(cost, Menu{{2.0, 4.0}}, 2.9) == 2.0);
    CHECK(best_response(cost, Menu{{2.0, 4.0}}, 3.1) == 4.0);
    CHECK(best_response(cost, Menu{}, 1.7) == 0.0);
    CHECK(best_response(cost, Menu{{2.0}}, 0.9) == 0.0);  // 1.8 - 2 < 0
}

TEST_CASE("best response is increasing in type for any menu") {
    CostFn cost = CostFn::power(3.0);
    Menu menu{{0.3, 0.8, 1.4, 2.0}};
    double prev = -1.0;
    for (double t : num::linspace(0.01, 3.0, 201)) {
        double q = best_response(cost, menu, t);
        CHECK(q >= prev);
        prev = q;
    }
}

TEST_CASE("threshold probes: types just around an indifference point split") {
    CostFn cost = CostFn::power(2.0);
    Menu menu{{1.0, 2.0}};
    double tau = (cost.c(2.0) - cost.c(1.0)) / 1.0;  // 1.5
    CHECK(best_response(cost, menu, tau - 1e-6) == 1.0);
    CHECK(best_response(cost, menu, tau + 1e-6) == 2.0);
    double tau0 = cost.c(1.0) / 1.0;  // 0.5 outside-option threshold
    CHECK(best_response(cost, menu, tau0 - 1e-6) == 0.0);
    CHECK(best_response(cost, menu, tau0 + 1e-6) == 1.0);
}

TEST_CASE("menu payoff closed forms") {
    auto spec = fixtures::u01_qmax();
    CHECK(menu_payoff(spec, Menu{{1.0}}) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(menu_payoff(spec, Menu{}) == 0.0);
}

TEST_CASE("two-standard scheme equals the equivalent delegation menu") {
    auto spec = fixtures::uniform_05();
    double scheme_value = scheme_payoff(spec, fixtures::two_standard_scheme());
    // menu {2, 4} plus a dense revealing tail over [4, 5]
    std::vector<double> levels{2.0, 4.0};
    for (double t : num::linspace(4.0, 5.0, 65))
        if (t > 4.0) levels.push_back(t);
    double menu_value = menu_payoff(spec, Menu{levels});
    // the revealing tail is discretized, so the menu undershoots by O(dq^2)
    CHECK(menu_value <= scheme_value + 1e-9);
    CHECK(scheme_value - menu_value <= 2e-4);
}

TEST_CASE("dp equals brute force on small anchored grids") {
    for (auto spec : {fixtures::u01_qmax(), fixtures::increasing_qmax(),
                      fixtures::triangular_qmax(), fixtures::pareto_13()}) {
        double cutoff = solve_cutoff(spec).theta0;
        for (std::size_t n : {5, 9, 12}) {
            auto grid = anchored_quality_grid(spec, cutoff, n);
            MenuSolution dp = dp_optimal_menu(spec, grid);
            MenuSolution bf = brute_force_menus(spec, grid);
            CHECK(dp.value == bf.value);  // exact equality by construction
            CHECK(dp.menu.levels == bf.menu.levels);
        }
    }
}

TEST_CASE("single-point grids reduce to a trivial compare") {
    auto spec = fixtures::u01_qmax();
    MenuSolution dp = dp_optimal_menu(spec, {1.0});
    MenuSolution bf = brute_force_menus(spec, {1.0});
    CHECK(dp.value == bf.value);
    CHECK(dp.value == doctest::Approx(0.5).epsilon(1e-9));
    // a level nobody would take loses to the empty menu
    MenuSolution none = brute_force_menus(spec, {5.0});
    CHECK(none.value == 0.0);
    CHECK(none.menu.levels.empty());
}

TEST_CASE("increasing density: the best menu is a singleton standard") {
    auto spec = fixtures::increasing_qmax();
    double cutoff = solve_cutoff(spec).theta0;
    auto grid = anchored_quality_grid(spec, cutoff, 10);
    MenuSolution bf = brute_force_menus(spec, grid);
    REQUIRE(bf.menu.levels.size() == 1);
    CHECK(bf.menu.levels[0] == doctest::Approx(spec.q_indiff(cutoff)).epsilon(1e-9));
}

TEST_CASE("decreasing density: the best menu is the full revealing grid") {
    auto spec = fixtures::decreasing_qmax();
    std::vector<double> grid;
    for (double t : num::linspace(0.1, 1.0, 10)) grid.push_back(spec.q_full(t));
    MenuSolution bf = brute_force_menus(spec, grid);
    CHECK(bf.menu.levels == grid);
}

TEST_CASE("projection consistency against the solver optimum") {
    auto spec = fixtures::triangular_qmax();
    SolveResult res = classify_regime(spec, 0);
    auto grid = anchored_quality_grid(spec, res.cutoff, 12);
    MenuSolution bf = brute_force_menus(spec, grid);
    std::vector<double> projected{spec.q_indiff(res.cutoff)};
    for (double q : grid)
        if (q > projected.front() + 1e-12) projected.push_back(q);
    double proj_value = menu_payoff(spec, Menu{projected});
    CHECK(proj_value >= bf.value - 1e-6);
    // the grid menu can only lose the quantified resolution bound vs the scheme
    CHECK(res.value >= bf.value - 1e-9);
    CHECK(res.value - proj_value <= 5e-3);
}

TEST_CASE("dp returns the two-standard menu on the bimodal fixture") {
    auto spec = fixtures::bimodal_05();
    std::vector<double> grid{1.0, 2.0, 3.0, 3.5, 4.0};
    for (double t : num::linspace(4.25, 5.0, 4)) grid.push_back(t);
    MenuSolution dp = dp_optimal_menu(spec, grid);
    MenuSolution bf = brute_force_menus(spec, grid);
    CHECK(dp.value == bf.value);
    CHECK(dp.menu.levels == bf.menu.levels);
    // two pooled standards (2 and 4) followed by the revealing tail
    REQUIRE(dp.menu.levels.size() == 6);
    CHECK(dp.menu.levels[0] == 2.0);
    CHECK(dp.menu.levels[1] == 4.0);
}

TEST_CASE("oracle equivalence on 50 randomized instances") {
    std::mt19937 rng(424242u);
    for (int it = 0; it < 50; ++it) {
        double lo = fixtures::draw(rng, 0.0, 0.8);
        double hi = lo + fixtures::draw(rng, 0.6, 2.0);
        Support s{lo, hi};
        Distribution d = (it % 4 == 0) ? Distribution::uniform(s)
                         : (it % 4 == 1)
                             ? Distribution::triangular(s, fixtures::draw(rng, lo + 0.1,
                                                                          hi - 0.1))
                         : (it % 4 == 2) ? Distribution::beta_poly(s, 1 + it % 3, 1, 0.1)
                                         : Distribution::truncated_exponential(
                                               s, fixtures::draw(rng, -2.0, 2.0));
        CostFn cost = (it % 2 == 0) ? CostFn::power(2.0) : CostFn::power(3.0);
        auto spec = ProblemSpec::make(s, d, cost, Objective::quality_max());
        std::size_t n = 4 + (std::size_t)(fixtures::draw(rng, 0.0, 1.0) * 9);  // 4..12
        std::vector<double> grid;
        double q_top = spec.q_full(hi) * 1.2;
        for (std::size_t k = 0; k < n; ++k)
            grid.push_back(q_top * (0.15 + 0.85 * double(k) / double(n)) +
                           fixtures::draw(rng, 0.0, 0.01));
        std::sort(grid.begin(), grid.end());
        MenuSolution dp = dp_optimal_menu(spec, grid);
        MenuSolution bf = brute_force_menus(spec, grid);
        CHECK(dp.value == bf.value);
        CHECK(dp.menu.levels == bf.menu.levels);
    }
}

TEST_CASE("grid larger than 20 is rejected by the brute force") {
    auto spec = fixtures::u01_qmax();
    std::vector<double> grid = num::linspace(0.05, 1.9, 21);
    CHECK_THROWS_AS(brute_force_menus(spec, grid), solver_error);
}

TEST_CASE("ic audit: the canonical two-standard scheme passes at 1e-8") {
    auto spec = fixtures::uniform_05();
    IcAuditReport rep = ic_audit(spec, fixtures::two_standard_scheme());
    CHECK(rep.ok);
    CHECK(rep.max_residual <= 1e-8);
}

TEST_CASE("ic audit catches a broken jump and passes the trivial scheme") {
    auto spec = fixtures::uniform_05();
    DeterministicScheme bad;
    bad.segments.push_back({0.0, 1.0, SegmentKind::exclusion, 0.0});
    bad.segments.push_back({1.0, 3.0, SegmentKind::pooling, 2.0});
    bad.segments.push_back({3.0, 5.0, SegmentKind::pooling, 5.0});
    IcAuditReport rep = ic_audit(spec, bad);
    CHECK_FALSE(rep.ok);  // 3*2 - 2 = 4 vs 3*5 - 12.5 = 2.5

    DeterministicScheme fr;
    fr.segments.push_back({0.0, 5.0, SegmentKind::reveal, 0.0});
    CHECK(ic_audit(spec, fr).ok);
}

TEST_CASE("additive cost constants and the cutoff inequality") {
    auto [ef1, ei1] = additive_cost_constants(CostFn::power(2.0));
    CHECK(ef1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ei1 == doctest::Approx(2.0).epsilon(1e-10));

    auto [ef2, ei2] = additive_cost_constants(CostFn::scaled_power(1.0, 2.0));
    CHECK(ef2 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ei2 == doctest::Approx(1.0).epsilon(1e-10));

    // decreasing density: F(theta0+1) - F(theta0-1) <= 2 f(theta0) at the bottom
    auto d = fixtures::pareto_13().dist();
    CHECK(additive_cutoff_margin(d, 1.0) > 0.0);
}
