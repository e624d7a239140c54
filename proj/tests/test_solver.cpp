#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "ratingforge/menu.hpp"
#include "ratingforge/numeric.hpp"
#include "ratingforge/solver.hpp"

using namespace ratingforge;

TEST_CASE("V on the uniform fixture: bunching value and the payoff tie") {
    auto spec = fixtures::u01_qmax();
    CHECK(V_of(spec, 0.5) == doctest::Approx(0.5).epsilon(1e-9));   // 2*0.5*(1-0.5)
    CHECK(V_of(spec, 0.0) == doctest::Approx(0.5).epsilon(1e-9));   // full revelation
    CHECK(V_of(spec, 1.0) == doctest::Approx(0.0));                 // everyone excluded
    // the plateau: V' = 0 on [0, 0.5)
    for (double t0 : {0.1, 0.3, 0.45})
        CHECK(std::abs(V_prime(spec, t0)) <= 1e-9);
    CHECK(V_prime(spec, 0.75) < 0.0);
}

TEST_CASE("V' closed form matches finite differences") {
    std::mt19937 rng(77u);
    int done = 0;
    while (done < 100) {
        ProblemSpec spec = (done % 3 == 0)   ? fixtures::triangular_qmax()
                           : (done % 3 == 1) ? fixtures::quadloss_u01()
                                             : fixtures::increasing_qmax();
        double t0 = fixtures::draw(rng, 0.05, 0.9);
        double h = 1e-5;
        double fd = (V_of(spec, t0 + h) - V_of(spec, t0 - h)) / (2 * h);
        CHECK(std::abs(V_prime(spec, t0) - fd) <= 1e-5 * (1.0 + std::abs(fd)));
        ++done;
    }
}

TEST_CASE("quadratic loss: V' root against the finite-difference oracle") {
    auto spec = fixtures::quadloss_u01();
    // r decreasing on R+ here, so the cutoff solver must sit at 0
    CutoffSolution sol = solve_cutoff(spec);
    CHECK(sol.theta0 <= 1e-9);
    for (double t0 : {0.2, 0.6}) {
        double h = 1e-5;
        double fd = (V_of(spec, t0 + h) - V_of(spec, t0 - h)) / (2 * h);
        CHECK(std::abs(V_prime(spec, t0) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("solve_cutoff on the increasing density: interior pass/fail root") {
    auto spec = fixtures::increasing_qmax();
    CutoffSolution sol = solve_cutoff(spec);
    CHECK(sol.theta0 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
    CHECK(spec.theta_c(sol.theta0) >= 1.0);
    // scan oracle over V itself
    double best = -1.0, best_t = 0.0;
    for (double t : num::linspace(0.0, 1.0, 2001)) {
        double v = V_of(spec, t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    CHECK(std::abs(best_t - sol.theta0) <= 2e-3);
    CHECK(sol.value == doctest::Approx(best).epsilon(1e-7));
}

TEST_CASE("V' is nonnegative below the support where the density vanishes") {
    auto spec = fixtures::pareto_13();
    for (double t0 : {0.3, 0.6, 0.9}) CHECK(V_prime(spec, t0) >= -1e-10);
}

TEST_CASE("solve_cutoff on the decreasing density: boundary zero, full revelation") {
    auto spec = fixtures::decreasing_qmax();
    CutoffSolution sol = solve_cutoff(spec);
    CHECK(sol.theta0 == doctest::Approx(0.0));
    CHECK(V_prime(spec, 0.0) <= 1e-9);
}

TEST_CASE("solve_cutoff reports the uniform plateau and breaks the tie at 0") {
    auto spec = fixtures::u01_qmax();
    CutoffSolution sol = solve_cutoff(spec);
    CHECK(sol.theta0 == doctest::Approx(0.0));
    CHECK(sol.plateau);
    CHECK(sol.set_lo == doctest::Approx(0.0));
    CHECK(sol.set_hi == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("build_scheme drops empty segments and honors the boundaries") {
    auto spec = fixtures::u01_qmax();
    DeterministicScheme sch = build_scheme(spec, 0.3);
    REQUIRE(sch.segments.size() == 3);
    CHECK(sch.segments[0].kind == SegmentKind::exclusion);
    CHECK(sch.segments[0].hi == doctest::Approx(0.3));
    CHECK(sch.segments[1].kind == SegmentKind::pooling);
    CHECK(sch.segments[1].standard == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(sch.segments[1].hi == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(sch.segments[2].kind == SegmentKind::reveal);

    // cutoff at the bottom: no exclusion segment
    DeterministicScheme noexcl = build_scheme(spec, 0.0);
    CHECK(noexcl.segments.front().kind != SegmentKind::exclusion);

    // pass/fail: no revealing segment when theta_c >= theta_hi
    DeterministicScheme pf = build_scheme(spec, 0.75);
    CHECK(pf.segments.back().kind == SegmentKind::pooling);
}

TEST_CASE("scheme_payoff: closed forms and the malformed guard") {
    auto spec = fixtures::u01_qmax();
    DeterministicScheme fr;
    fr.segments.push_back({0.0, 1.0, SegmentKind::reveal, 0.0});
    CHECK(scheme_payoff(spec, fr) == doctest::Approx(0.5).epsilon(1e-9));

    DeterministicScheme excl;
    excl.segments.push_back({0.0, 1.0, SegmentKind::exclusion, 0.0});
    CHECK(scheme_payoff(spec, excl) == doctest::Approx(0.0));

    DeterministicScheme bad;
    bad.segments.push_back({0.0, 0.4, SegmentKind::exclusion, 0.0});
    bad.segments.push_back({0.4, 1.0, SegmentKind::pooling, 0.3});  // not q_i(0.4)
    CHECK_THROWS_AS(scheme_payoff(spec, bad), solver_error);
}

TEST_CASE("scheme payoff agrees with V along lower censorship") {
    for (auto spec : {fixtures::triangular_qmax(), fixtures::increasing_qmax()}) {
        double t0 = solve_cutoff(spec).theta0;
        CHECK(scheme_payoff(spec, build_scheme(spec, t0)) ==
              doctest::Approx(V_of(spec, t0)).epsilon(1e-8));
    }
}

TEST_CASE("classify_regime across the canonical table") {
    SolveResult uni = classify_regime(fixtures::u01_qmax());
    CHECK(uni.regime == "fully-revealing");
    bool tie_pf = std::find(uni.tie_regimes.begin(), uni.tie_regimes.end(),
                            std::string("pass-fail")) != uni.tie_regimes.end();
    CHECK(tie_pf);

    SolveResult inc = classify_regime(fixtures::increasing_qmax());
    CHECK(inc.regime == "pass-fail");
    CHECK(inc.oracle_agrees);

    SolveResult dec = classify_regime(fixtures::decreasing_qmax());
    CHECK(dec.regime == "fully-revealing");
    CHECK(dec.tie_regimes.empty());

    SolveResult tri = classify_regime(fixtures::triangular_qmax());
    CHECK(tri.regime == "lower-censorship");
    CHECK(tri.s_reports.S.holds);
    CHECK(tri.c_report.holds);
    double mode = 0.5;
    CHECK(mode >= tri.cutoff - 1e-3);
    CHECK(mode <= tri.scheme.segments[1].hi + 1e-3);

    SolveResult skew = classify_regime(fixtures::leftskew_12());
    CHECK(skew.regime == "pass-fail");

    SolveResult lomax = classify_regime(fixtures::lomax_01());
    CHECK(lomax.regime == "fully-revealing");
}

TEST_CASE("regime labels are structurally consistent") {
    for (auto spec : {fixtures::u01_qmax(), fixtures::increasing_qmax(),
                      fixtures::decreasing_qmax(), fixtures::triangular_qmax(),
                      fixtures::leftskew_12(), fixtures::pareto_13()}) {
        SolveResult res = classify_regime(spec, 0);
        bool reveal = false, pool = false, excl = false;
        for (const Segment& s : res.scheme.segments) {
            reveal |= s.kind == SegmentKind::reveal;
            pool |= s.kind == SegmentKind::pooling;
            excl |= s.kind == SegmentKind::exclusion;
        }
        if (res.regime == "pass-fail") CHECK_FALSE(reveal);
        if (res.regime == "fully-revealing") {
            CHECK(reveal);
            CHECK_FALSE(pool);
            CHECK_FALSE(excl);
        }
        if (res.regime == "lower-censorship-no-exclusion") CHECK_FALSE(excl);
    }
}

TEST_CASE("no-exclusion observation: decreasing density keeps the bottom in") {
    // psi_qtheta <= -psi_qq/c'' holds for quality max and for quadratic loss
    auto pareto = fixtures::pareto_13();
    CHECK(solve_cutoff(pareto).theta0 <= pareto.theta_lo() + 1e-8);
    SolveResult res = classify_regime(pareto, 0);
    CHECK(res.regime == "lower-censorship-no-exclusion");

    Support s{0.0, 1.0};
    auto quad = ProblemSpec::make(s, Distribution::beta_poly(s, 0, 1),
                                  CostFn::power(2.0), Objective::quadratic_loss());
    CHECK(solve_cutoff(quad).theta0 <= 1e-8);
}

TEST_CASE("tabulated cost family drives the whole pipeline") {
    // samples of q^2/2: the solver must reproduce the quadratic closed forms
    std::vector<double> qs, cs;
    for (double q : num::linspace(0.0, 3.0, 301)) {
        qs.push_back(q);
        cs.push_back(0.5 * q * q);
    }
    cs[0] = 0.0;
    Support s{0.0, 1.0};
    auto spec = ProblemSpec::make(s, Distribution::triangular(s, 0.5),
                                  CostFn::tabulated(qs, cs), Objective::quality_max());
    // interpolation resolution: monotone-cubic slopes carry an O(h^2) bias
    CHECK(spec.q_full(0.7) == doctest::Approx(0.7).epsilon(1e-4));
    CHECK(spec.q_indiff(0.5) == doctest::Approx(1.0).epsilon(1e-4));
    SolveResult res = classify_regime(spec, 0);
    CHECK(res.regime == "lower-censorship");
    CHECK(res.cutoff == doctest::Approx(0.38673).epsilon(1e-3));
}

TEST_CASE("fractional power cost stays on the strict-family path") {
    Support s{0.0, 1.0};
    auto cost = CostFn::scaled_power(1.0, 1.5);
    CHECK(cost.zero_marginal_at_origin());
    auto spec = ProblemSpec::make(s, Distribution::triangular(s, 0.5), cost,
                                  Objective::quality_max());
    // c = q^1.5: AC = q^0.5 so q_i(t) = t^2; c' = 1.5 q^0.5 so q_f = (t/1.5)^2
    CHECK(spec.q_indiff(0.5) == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(spec.q_full(0.6) == doctest::Approx(0.16).epsilon(1e-8));
    SolveResult res = classify_regime(spec, 0);
    CHECK(res.regime == "lower-censorship");
    CHECK(ic_audit(spec, res.scheme).ok);
}

TEST_CASE("custom tabulated objective reproduces quality maximization") {
    // psi_q == 1 sampled on a coarse grid lowers to psi = q pointwise
    Support s{0.0, 1.0};
    std::vector<double> qn = num::linspace(0.0, 2.0, 5);
    std::vector<double> tn = num::linspace(0.0, 1.0, 3);
    std::vector<std::vector<double>> g(qn.size(), std::vector<double>(tn.size(), 1.0));
    auto spec = ProblemSpec::make(s, Distribution::triangular(s, 0.5),
                                  CostFn::power(2.0), Objective::custom(qn, tn, g));
    CHECK_FALSE(spec.linear_delegation_mode());
    CHECK(spec.psi(0.7, 0.3) == doctest::Approx(0.7).epsilon(1e-12));
    // the general-mode solver must land on the quality-max optimum
    auto reference = fixtures::triangular_qmax();
    SolveResult res = classify_regime(spec, 0);
    SolveResult ref = classify_regime(reference, 0);
    CHECK(res.cutoff == doctest::Approx(ref.cutoff).epsilon(1e-5));
    CHECK(res.regime == ref.regime);
    CHECK(res.sufficiency_only);
}

TEST_CASE("bimodal density classifies as multi-standard and the DP confirms") {
    auto spec = fixtures::bimodal_05();
    SolveResult res = classify_regime(spec, 0);
    CHECK(res.regime == "multi-standard");
    CHECK(res.sufficiency_only == false);  // quality max is linear delegation

    // the two-standard scheme beats the best lower censorship
    double two = scheme_payoff(spec, fixtures::two_standard_scheme());
    double lc = solve_cutoff(spec).value;
    CHECK(two > lc + 1e-4);
}
