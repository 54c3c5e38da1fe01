#include <cmath>

#include "doctest.h"
#include "nlslab/shooting.hpp"
#include "nlslab/zero_mass.hpp"

using namespace nlslab;

TEST_CASE("power shots cross zero in every dimension") {
    for (int N : {2, 3, 4}) {
        const ProblemParams P(N);
        const auto nl = make_power(P);
        for (double s0 : {1e-3, 1.0, 1e4}) CHECK(zero_mass_shoot(nl, P.p(), s0).classification == ShotClass::CrossesZero);
    }
    CHECK_THROWS(zero_mass_shoot(make_power(ProblemParams(2)), 3.0, 0.0));
}

TEST_CASE("power scans find no solution") {
    for (int N : {2, 3, 4}) {
        const ProblemParams P(N);
        const auto s = g2_scan(make_power(P), P.p(), INFINITY, log_space(1e-3, 1e5, 40));
        CHECK(s.verdict == G2Verdict::NoSolutionFound);
        CHECK(s.inconclusive_fraction <= 0.2);
        CHECK(s.label == "numerical, grid-limited");
    }
}

TEST_CASE("height grid must span six decades") {
    const ProblemParams P(3);
    CHECK_THROWS(g2_scan(make_power(P), P.p(), INFINITY, log_space(1.0, 1e5, 20)));
    CHECK_THROWS(g2_scan(make_power(P), P.p(), INFINITY, {1.0}));
}

TEST_CASE("unperturbed example has no solution and scans are deterministic") {
    const ProblemParams P(3);
    const auto nl = make_g2_example(P, 0.0);
    const auto h = log_space(1e-3, 1e5, 40);
    const auto a = g2_scan(nl, P.p(), INFINITY, h), b = g2_scan(nl, P.p(), INFINITY, h);
    CHECK(a.verdict == G2Verdict::NoSolutionFound);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) CHECK(a.outcomes[i].classification == b.outcomes[i].classification);
    for (const auto& c : a.candidates) CHECK_FALSE(c.accepted);
}

TEST_CASE("pointwise decay bound") {
    const ProblemParams P(3);
    const double q = P.p();
    const auto grid = build_grid(P, 20.0, 4096);
    SUBCASE("zero function") {
        const auto d = decay_check(RadialFunction::sample(grid, [](double) { return 0.0; }), q);
        CHECK(d.holds);
        CHECK(d.C_est == 0.0);
    }
    SUBCASE("compact bump") {
        const auto d = decay_check(RadialFunction::sample(grid, [](double r) { return r < 2 ? std::pow(1 - r * r / 4, 3) : 0.0; }), q);
        CHECK(d.holds);
        CHECK(std::isfinite(d.C_est));
        CHECK(d.C_est > 0);
        CHECK(d.C_est <= d.C_theory);
    }
    SUBCASE("exponentially decaying ground state stays below the radial constant") {
        const auto gs = find_ground_state(make_power(P), 1.0);
        const auto d = decay_check(gs.u, q);
        CHECK(d.holds);
        CHECK(d.C_est <= d.C_theory);
    }
    SUBCASE("a nonzero constant is not in the space") {
        CHECK_FALSE(decay_check(RadialFunction::sample(grid, [](double) { return 1.0; }), q).holds);
    }
}

TEST_CASE("stability table bookkeeping") {
    const ProblemParams P(3);
    const auto base = make_g2_example(P, 0.0);
    const auto xi = g2_example_perturbation(P);
    const auto t = stability_experiment(base, xi, {0.2, 0.05}, INFINITY, log_space(1e-3, 1e5, 24), P.p());
    CHECK(t.baseline_ok);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].xi_norm == doctest::Approx(0.2 * xi_norm(xi, P)));
    if (t.rows[1].verdict == G2Verdict::NoSolutionFound) {
        REQUIRE(t.threshold);
    }
    CHECK_THROWS(stability_experiment(base, xi, {0.05, 0.2}, INFINITY, log_space(1e-3, 1e5, 24), P.p()));
    CHECK_THROWS(stability_experiment(base, xi, {0.2, -0.1}, INFINITY, log_space(1e-3, 1e5, 24), P.p()));
}

TEST_CASE("verdict strings") {
    CHECK(to_string(G2Verdict::NoSolutionFound) == "NoSolutionFound");
    CHECK(to_string(G2Verdict::CandidateFound) == "CandidateFound");
    CHECK(to_string(G2Verdict::Unreliable) == "Unreliable");
}
