#include <cmath>

#include "doctest.h"
#include "nlslab/functionals.hpp"
#include "nlslab/shooting.hpp"

using namespace nlslab;

TEST_CASE("planar critical mass matches the Townes soliton") {
    // ||Q||_2^2 = 11.70089652... for -Q'' - Q'/r + Q = Q^3 (independent literature value)
    CHECK(compute_m1(ProblemParams(2)) == doctest::Approx(11.700896524 / 2.0).epsilon(1e-9));
    const auto est = compute_m1_detailed(ProblemParams(2));
    CHECK(std::abs(est.fine - est.coarse) < 1e-8);
}

TEST_CASE("shot classification brackets the ground state height") {
    const ProblemParams P(2);
    const auto nl = make_power(P);
    const auto gs = find_ground_state(nl, 1.0);
    CHECK(shoot(nl, 1.0, 0.9 * gs.s0).classification == ShotClass::Blows);
    CHECK(shoot(nl, 1.0, 1.1 * gs.s0).classification == ShotClass::CrossesZero);
    CHECK_THROWS_AS(shoot(nl, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(shoot(nl, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("degenerate start is flagged") {
    // mu s0 = g(s0) for the cubic at s0 = 1, mu = 1: u = 1 is constant
    const auto out = shoot(make_power(ProblemParams(2)), 1.0, 1.0);
    CHECK(out.degenerate_start);
}

TEST_CASE("ground state height scales like mu^{N/4}") {
    for (int N : {2, 3, 4}) {
        const auto nl = make_power(ProblemParams(N));
        const double s1 = find_ground_state(nl, 1.0).s0;
        const double s4 = find_ground_state(nl, 4.0).s0;
        CHECK(s4 / s1 == doctest::Approx(std::pow(4.0, 0.25 * N)).epsilon(1e-8));
    }
}

TEST_CASE("ground state is positive, radially decreasing and resolved") {
    const auto gs = find_ground_state(make_bump(ProblemParams(2), 0.5, 1), 2.0);
    const auto v = gs.u.values();
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] <= v[i - 1]);
    CHECK(v.back() > 0);
    CHECK(tail_mass_fraction(gs.u) < 1e-12);
    CHECK(std::abs(gs.pohozaev_res) < 1e-4);
    CHECK(std::abs(gs.nehari_res) < 1e-4);
    CHECK(gs.action > 0);
}

TEST_CASE("power level identity b(lambda) = 0 at the critical mass") {
    const auto nl = make_power(ProblemParams(3));
    const double m1 = compute_m1(nl.params());
    for (double lam : {-3.0, 0.0, 2.5}) CHECK(std::abs(b_of_lambda(nl, lam, m1)) <= 1e-6 * std::exp(lam) * m1);
}

TEST_CASE("no ground state when g stays below the linear term") {
    // tabulated g(s) = s^3/(1+s^2) < s: every shot turns around at mu = 2
    const ProblemParams P(2);
    std::vector<double> s, g;
    for (double x : log_space(1e-4, 1e4, 600)) s.push_back(x), g.push_back(x * x * x / (1 + x * x));
    CHECK_THROWS_AS(find_ground_state(make_tabulated(P, s, g), 2.0), NoSolution);
}
