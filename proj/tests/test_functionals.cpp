#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlslab/functionals.hpp"
#include "nlslab/shooting.hpp"

using namespace nlslab;

TEST_CASE("energy of a Gaussian against closed forms") {
    // u = A exp(-r^2), N = 2, p = 3: ||grad u||^2 = pi A^2, int u^4 = pi A^4 / 4
    const ProblemParams P(2);
    const double A = 1.7;
    const auto u = RadialFunction::sample(build_grid(P, 12.0, 2048), [A](double r) { return A * std::exp(-r * r); });
    const auto nl = make_power(P);
    const double pi = std::numbers::pi;
    const double expected = 0.5 * pi * A * A - 0.25 * pi * std::pow(A, 4) / 4.0;
    CHECK(energy(nl, u) == doctest::Approx(expected).epsilon(1e-9));
    const auto f = evaluate(nl, u, std::log(2.0), 1.0);
    CHECK(f.mu == doctest::Approx(2.0));
    CHECK(f.action_psi == doctest::Approx(f.energy + 2.0 * f.mass));
    CHECK(f.lagrangian == doctest::Approx(f.action_psi - 2.0));
    CHECK(f.zero_mass == doctest::Approx(f.energy));
    // Q = int g(u)u - 2G(u) = (1 - 2/4) int u^4
    CHECK(q_functional(nl, u) == doctest::Approx(0.5 * pi * std::pow(A, 4) / 4.0).epsilon(1e-9));
}

TEST_CASE("K functional reduces to the energy part for a = 0 away from the profile") {
    const ProblemParams P(2);
    const auto nl = make_perturbed_power(P, make_profile_a(0.3, 4.0, P));
    const auto u = RadialFunction::sample(build_grid(P, 12.0, 1024), [](double r) { return std::exp(-r * r); });
    const double K = k_functional(nl, u, 0.0);
    CHECK(std::isfinite(K));
    CHECK(std::isnan(evaluate(make_power(P), u, 0.0, 1.0).K));
}

TEST_CASE("ground state satisfies the Pohozaev and Nehari identities") {
    for (int N : {2, 3, 4}) {
        const ProblemParams P(N);
        const auto gs = find_ground_state(make_power(P), 1.0);
        CHECK(std::abs(pohozaev_residual(make_power(P), gs.u, 1.0)) < 1e-8);
        CHECK(std::abs(nehari_residual(make_power(P), gs.u, 1.0)) < 1e-8);
        // a non-solution fails them
        const auto g = with_mass(RadialFunction::sample(gs.u.grid(), [](double r) { return std::exp(-r * r); }), gs.mass);
        CHECK(std::abs(nehari_residual(make_power(P), g, 1.0)) > 1e-3);
    }
}

TEST_CASE("Gagliardo-Nirenberg inequality below the critical mass") {
    const ProblemParams P(2);
    const double m1 = compute_m1(P);
    const auto grid = build_grid(P, 30.0, 2048);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 25; ++k) {
        const double w1 = 0.3 + 3 * U(rng), w2 = 0.3 + 3 * U(rng), c = U(rng) - 0.5;
        const auto u = RadialFunction::sample(grid, [&](double r) { return std::exp(-r * r / (w1 * w1)) + c * std::exp(-r * r / (w2 * w2)); });
        const auto v = with_mass(u, m1 * (0.05 + 0.95 * U(rng)));
        const auto gn = gn_check(v, m1);
        CHECK(gn.holds);
        CHECK_FALSE(gn.vacuous);
    }
    // the optimizer sits on the boundary: slack is zero to discretization accuracy
    const auto gs = find_ground_state(make_power(P), 1.0);
    CHECK(std::abs(gn_check(gs.u, m1 * (1 + 1e-9)).slack) < 1e-8);
    CHECK(gn_check(with_mass(gs.u, 2 * m1), m1).vacuous);
}

TEST_CASE("overflow is reported with its radius") {
    const ProblemParams P(2);
    const auto u = RadialFunction::sample(build_grid(P, 1.0, 64), [](double r) { return r < 0.5 ? 1e120 : 0.0; });
    CHECK_THROWS_AS(potential_integrals(make_power(P), u), NonFiniteValue);
}

TEST_CASE("energy derivative along the planar dilation") {
    const ProblemParams P(2);
    const auto nl = make_bump(P, 0.5, 1);
    const auto u = RadialFunction::sample(build_grid(P, 20.0, 2048), [](double r) { return 2.0 * std::exp(-r * r / 2); });
    const double t = 0.8, h = 1e-4;
    const double fd = (energy(nl, dilate_mass_preserving(u, t + h)) - energy(nl, dilate_mass_preserving(u, t - h))) / (2 * h);
    CHECK(dt_energy_along_dilation(nl, u, t) == doctest::Approx(fd).epsilon(1e-5));
}
