#include <cmath>

#include "doctest.h"
#include "nlslab/functionals.hpp"
#include "nlslab/mass_flow.hpp"

using namespace nlslab;

TEST_CASE("flow below the critical mass vanishes for the power") {
    const ProblemParams P(2);
    const double m1 = compute_m1(P);
    const auto grid = default_grid(P, 1.0, 2048);
    FlowOptions o;
    o.max_iter = 4000;
    const auto seed = with_mass(RadialFunction::sample(grid, [](double r) { return std::exp(-r * r); }), 0.5 * m1);
    const auto f = minimize_d(make_power(P), 0.5 * m1, seed, o);
    // the energy stays positive and decreases towards 0 by spreading out
    CHECK(f.energy_monotone);
    CHECK(f.max_mass_error <= 1e-13);
    CHECK(f.d_estimate > 0);
    CHECK(f.d_estimate < energy(make_power(P), seed));
    CHECK(f.final_sup < f.initial_sup);
    CHECK(f.verdict == FlowVerdict::Vanishing);
    CHECK(f.minimizer->values().back() == 0.0);
}

TEST_CASE("power at the critical mass: d = 0 with omega-type minimizers") {
    const ProblemParams P(2);
    const auto r = minimize_d_multistart(make_power(P), compute_m1(P));
    CHECK(std::abs(r.best.d_estimate) < 1e-6);
    for (const auto& run : r.runs) {
        CHECK(run.energy_monotone);
        CHECK(run.max_mass_error <= 1e-13);
    }
}

TEST_CASE("bump above the power: negative attained level") {
    const ProblemParams P(2);
    const double m1 = compute_m1(P);
    const auto r = minimize_d_multistart(make_bump(P, 0.5, 1), m1);
    CHECK(r.best.verdict == FlowVerdict::Converged);
    CHECK(r.best.d_estimate < -1.0);
    CHECK(r.best.el_residual < 1e-4);
    CHECK(r.best.multiplier > 0);
    REQUIRE(r.best.minimizer);
    CHECK(mass(*r.best.minimizer) == doctest::Approx(m1).epsilon(1e-13));
}

TEST_CASE("verdict strings") {
    CHECK(to_string(FlowVerdict::Converged) == "Converged");
    CHECK(to_string(FlowVerdict::Concentrating) == "Concentrating");
    CHECK(to_string(FlowVerdict::Vanishing) == "Vanishing");
    CHECK(to_string(FlowVerdict::MaxIter) == "MaxIter");
}

TEST_CASE("planar dilation improves a state with Q <= 0") {
    const ProblemParams P(2);
    // g ~ s^{1/2} at large s makes g(s)s - 2G(s) negative there
    std::vector<double> s, g;
    for (double x : log_space(1e-4, 1e4, 800)) s.push_back(x), g.push_back(x * x * x / std::pow(1 + x * x, 1.25));
    const auto nl = make_tabulated(P, s, g);
    const auto grid = build_grid(P, 40.0, 2048);
    const auto u = RadialFunction::sample(grid, [](double r) { return 200.0 * std::exp(-r * r); });
    const auto d = n2_dilation_improve(nl, u);
    REQUIRE_FALSE(d.noop);
    CHECK(d.Q_before <= 0);
    CHECK(d.Q_after > 0);
    CHECK(d.energy_after <= d.energy_before);
    CHECK(d.t0 > 0);
    CHECK(d.t0 < 1);
    REQUIRE(d.improved);
    CHECK(mass(*d.improved) == doctest::Approx(mass(u)).epsilon(1e-12));
    CHECK(n2_dilation_improve(make_power(P), u).noop);
}

TEST_CASE("invalid inputs") {
    const ProblemParams P(2);
    const auto grid = default_grid(P, 1.0, 256);
    const auto zero = RadialFunction::sample(grid, [](double) { return 0.0; });
    CHECK_THROWS(minimize_d(make_power(P), 1.0, zero));
    const auto u = RadialFunction::sample(grid, [](double r) { return std::exp(-r * r); });
    CHECK_THROWS(minimize_d(make_power(P), -1.0, u));
}
