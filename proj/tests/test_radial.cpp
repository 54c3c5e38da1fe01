#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "nlslab/radial.hpp"

using namespace nlslab;

namespace {

// closed forms for u = exp(-r^2) in R^N
double gauss_l2sq(int N) { return std::pow(std::numbers::pi / 2.0, 0.5 * N); }
double gauss_grad2(const ProblemParams& P) {
    const int N = P.N();
    // 4 sigma_N int r^{N+1} e^{-2r^2} dr
    return 4.0 * P.sigmaN() * std::tgamma(0.5 * (N + 2)) / (2.0 * std::pow(2.0, 0.5 * (N + 2)));
}

}  // namespace

TEST_CASE("sphere measure and exponent") {
    CHECK(ProblemParams(2).sigmaN() == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(ProblemParams(3).sigmaN() == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(ProblemParams(4).sigmaN() == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi));
    CHECK(ProblemParams(2).p() == 3.0);
    CHECK(ProblemParams(4).p() == 2.0);
    CHECK(ProblemParams(3).two_star() == doctest::Approx(6.0));
}

TEST_CASE("grid construction rejects bad input") {
    const ProblemParams P(2);
    CHECK_THROWS_AS(build_grid(P, -1.0, 128), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(P, 10.0, 32), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(P, 10.0, 129), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(P, 10.0, 128, 0.5), std::invalid_argument);
    const auto g = build_grid(P, 10.0, 128);
    CHECK(g->size() == 129);
    CHECK(g->nodes().front() == 0.0);
    CHECK(g->nodes().back() == 10.0);
}

TEST_CASE("Gaussian norms match closed forms") {
    for (int N : {2, 3, 4}) {
        const ProblemParams P(N);
        const auto u = RadialFunction::sample(build_grid(P, 12.0, 2048), [](double r) { return std::exp(-r * r); });
        const Norms n = norms(u);
        CHECK(2.0 * n.mass == doctest::Approx(gauss_l2sq(N)).epsilon(1e-10));
        CHECK(n.grad2 == doctest::Approx(gauss_grad2(P)).epsilon(1e-8));
        CHECK(n.sup == doctest::Approx(1.0));
    }
}

TEST_CASE("quadrature converges at fourth order") {
    const ProblemParams P(3);
    auto err = [&](std::size_t n) {
        const auto u = RadialFunction::sample(build_grid(P, 12.0, n), [](double r) { return std::exp(-r * r); });
        return std::abs(grad2(u) - gauss_grad2(P));
    };
    const double e1 = err(128), e2 = err(256);
    CHECK(e1 / e2 > 12.0);
}

TEST_CASE("frequency rescaling preserves the L2 norm") {
    const ProblemParams P(2);
    const auto u = RadialFunction::sample(build_grid(P, 15.0, 1024), [](double r) { return std::exp(-r * r) * (1 + r); });
    for (double mu : {0.25, 1.0, 4.0, 9.0}) {
        const auto v = rescale_mu(u, mu);
        CHECK(mass(v) == doctest::Approx(mass(u)).epsilon(1e-12));
        CHECK(grad2(v) == doctest::Approx(mu * grad2(u)).epsilon(1e-10));
    }
}

TEST_CASE("mass-preserving dilation in the plane") {
    const ProblemParams P(2);
    const auto u = RadialFunction::sample(build_grid(P, 15.0, 1024), [](double r) { return std::exp(-r * r); });
    const auto v = dilate_mass_preserving(u, 0.3);
    CHECK(mass(v) == doctest::Approx(mass(u)).epsilon(1e-12));
    CHECK(grad2(v) == doctest::Approx(0.3 * grad2(u)).epsilon(1e-10));
    CHECK_THROWS(dilate_mass_preserving(RadialFunction::sample(build_grid(ProblemParams(3), 5, 128), [](double) { return 0.0; }), 2.0));
}

TEST_CASE("interpolation and scaling to a mass") {
    const ProblemParams P(2);
    const auto u = RadialFunction::sample(build_grid(P, 10.0, 512), [](double r) { return 1.0 / (1.0 + r * r); });
    const std::vector<double> at{0.0, 0.5, 3.3, 11.0};
    const auto v = u.interpolate(at);
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(v[2] == doctest::Approx(1.0 / (1.0 + 3.3 * 3.3)).epsilon(1e-6));
    CHECK(v[3] == 0.0);
    CHECK(mass(with_mass(u, 2.5)) == doctest::Approx(2.5));
}

TEST_CASE("csv output round-trips at 17 digits") {
    const ProblemParams P(2);
    const auto u = RadialFunction::sample(build_grid(P, 1.0, 64), [](double r) { return std::sqrt(2.0) * (1 - r); });
    std::ostringstream os;
    write_csv(os, u);
    std::istringstream is(os.str());
    std::string header, line;
    std::getline(is, header);
    CHECK(header == "r,u");
    std::getline(is, line);
    CHECK(std::stod(line.substr(line.find(',') + 1)) == u[0]);
}
