#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "nlslab/nonlinearity.hpp"

using namespace nlslab;

namespace {

/// G from g by adaptive quadrature: the independent check of every model's primitive.
double primitive(const Nonlinearity& nl, double s) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate([&](double t) { return nl.g(t); }, 0.0, s, 12,
                                                                         1e-13);
}

void check_primitive(const Nonlinearity& nl, std::initializer_list<double> at) {
    for (double s : at) CHECK(nl.G(s) == doctest::Approx(primitive(nl, s)).epsilon(1e-8).scale(1e-12));
}

}  // namespace

TEST_CASE("pure power values and parity") {
    const ProblemParams P(2);
    const Nonlinearity nl = make_power(P);
    CHECK(nl.g(2.0) == doctest::Approx(8.0));
    CHECK(nl.G(2.0) == doctest::Approx(4.0));
    CHECK(nl.g(-2.0) == doctest::Approx(-8.0));
    CHECK(nl.G(-2.0) == doctest::Approx(4.0));
    CHECK(nl.h(3.0) == 0.0);
    CHECK(nl.H(3.0) == 0.0);
    CHECK(nl.g(0.0) == 0.0);
    const Nonlinearity n3 = make_power(ProblemParams(3));
    CHECK(n3.g(8.0) == doctest::Approx(std::pow(8.0, 7.0 / 3.0)));
}

TEST_CASE("primitives agree with quadrature of g") {
    const ProblemParams P(2);
    check_primitive(make_perturbed_power(P, make_profile_a(0.3, 4.0, P)), {0.1, 0.5, 1.0, 3.0, 7.0});
    check_primitive(make_perturbed_power(P, make_profile_a(-0.3, 2.0, P)), {0.2, 1.0, 2.5, 5.0});
    check_primitive(make_bump(P, 0.5, 1), {0.5, 1.5, 2.0, 2.9, 4.0});
    check_primitive(make_bump(P, 0.5, -1), {1.2, 2.0, 3.5});
    check_primitive(make_rho_family(P, 0.5), {0.01, 0.7, 1.0, 1.3, 20.0});
    check_primitive(make_plateau_power(P, 0.3), {0.3, 2.0});
    const ProblemParams P3(3);
    check_primitive(make_g2_example(P3, 0.0), {0.5, 1.1, 1.5, 2.0, 2.5, 3.5});
    check_primitive(make_g2_example(P3, 0.2), {1.8, 2.3, 2.8});
    check_primitive(make_g2_example(P, 0.3), {1.0, 2.0, 3.5});
}

TEST_CASE("plateau profile respects its bounds and plateau") {
    const ProblemParams P(2);
    for (double alpha : {-0.5, -0.3, 0.3, 0.5}) {
        const auto a = make_profile_a(alpha, 4.0, P);
        CHECK(a->value(1.0) == doctest::Approx(alpha));
        // the plateau survives mollification on [1/L, L]
        CHECK(a->value(1.0 / 4.0) == doctest::Approx(alpha));
        CHECK(a->value(4.0) == doctest::Approx(alpha));
        CHECK(std::abs(a->value(5.0)) < std::abs(alpha));
        for (double s : log_space(1e-6, 1e6, 400)) CHECK(std::abs(a->value(s)) <= std::abs(alpha) + 1e-15);
        const auto sup = a->support();
        REQUIRE(sup);
        CHECK(a->value(0.5 * sup->first) == 0.0);
        CHECK(a->value(2.0 * sup->second) == 0.0);
    }
    CHECK_THROWS(make_profile_a(0.7, 4.0, P));
    CHECK_THROWS(make_profile_a(0.3, 0.5, P));
}

TEST_CASE("bump families bracket the power") {
    const ProblemParams P(2);
    const auto up = make_bump(P, 0.5, 1), down = make_bump(P, 0.5, -1), pw = make_power(P);
    for (double s : {0.5, 1.2, 2.0, 2.7, 3.5}) {
        CHECK(up.G(s) >= pw.G(s));
        CHECK(down.G(s) <= pw.G(s));
    }
    CHECK(up.G(2.0) > pw.G(2.0));
    CHECK(up.G(0.9) == pw.G(0.9));
    CHECK_THROWS(make_bump(P, 3.0, 1));
}

TEST_CASE("rho family limits") {
    const ProblemParams P(2);
    const auto nl = make_rho_family(P, 0.5);
    CHECK(nl.rho(1e-4) == doctest::Approx(0.5e-16 / (1 + 1e-16)).epsilon(1e-9));
    CHECK(nl.rho(1e4) == doctest::Approx(0.5).epsilon(1e-8));
    const auto rep = check_conditions(nl);
    CHECK(rep.rho_below_alpha.holds);
    CHECK(rep.limit_at_zero.holds);
    CHECK(rep.limit_at_infinity.holds);
}

TEST_CASE("structural conditions for the power") {
    const auto rep = check_conditions(make_power(ProblemParams(3)));
    CHECK(rep.ambrosetti_rabinowitz.holds);
    CHECK(rep.g3.holds);
    CHECK(rep.limit_at_zero.holds);
    CHECK(rep.limit_at_infinity.holds);
}

TEST_CASE("tabulated power reproduces the power") {
    const ProblemParams P(2);
    std::vector<double> s, g;
    for (double x : log_space(1e-3, 50.0, 400)) s.push_back(x), g.push_back(x * x * x);
    const auto tab = make_tabulated(P, s, g);
    for (double x : {0.01, 0.5, 2.0, 40.0}) CHECK(tab.g(x) == doctest::Approx(x * x * x).epsilon(1e-5));
    CHECK(tab.G(2.0) == doctest::Approx(4.0).epsilon(1e-5));

    const auto path = std::filesystem::temp_directory_path() / "nlslab_table_test.csv";
    {
        std::ofstream os(path);
        os << "s,g\n";
        for (std::size_t i = 0; i < s.size(); ++i) os << s[i] << "," << g[i] << "\n";
    }
    CHECK(load_tabulated(P, path.string()).g(3.0) == doctest::Approx(27.0).epsilon(1e-5));
    std::filesystem::remove(path);
}

TEST_CASE("two-scale supports must be disjoint") {
    const ProblemParams P(2);
    const auto a1 = make_profile_a(-0.3, 4.0, P), a2 = make_profile_a(0.3, 4.0, P);
    const double lo = min_admissible_ell(*a1, *a2, P);
    CHECK(lo > 0);
    CHECK_THROWS_AS(make_two_scale(a1, a2, 0.5 * lo, P), SupportOverlap);
    const auto ts = make_two_scale(a1, a2, lo + 1.0, P);
    CHECK(ts.rho(1.0) == doctest::Approx(make_perturbed_power(P, a1).rho(1.0)));
}

TEST_CASE("perturbation norm of a known function") {
    const ProblemParams P(2);
    // Xi' = s^p / (1 + s^p), p = 3: sup over s <= 1 of 1/(1+s^3) is 1 (at 0),
    // sup over s >= 1 of s^2/(1+s^3) sits at s = 2^{1/3} with value 2^{2/3}/3
    const double p = P.p();
    const auto xi = make_xi([](double) { return 0.0; }, [p](double s) { return std::pow(s, p) / (1 + std::pow(s, p)); }, "test");
    const double expected = 1.0 + std::cbrt(4.0) / 3.0;
    CHECK(xi_norm(xi, P) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(xi_norm(scaled(xi, 2.0), P) == doctest::Approx(2 * expected).epsilon(1e-6));
}

TEST_CASE("zero-mass example structure") {
    const ProblemParams P(3);
    for (double s : log_space(0.05, 20.0, 200)) CHECK(g2_example_F1_prime(P, s) <= 1e-12);
    CHECK(std::abs(g2_example_F1_prime(P, 2.0)) <= 1e-10);
    CHECK(g2_example_phi_prime_at_2() > 0);
    CHECK(make_g2_example(P, 0.0).G(0.5) == doctest::Approx(make_power(P).G(0.5)));
    CHECK_THROWS(make_g2_example(P, -1.0));
}
