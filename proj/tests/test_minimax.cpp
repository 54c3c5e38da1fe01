#include <cmath>

#include "doctest.h"
#include "nlslab/minimax.hpp"

using namespace nlslab;

TEST_CASE("sign-case table") {
    const double band = 1e-3;
    CHECK(classify_case(-1.0, 1.0, band) == CaseTag::I);
    CHECK(classify_case(0.0, 1.0, band) == CaseTag::II);
    CHECK(classify_case(-1.0, 0.0, band) == CaseTag::III);
    CHECK(classify_case(1e-4, -1e-4, band) == CaseTag::IV);
    CHECK(classify_case(0.5, 1.0, band) == CaseTag::Undetermined);
    CHECK(to_string(CaseTag::I) == "i");
    CHECK(to_string(CaseTag::IV) == "iv");
}

TEST_CASE("asymptotic limits of b") {
    const ProblemParams P(2);
    const double m1 = compute_m1(P);
    auto [lo, hi] = b_limits(make_power(P), m1, m1);
    CHECK(lo == 0.0);
    CHECK(hi == 0.0);
    auto [rlo, rhi] = b_limits(make_rho_family(P, 0.5), m1, m1);
    REQUIRE(rhi);
    CHECK(*rhi == doctest::Approx(-0.5 * m1));
    CHECK(rlo == 0.0);
    auto [blo, bhi] = b_limits(make_bump(P, 0.5, 1), m1, m1);
    CHECK(blo == 0.0);
    CHECK(bhi == 0.0);
}

TEST_CASE("power scan is flat: case iv") {
    const ProblemParams P(2);
    const double m1 = compute_m1(P);
    const auto s = scan_b(make_power(P), m1, -4.0, 4.0, 9);
    CHECK(s.case_tag == CaseTag::IV);
    CHECK(s.undefined_count == 0);
    for (const auto& x : s.samples) CHECK(std::abs(x.b) <= 1e-6 * x.mu * m1);
}

TEST_CASE("plateau level scales exactly") {
    const ProblemParams P(3);
    const double m1 = compute_m1(P);
    for (double alpha : {-0.3, 0.3}) {
        const double a1 = find_ground_state(make_plateau_power(P, alpha), 1.0).action;
        CHECK(a1 * std::pow(1 + alpha, 2.0 / (P.p() - 1.0)) == doctest::Approx(m1).epsilon(1e-6));
    }
}

TEST_CASE("beta of a plateau profile approaches the plateau value") {
    const ProblemParams P(2);
    const double m1 = compute_m1(P);
    const auto t = leps_experiment(0.3, {2.0, 8.0}, P);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1].deviation < t.rows[0].deviation);
    CHECK(t.rows[0].target == doctest::Approx(m1 / 1.3));
    CHECK_THROWS(leps_experiment(0.7, {2.0}, P));
    CHECK_THROWS(leps_experiment(0.3, {8.0, 2.0}, P));
}

TEST_CASE("scan preconditions") {
    const ProblemParams P(2);
    CHECK_THROWS(scan_b(make_power(P), 1.0, 1.0, -1.0, 5));
    CHECK_THROWS(scan_b(make_power(P), 1.0, -1.0, 1.0, 1));
    CHECK_THROWS(scan_b(make_power(P), -1.0, -1.0, 1.0, 5));
}
