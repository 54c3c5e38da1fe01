#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlslab/lab.hpp"
#include "nlslab/scenario.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {
bool mentions(const std::vector<Diagnostic>& d, const std::string& field) {
    for (const auto& x : d)
        if (x.field == field) return true;
    return false;
}
}  // namespace

TEST_CASE("empty configuration is valid and round-trips") {
    const Scenario s = parse_scenario("");
    CHECK_FALSE(has_errors(validate(s)));
    const Scenario t = parse_scenario(to_ini(s));
    CHECK(to_ini(t) == to_ini(s));
}

TEST_CASE("non-default values survive serialization") {
    const Scenario s = parse_scenario(
        "[problem]\nN = 3\nexperiment = zero_mass\nseed = 42\n"
        "[nonlinearity]\nkind = bump\neps = 0.25\nsign = -1\n"
        "[zero_mass]\nbeta_cap = inf\nheights = 30\n"
        "[stability]\neps_list = 0.4, 0.1\n");
    CHECK(s.N == 3);
    CHECK(s.experiment == Experiment::ZeroMass);
    CHECK(s.seed == 42);
    CHECK(s.nonlinearity.sign == -1);
    CHECK(s.nonlinearity.eps == 0.25);
    CHECK(s.zero_mass.heights == 30);
    CHECK(s.stability.eps_list == std::vector<double>{0.4, 0.1});
    CHECK(to_ini(parse_scenario(to_ini(s))) == to_ini(s));
}

TEST_CASE("static checks name the offending field") {
    const auto d1 = validate(parse_scenario("[problem]\nN = 1\n"));
    CHECK(has_errors(d1));
    CHECK(mentions(d1, "problem.N"));
    const auto d2 = validate(parse_scenario("[nonlinearity]\nkind = profile\nalpha = 0.7\n"));
    REQUIRE(has_errors(d2));
    bool bound = false;
    for (const auto& x : d2) bound = bound || x.message.find("alpha = 0.7 violates the profile bound") != std::string::npos;
    CHECK(bound);
    CHECK(has_errors(validate(parse_scenario("[tolerances]\natol = 1e-3\nrtol = 1e-6\n"))));
    CHECK(has_errors(validate(parse_scenario("[zero_mass]\nh_lo = 1\nh_hi = 100\n"))));
    CHECK(has_errors(validate(parse_scenario("[stability]\neps_list = 0.1, 0.2\n"))));
    CHECK(has_errors(validate(parse_scenario("[problem]\nexperiment = stability\n"))));
    CHECK_FALSE(has_errors(validate(parse_scenario("[problem]\nexperiment = stability\nN = 3\n[nonlinearity]\nkind = g2-example\n"))));
}

TEST_CASE("unknown keys are collected and reported by validation") {
    const Scenario s = parse_scenario("[grid]\nnodez = 5\n[extra]\nfoo = 1\n");
    const auto d = validate(s);
    CHECK(has_errors(d));
    CHECK(mentions(d, "grid.nodez"));
    CHECK(mentions(d, "extra.foo"));
}

TEST_CASE("malformed values carry their line number") {
    try {
        parse_scenario("[problem]\nN = 2\n\n[grid]\nnodes = many\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 5);
        CHECK(e.field() == "grid.nodes");
    }
    CHECK_THROWS_AS(parse_scenario("[problem]\nexperiment = everything\n"), ConfigError);
}

TEST_CASE("overrides and refinement") {
    const Scenario s = parse_scenario("[grid]\nnodes = 1000\n", {{"grid.nodes", "2000"}, {"problem.N", "4"}});
    CHECK(s.grid.nodes == 2000);
    CHECK(s.N == 4);
    const Scenario r = refined(s);
    CHECK(r.grid.nodes == 4000);
    CHECK(r.scan_b.samples > s.scan_b.samples);
    CHECK(r.zero_mass.heights == 2 * s.zero_mass.heights);
    CHECK(mentions(validate(parse_scenario("", {{"grid.bogus", "1"}})), "grid.bogus"));
    CHECK_THROWS_AS(parse_scenario("", {{"nodot", "1"}}), ConfigError);
}

TEST_CASE("ground-state run is deterministic and writes its report") {
    const Scenario s = parse_scenario("[problem]\nN = 2\n[grid]\nnodes = 2048\n");
    const auto a = execute(s), b = execute(s);
    CHECK(a.summary.dump() == b.summary.dump());
    CHECK(headline(a) == "accepted");
    const fs::path dir = fs::temp_directory_path() / "nlslab_test_report";
    fs::remove_all(dir);
    Scenario w = s;
    w.out_dir = dir.string();
    run(w);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "MANIFEST.txt"));
    CHECK(fs::exists(dir / "profile.csv"));
    std::ifstream in(dir / "MANIFEST.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("experiment: ground-state") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("invalid scenarios do not run") {
    CHECK_THROWS_AS(execute(parse_scenario("[problem]\nN = 1\n")), ConfigError);
}
