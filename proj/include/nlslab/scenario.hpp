#pragma once

/// @file scenario.hpp
/// @brief Experiment scenarios: INI-style configuration with one section per
/// module, static validation, serialization and the mapping to module options.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/mass_flow.hpp"
#include "nlslab/minimax.hpp"
#include "nlslab/nonlinearity.hpp"
#include "nlslab/shooting.hpp"
#include "nlslab/zero_mass.hpp"

namespace nlslab {

enum class Experiment { GroundState, ScanB, MinimizeD, Legendre, ZeroMass, Examples, Stability };
/// CLI spelling: ground-state, scan-b, minimize-d, legendre, zero-mass, examples, stability.
std::string to_string(Experiment e);
/// Accepts the CLI spelling or underscores.
std::optional<Experiment> parse_experiment(const std::string& name);

/// Malformed configuration: syntax, unparsable value or unknown experiment.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& field, int line, const std::string& what);
    const std::string& field() const { return field_; }
    int line() const { return line_; }  ///< 0 when unknown

  private:
    std::string field_;
    int line_;
};

struct NonlinearitySpec {
    /// power | profile | plateau | bump | rho | tabulated | two-scale | g2-example
    std::string kind = "power";
    double alpha = 0.0;  ///< profile, plateau, rho
    double L = 4.0;      ///< profile
    std::optional<double> mollify;
    double eps = 0.5;  ///< bump amplitude, g2-example perturbation size
    int sign = 1;      ///< bump: +1 gives G >= G_0
    double k = 4.0;    ///< rho family exponent
    std::string table;  ///< tabulated: CSV "s,g"
    double alpha1 = -0.3, alpha2 = 0.3;
    double L2 = 4.0;           ///< two-scale: common L of both profiles
    std::optional<double> ell;  ///< two-scale: default is the admissible minimum rounded up, plus 1
};

struct GridSpec {
    std::size_t nodes = kDefaultNodes;
    double rmax_scale = 30.0;
    double stretch = kDefaultStretch;
    int per_decade = 8;
};

struct ToleranceSpec {
    double rtol = 1e-11;
    double atol = 1e-15;
    double s0_tol = 1e-12;
    double residual_tol = 1e-4;
    double grad_tol = 1e-8;
    double pohozaev_tol = 1e-3;
};

struct GroundStateSpec {
    double mu = 1.0;
};

struct ScanSpec {
    double lambda_lo = -8.0, lambda_hi = 8.0;
    std::size_t samples = 33;
    double lambda_tol = 1e-3;
    std::optional<double> m;  ///< default m1
};

struct FlowSpec {
    std::optional<double> m;  ///< default m1
    int max_iter = 50000;
    int random_seeds = 0;  ///< extra Gaussian seeds drawn from the scenario seed
    bool compare_scan = true;  ///< also run the ODE-level scan and report |d - inf b|
};

struct LegendreSpec {
    std::optional<double> m;
    double mu_lo = 1e-2, mu_hi = 1e2;
    std::size_t mu_count = 17;
};

struct ZeroMassSpec {
    std::optional<double> q;  ///< default p
    double h_lo = 1e-3, h_hi = 1e5;
    std::size_t heights = 40;
    /// "inf", "auto" (sup b from a level scan, plus a 20% margin) or a number
    std::string beta_cap = "auto";
    double horizon = 1e4;
};

struct ExamplesSpec {
    std::vector<double> alphas{-0.3, 0.3};
    std::vector<double> L_list{2.0, 8.0, 32.0};
    std::size_t two_scale_samples = 49;
};

struct StabilitySpec {
    std::vector<double> eps_list{0.5, 0.2, 0.1, 0.05, 0.02};
};

struct Diagnostic {
    enum class Severity { Error, Warning } severity = Severity::Error;
    std::string field;
    std::string message;
};

struct Scenario {
    int N = 2;
    Experiment experiment = Experiment::GroundState;
    NonlinearitySpec nonlinearity;
    GridSpec grid;
    ToleranceSpec tolerances;
    GroundStateSpec ground_state;
    ScanSpec scan_b;
    FlowSpec minimize_d;
    LegendreSpec legendre;
    ZeroMassSpec zero_mass;
    ExamplesSpec examples;
    StabilitySpec stability;
    std::string out_dir = "nlslab_out";
    std::uint64_t seed = 0;
    bool refine = false;
    /// unknown keys met while parsing, reported by validate()
    std::vector<Diagnostic> parse_notes;
};

using Override = std::pair<std::string, std::string>;  ///< ("section.key", value)

/// Parses INI text (sections per module); overrides are applied on top.
Scenario parse_scenario(const std::string& text, const std::vector<Override>& overrides = {});
Scenario load_scenario(const std::string& path, const std::vector<Override>& overrides = {});
/// Full serialization; parse_scenario(to_ini(s)) reproduces s.
std::string to_ini(const Scenario& s);

/// Static checks only; never throws.
std::vector<Diagnostic> validate(const Scenario& s);
bool has_errors(const std::vector<Diagnostic>& d);

/// Doubles the resolution: nodes, scan samples, heights, frequencies, per-decade density.
Scenario refined(const Scenario& s);

Nonlinearity build_nonlinearity(const Scenario& s);
GroundStateOptions ground_state_options(const Scenario& s);
ScanOptions scan_options(const Scenario& s);
FlowOptions flow_options(const Scenario& s);
ZeroMassOptions zero_mass_options(const Scenario& s);
std::vector<double> zero_mass_heights(const Scenario& s);

}  // namespace nlslab
