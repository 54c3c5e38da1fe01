#pragma once

/// @file shooting.hpp
/// @brief Shooting for -u'' - (N-1)u'/r + mu u = g(u): shot classification, least
/// action ground states, the critical mass m1 and the level b(lambda).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/nonlinearity.hpp"
#include "nlslab/radial.hpp"

namespace nlslab {

class NoSolution : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ShotClass { CrossesZero, Decays, Blows, Inconclusive };
std::string to_string(ShotClass c);

struct IntegratorSettings {
    double rtol = 1e-11;
    double atol = 1e-15;     ///< absolute, in units of s0
    double horizon = 80.0;   ///< in units of the decay length 1/sqrt(mu)
    double blow = 1e6;       ///< |u| > blow * s0 counts as blow-up
    double decay_level = 1e-9;
};

struct ShotOutcome {
    double s0 = 0.0;
    ShotClass classification = ShotClass::Inconclusive;
    double r_event = 0.0;  ///< crossing radius, turning radius or stop radius
    double r_end = 0.0;
    double u_end = 0.0;
    double du_end = 0.0;
    bool degenerate_start = false;  ///< mu s0 = g(s0): constant solution
    std::string diagnostic;
};

ShotOutcome shoot(const Nonlinearity& nl, double mu, double s0, const IntegratorSettings& settings = {});

struct GroundStateOptions {
    std::size_t nodes = kDefaultNodes;
    double rmax_scale = 30.0;  ///< Rmax = rmax_scale / sqrt(mu)
    double stretch = kDefaultStretch;
    double scan_lo = 1e-3, scan_hi = 1e4;  ///< s0 range in units of mu^{N/4}
    int per_decade = 8;
    double s0_tol = 1e-12;
    double residual_tol = 1e-4;
    IntegratorSettings integrator;
};

struct GroundState {
    double mu = 0.0;
    RadialFunction u;
    double action = 0.0;  ///< a(mu) = Psi_mu(u)
    double mass = 0.0;
    double pohozaev_res = 0.0;
    double nehari_res = 0.0;
    double s0 = 0.0;
    /// action of every decaying branch found, ascending
    std::vector<double> branch_actions;
    /// more than one branch with distinct action: least action need not be the
    /// mountain-pass value
    bool branch_ambiguity = false;
};

GroundState find_ground_state(const Nonlinearity& nl, double mu, const GroundStateOptions& opts = {});

/// m1 = (1/2)||omega_1||^2, Richardson-extrapolated over n and 2n nodes; cached per N.
double compute_m1(const ProblemParams& params);
/// m1 together with the two raw resolutions used.
struct M1Estimate {
    double m1 = 0.0, coarse = 0.0, fine = 0.0;
    std::size_t n_coarse = 0;
};
M1Estimate compute_m1_detailed(const ProblemParams& params, std::size_t n = kDefaultNodes);

/// a(e^lambda) - e^lambda m. Throws NoSolution if no ground state exists.
double b_of_lambda(const Nonlinearity& nl, double lambda, double m, const GroundStateOptions& opts = {});

}  // namespace nlslab
