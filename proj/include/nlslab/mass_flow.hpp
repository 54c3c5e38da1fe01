#pragma once

/// @file mass_flow.hpp
/// @brief Minimization of the energy on the mass sphere {(1/2)||u||^2 = m} by a
/// preconditioned projected-gradient flow, with attainment diagnostics, the
/// d = inf b comparison, the Legendre relation and the N = 2 dilation device.

#include <optional>
#include <string>
#include <vector>

#include "nlslab/minimax.hpp"
#include "nlslab/nonlinearity.hpp"
#include "nlslab/radial.hpp"

namespace nlslab {

enum class FlowVerdict { Converged, Concentrating, Vanishing, MaxIter };
std::string to_string(FlowVerdict v);

struct FlowSample {
    int iter = 0;
    double energy = 0.0;
    double supnorm = 0.0;
    double kappa = 0.0;
    double gradnorm = 0.0;
};

struct FlowOptions {
    int max_iter = 50000;
    double grad_tol = 1e-8;   ///< relative to 1 + |energy|
    double armijo = 1e-4;
    double shift = 1.0;       ///< lower bound of the preconditioner shift
    bool adaptive_shift = true;  ///< shift = max(shift, kappa)
    int window = 200;         ///< iterations for the plateau tests
    double concentration_factor = 10.0;
    double inner_fraction = 0.9;
    bool record_trajectory = true;
};

struct FlowReport {
    double m = 0.0;
    double d_estimate = 0.0;
    FlowVerdict verdict = FlowVerdict::MaxIter;
    std::vector<FlowSample> trajectory;
    double multiplier = 0.0;   ///< kappa at the last iterate
    double el_residual = 0.0;  ///< relative Euler–Lagrange residual with kappa
    double final_gradnorm = 0.0;
    double initial_sup = 0.0;
    double final_sup = 0.0;
    double inner_mass_fraction = 0.0;  ///< mass fraction in r < Rmax/100
    double max_mass_error = 0.0;       ///< max |mass - m|/m over all projections
    bool energy_monotone = true;
    int iterations = 0;
    std::string diagnostic;
    std::optional<RadialFunction> minimizer;  ///< last iterate
};

FlowReport minimize_d(const Nonlinearity& nl, double m, const RadialFunction& init, const FlowOptions& opts = {});

/// The three standard seeds on `grid`, each scaled to mass m: omega_1-shaped,
/// broad Gaussian, narrow Gaussian.
std::vector<RadialFunction> standard_seeds(const ProblemParams& params, double m, const GridPtr& grid);

struct BestFlow {
    FlowReport best;
    std::vector<FlowReport> runs;
};
BestFlow minimize_d_multistart(const Nonlinearity& nl, double m, const FlowOptions& opts = {},
                               std::size_t nodes = kDefaultNodes);

struct DComparison {
    double d = 0.0;
    double b_lower = 0.0;
    double gap = 0.0;
    bool d_defined = true, b_defined = true;
    FlowVerdict verdict = FlowVerdict::MaxIter;
    double multiplier = 0.0;
    LevelScan scan;
};

/// d from the flow (best of three seeds) against the inf of b from the
/// ODE-level scan over [lambda_lo, lambda_hi].
DComparison verify_d_equals_ubar(const Nonlinearity& nl, double m1, double lambda_lo = -8.0,
                                 double lambda_hi = 8.0, std::size_t samples = 33, const FlowOptions& opts = {});

struct LegendreResult {
    double lhs = 0.0;  ///< d(m) from the flow
    double rhs = 0.0;  ///< inf over mu of a(mu) - mu m
    double gap = 0.0;
    double argmin_mu = 0.0;
    bool boundary_infimum = false;
    std::vector<std::pair<double, double>> table;  ///< (mu, a(mu) - mu m)
};

/// mu_grid log-spaced; the argmin is refined by Brent's method between its
/// neighbours. The lambda -> -inf limit 0 of the alpha = 0 families enters
/// the infimum and is flagged as a boundary infimum.
LegendreResult legendre_check(const Nonlinearity& nl, double m, const std::vector<double>& mu_grid,
                              const FlowOptions& opts = {});

struct DilationImprovement {
    bool noop = false;  ///< Q(u) > 0 already
    double t0 = 1.0;
    double energy_before = 0.0, energy_after = 0.0;
    double Q_before = 0.0, Q_after = 0.0;
    std::optional<RadialFunction> improved;
};

/// N = 2: for Q(u) <= 0 finds t0 in (0, 1) with Q(u_{0 t0}) > 0 and energy not
/// increased (Q <= 0 on (t0, 1] makes the energy increasing in t there).
DilationImprovement n2_dilation_improve(const Nonlinearity& nl, const RadialFunction& u);

}  // namespace nlslab
