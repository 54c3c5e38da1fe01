#pragma once

/// @file zero_mass.hpp
/// @brief The zero-mass problem -Delta u = g(u): shooting, height scans with
/// Pohozaev-filtered candidates, the pointwise F_q decay bound and the
/// perturbation-stability experiment.

#include <optional>
#include <string>
#include <vector>

#include "nlslab/nonlinearity.hpp"
#include "nlslab/radial.hpp"
#include "nlslab/shooting.hpp"

namespace nlslab {

struct ZeroMassOptions {
    double rtol = 1e-11;
    double atol = 1e-15;
    double horizon = 1e4;  ///< in units of sqrt(s0/g(s0))
    double blow = 1e8;
    double decay_level = 1e-6;  ///< N = 2: positive below this at the horizon
    std::size_t nodes = 8192;  ///< profile grid for candidates
    int threads = 0;           ///< 0: hardware concurrency
    double pohozaev_tol = 1e-3;
    double inconclusive_limit = 0.2;
};

/// Outcome classes: CrossesZero, Decays (certified algebraic tail for N >= 3,
/// small positive value at the horizon for N = 2), Blows, Inconclusive.
ShotOutcome zero_mass_shoot(const Nonlinearity& nl, double q, double s0, const ZeroMassOptions& opts = {});

struct ZeroMassCandidate {
    double height = 0.0;
    std::optional<RadialFunction> profile;
    double Z = 0.0;             ///< Z_G including the analytic gradient tail
    double grad2 = 0.0;
    double pohozaev_res = 0.0;  ///< |N Z - ||grad u||^2| / (||grad u||^2 + 1)
    bool in_Fq = true;
    bool accepted = false;
    std::string note;
};

enum class G2Verdict { NoSolutionFound, CandidateFound, Unreliable };
std::string to_string(G2Verdict v);

struct ZeroMassScan {
    double q = 0.0;
    double beta_cap = 0.0;
    std::vector<double> heights;
    std::vector<ShotOutcome> outcomes;
    std::vector<ZeroMassCandidate> candidates;
    G2Verdict verdict = G2Verdict::NoSolutionFound;
    std::optional<double> candidate_level;  ///< least Z among accepted candidates below the cap
    double inconclusive_fraction = 0.0;
    std::string label = "numerical, grid-limited";
};

/// heights must span at least 6 decades; beta_cap may be +inf (plain (g2)).
ZeroMassScan g2_scan(const Nonlinearity& nl, double q, double beta_cap, const std::vector<double>& heights,
                     const ZeroMassOptions& opts = {});

struct DecayCheck {
    bool holds = true;
    double C_est = 0.0;
    double C_half_window = 0.0;  ///< same maximum over R <= Rmax/4
    double C_theory = 0.0;       ///< ((q+2)/(2 sigma_N))^{2/(q+2)} from the radial estimate
};

/// C_est = max_R |u(R)| R^{2(N-1)/(q+2)} / (int_{|x|>R}|u|^q)^{1/(q+2)} (int_{|x|>R}|grad u|^2)^{1/(q+2)}
/// over R <= Rmax/2; holds when finite and within 10% of the value over R <= Rmax/4.
DecayCheck decay_check(const RadialFunction& u, double q);

struct StabilityRow {
    double eps = 0.0;
    double xi_norm = 0.0;  ///< eps ||Xi||_X
    G2Verdict verdict = G2Verdict::NoSolutionFound;
    double inconclusive_fraction = 0.0;
    std::size_t candidates = 0;
    /// verdict at doubled height density, filled for rows breaking monotonicity
    std::optional<G2Verdict> dense_verdict;
};

struct StabilityTable {
    bool baseline_ok = true;  ///< eps = 0 gives NoSolutionFound
    std::vector<StabilityRow> rows;  ///< in the order of eps_list
    std::optional<double> largest_ok;  ///< largest eps with NoSolutionFound
    std::optional<double> threshold;   ///< largest eps below which every verdict is NoSolutionFound
    bool monotone = true;
};

/// eps_list must be strictly decreasing and positive.
StabilityTable stability_experiment(const Nonlinearity& nl_base, const PerturbationXi& xi,
                                    const std::vector<double>& eps_list, double beta_cap,
                                    const std::vector<double>& heights, double q, const ZeroMassOptions& opts = {});

}  // namespace nlslab
