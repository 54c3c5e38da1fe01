#pragma once

/// @file minimax.hpp
/// @brief lambda-scans of b(lambda) = a(e^lambda) - e^lambda m, the inf/sup
/// estimates and sign-case classification, and the beta(a; lambda) experiments.

#include <optional>
#include <string>
#include <vector>

#include "nlslab/nonlinearity.hpp"
#include "nlslab/shooting.hpp"

namespace nlslab {

/// i: lower<0<tilde, ii: lower=0<tilde, iii: lower<0=tilde, iv: lower=0=tilde.
enum class CaseTag { I, II, III, IV, Undetermined };
std::string to_string(CaseTag c);

struct LevelSample {
    double lambda = 0.0;
    double mu = 0.0;
    double b = 0.0;
    double a = 0.0;
    double action_residual = 0.0;  ///< max(|pohozaev|, |nehari|) of the ground state
    bool defined = true;
    bool refinement = false;  ///< added by the extremum refinement
    std::string note;
};

struct ScanOptions {
    GroundStateOptions ground_state;
    double lambda_tol = 1e-3;
    /// include the known lambda -> -inf / +inf limits of b in the inf/sup
    bool include_limits = true;
};

struct LevelScan {
    double m = 0.0;
    double m1 = 0.0;
    double zero_band = 0.0;
    std::vector<LevelSample> samples;  ///< sorted by lambda
    double b_lower = 0.0;
    double b_tilde = 0.0;
    double lambda_lower = 0.0;
    double lambda_tilde = 0.0;
    bool lower_at_limit = false;  ///< the inf is the asymptotic limit, not a sample
    bool tilde_at_limit = false;
    std::optional<double> limit_minus_inf, limit_plus_inf;
    CaseTag case_tag = CaseTag::Undetermined;
    std::size_t undefined_count = 0;
};

/// Known limits of b(lambda) at -inf and +inf for the families where they are
/// available (nullopt otherwise).
std::pair<std::optional<double>, std::optional<double>> b_limits(const Nonlinearity& nl, double m, double m1);

LevelScan scan_b(const Nonlinearity& nl, double m, double lambda_lo, double lambda_hi, std::size_t n_samples,
                 const ScanOptions& opts = {});

CaseTag classify_case(double b_lower, double b_tilde, double zero_band);

/// beta(a; lambda) = b(lambda)/e^lambda + m1.
double beta_of(const Nonlinearity& nl, double lambda, const GroundStateOptions& opts = {});

struct LepsRow {
    double L = 0.0;
    double beta = 0.0;
    double target = 0.0;  ///< (1+alpha)^{-2/(p-1)} m1
    double deviation = 0.0;
};

struct LepsTable {
    double alpha = 0.0;
    std::vector<LepsRow> rows;
    bool strictly_decreasing = true;
};

LepsTable leps_experiment(double alpha, const std::vector<double>& L_list, const ProblemParams& params,
                          const GroundStateOptions& opts = {});

}  // namespace nlslab
