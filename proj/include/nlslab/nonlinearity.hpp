#pragma once

/// @file nonlinearity.hpp
/// @brief Nonlinearity models g, G and their deviation h, H from the pure
/// mass-critical power, plateau profiles a(s), perturbations in the space X and
/// sampled structural condition checks.
///
/// All models are evaluated on s >= 0 and extended oddly (g, h) or evenly
/// (G, H, rho) to the negative axis.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/radial.hpp"

namespace nlslab {

enum class NonlinearityKind { Power, PerturbedPower, RhoFamily, Tabulated, ZeroMassExample };

std::string to_string(NonlinearityKind kind);

struct NonlinearityValues {
    double g = 0.0;
    double G = 0.0;
    double h = 0.0;
    double H = 0.0;
};

/// Model evaluated on s > 0.
class NonlinearityModel {
  public:
    virtual ~NonlinearityModel() = default;
    virtual NonlinearityValues eval(double s) const = 0;
};

/// Even profile a(s) perturbing the power: G(s) = (1 + a(s)) |s|^{p+1}/(p+1).
class AProfile {
  public:
    virtual ~AProfile() = default;
    /// a(s) for s > 0
    virtual double value(double s) const = 0;
    /// a'(s) s for s > 0
    virtual double log_slope(double s) const = 0;
    /// Closure of {a != 0} on (0, inf), or nullopt when a == 0.
    virtual std::optional<std::pair<double, double>> support() const = 0;
    virtual std::string describe() const = 0;
};

/// Mollified piecewise-logarithmic plateau profile: a = alpha on [1/(L+1), L+1],
/// ramps of log-slope tau = 1/(2N^2) down to 0, smoothed by a triweight kernel
/// of radius mollify_eps in log s. Closed form: the unmollified profile is a
/// sum of hinges in t = log s, each replaced by its exact convolution.
class ProfileA final : public AProfile {
  public:
    double value(double s) const override;
    double log_slope(double s) const override;
    std::optional<std::pair<double, double>> support() const override;
    std::string describe() const override;

    double alpha() const { return alpha_; }
    double L() const { return L_; }
    double tau() const { return tau_; }
    double mollify_eps() const { return eps_; }

  private:
    friend std::shared_ptr<const ProfileA> make_profile_a(double, double, const ProblemParams&,
                                                          std::optional<double>);
    ProfileA() = default;
    double alpha_ = 0.0, L_ = 2.0, tau_ = 0.0, eps_ = 0.0;
    std::vector<std::pair<double, double>> hinges_;  // (t_k, slope jump)
};

using ProfilePtr = std::shared_ptr<const AProfile>;

/// |alpha| <= 1/2, L > 1, 0 <= mollify_eps <= log((L+1)/L). The default radius
/// is half the admissible maximum.
std::shared_ptr<const ProfileA> make_profile_a(double alpha, double L, const ProblemParams& params,
                                               std::optional<double> mollify_eps = std::nullopt);

/// a(s) = alpha everywhere: the exact (1+alpha)-power.
ProfilePtr make_constant_profile(double alpha);

/// a(s) = sign * eps * exp(1/((|s|-2)^2 - 1)) on 1 < |s| < 3, zero elsewhere.
ProfilePtr make_bump_profile(double eps, int sign);

/// Thrown when the two profiles of a two-scale construction overlap.
class SupportOverlap : public std::invalid_argument {
  public:
    SupportOverlap(const std::string& what, double min_ell)
        : std::invalid_argument(what), min_ell_(min_ell) {}
    double min_admissible_ell() const { return min_ell_; }

  private:
    double min_ell_;
};

class Nonlinearity {
  public:
    Nonlinearity(NonlinearityKind kind, ProblemParams params, double alpha,
                 std::shared_ptr<const NonlinearityModel> model, ProfilePtr profile,
                 std::string description);

    NonlinearityKind kind() const { return kind_; }
    const ProblemParams& params() const { return params_; }
    /// Limit of h(s)/s at infinity.
    double alpha() const { return alpha_; }
    /// Non-null for PerturbedPower.
    const AProfile* profile() const { return profile_.get(); }
    const ProfilePtr& profile_ptr() const { return profile_; }
    const std::shared_ptr<const NonlinearityModel>& model() const { return model_; }
    const std::string& description() const { return description_; }

    NonlinearityValues eval(double s) const;
    double g(double s) const;
    double G(double s) const;
    double h(double s) const;
    double H(double s) const;
    /// H(s)/(s^2/2); 0 at s = 0.
    double rho(double s) const;

  private:
    NonlinearityKind kind_;
    ProblemParams params_;
    double alpha_;
    std::shared_ptr<const NonlinearityModel> model_;
    ProfilePtr profile_;
    std::string description_;
};

Nonlinearity make_power(const ProblemParams& params);
Nonlinearity make_perturbed_power(const ProblemParams& params, ProfilePtr profile);
/// g = (1 + alpha)|s|^{p-1}s exactly.
Nonlinearity make_plateau_power(const ProblemParams& params, double alpha);
/// G = (1 + sign eps bump) G_0; sign = +1 gives G >= G_0, -1 gives G <= G_0.
Nonlinearity make_bump(const ProblemParams& params, double eps, int sign);
/// rho(s) = alpha |s|^k / (1 + |s|^k).
Nonlinearity make_rho_family(const ProblemParams& params, double alpha, double k = 4.0);
/// Monotone-cubic table of g on s >= 0 (odd extension), continued by a matched
/// power law beyond the last abscissa.
Nonlinearity make_tabulated(const ProblemParams& params, std::vector<double> s,
                            std::vector<double> g);
Nonlinearity load_tabulated(const ProblemParams& params, const std::string& csv_path);

/// a_ell = a1 + a2(e^{-N ell/4} .). Throws SupportOverlap when the supports
/// intersect; returns the plain power when both profiles vanish.
Nonlinearity make_two_scale(const std::shared_ptr<const ProfileA>& a1,
                            const std::shared_ptr<const ProfileA>& a2, double ell,
                            const ProblemParams& params);
/// Smallest ell for which the two supports are disjoint (0 if either is empty).
double min_admissible_ell(const AProfile& a1, const AProfile& a2, const ProblemParams& params);

/// Even C^1 perturbation Xi with Xi(0) = 0.
struct PerturbationXi {
    std::function<double(double)> value;       ///< Xi(s), s >= 0
    std::function<double(double)> derivative;  ///< Xi'(s), s >= 0
    std::string name;
    double normX = 0.0;  ///< cached ||Xi||_X

    double operator()(double s) const { return value(std::abs(s)); }
    double prime(double s) const { return s < 0 ? -derivative(-s) : derivative(s); }
};

PerturbationXi make_xi(std::function<double(double)> value, std::function<double(double)> derivative,
                       std::string name);
PerturbationXi scaled(const PerturbationXi& xi, double c);

/// sup_{0<s<=1} |Xi'(s)|/s^p + sup_{s>=1} |Xi'(s)|/s on a dense log sample with
/// golden-section refinement around the sampled maxima.
double xi_norm(const PerturbationXi& xi, const ProblemParams& params);

/// G + eps Xi.
Nonlinearity perturb(const Nonlinearity& base, const PerturbationXi& xi, double eps);

/// Zero-mass example pair. For N >= 3: G_1 = s^{2*} F_1 with F_1 <= F_0,
/// F_1' <= 0, F_1'(2) = 0, plus eps * Upsilon, Upsilon = |s|^{2*} phi with
/// phi'(2) > 0. For N = 2: G_1 = G_0 (1 - chi), G_1(2) = 0, plus eps * Xi with
/// Xi' = phi, phi(2) < 0.
Nonlinearity make_g2_example(const ProblemParams& params, double eps);
/// The perturbation direction used by make_g2_example.
PerturbationXi g2_example_perturbation(const ProblemParams& params);
/// F_1'(s) of the unperturbed N >= 3 example (for checks).
double g2_example_F1_prime(const ProblemParams& params, double s);
/// phi'(2) of the N >= 3 perturbation bump.
double g2_example_phi_prime_at_2();

struct ConditionVerdict {
    bool holds = true;
    double worst_margin = 0.0;  ///< most negative normalized margin seen
    double witness = 0.0;       ///< s where worst_margin occurs
};

struct ConditionReport {
    ConditionVerdict ambrosetti_rabinowitz;  ///< g s >= (p+3)/2 G > 0
    ConditionVerdict g3;                     ///< G >= (N-2)/(2N) g s
    ConditionVerdict rho_below_alpha;        ///< rho < alpha off 0
    ConditionVerdict rho_nonincreasing;      ///< on (0, inf)
    ConditionVerdict limit_at_zero;          ///< h/|s|^{p-1}s -> 0
    ConditionVerdict limit_at_infinity;      ///< h/s -> alpha
};

/// Sampled certification on 10^4 log-spaced points of [s_lo, s_hi], refined by
/// bisection around sign changes of each margin.
ConditionReport check_conditions(const Nonlinearity& nl, double s_lo = 1e-6, double s_hi = 1e6,
                                 std::size_t samples = 10000);

std::vector<double> log_space(double lo, double hi, std::size_t count);

}  // namespace nlslab
