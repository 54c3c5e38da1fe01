#pragma once

/// @file functionals.hpp
/// @brief Energy, action and Lagrangian functionals on radial functions, plus the
/// Pohozaev/Nehari residuals and the Gagliardo–Nirenberg check.

#include <stdexcept>
#include <string>

#include "nlslab/nonlinearity.hpp"
#include "nlslab/radial.hpp"

namespace nlslab {

/// Raised when G(u) or g(u) overflows at some node.
class NonFiniteValue : public std::overflow_error {
  public:
    NonFiniteValue(const std::string& what, double radius) : std::overflow_error(what), radius_(radius) {}
    double radius() const { return radius_; }

  private:
    double radius_;
};

struct FunctionalValues {
    double mu = 0.0;           ///< e^lambda
    double m = 0.0;            ///< reference mass in the Lagrangian
    double mass = 0.0;         ///< (1/2)||u||_2^2
    double grad2 = 0.0;        ///< ||grad u||_2^2
    double action_psi = 0.0;   ///< Psi_mu(u) = energy + mu mass
    double energy = 0.0;       ///< (1/2)||grad u||^2 - int G(u)
    double lagrangian = 0.0;   ///< I(lambda, u) = Psi_mu(u) - mu m
    double zero_mass = 0.0;    ///< Z_G(u), same integrand as the energy
    double Q = 0.0;            ///< int g(u)u - 2G(u)
    double K = 0.0;            ///< K(a; lambda, u); NaN unless PerturbedPower
    double pohozaev_res = 0.0;
    double nehari_res = 0.0;
};

/// Nodal integrals of G(u), g(u)u. Throws NonFiniteValue on overflow.
struct PotentialIntegrals {
    double G = 0.0;
    double gu = 0.0;
};
PotentialIntegrals potential_integrals(const Nonlinearity& nl, const RadialFunction& u);

FunctionalValues evaluate(const Nonlinearity& nl, const RadialFunction& u, double lambda, double m);

double energy(const Nonlinearity& nl, const RadialFunction& u);
double q_functional(const Nonlinearity& nl, const RadialFunction& u);
/// K(a; lambda, u) for PerturbedPower.
double k_functional(const Nonlinearity& nl, const RadialFunction& u, double lambda);

/// [(N-2)/2 ||grad u||^2 - N(int G - mu/2 ||u||^2)] / (||grad u||^2 + mu||u||^2 + 1).
/// With mu = 0 this is the zero-mass identity N Z_G - ||grad u||^2, normalized.
double pohozaev_residual(const Nonlinearity& nl, const RadialFunction& u, double mu);
/// (||grad u||^2 + mu||u||^2 - int g(u)u) / (||grad u||^2 + mu||u||^2 + 1).
double nehari_residual(const Nonlinearity& nl, const RadialFunction& u, double mu);

struct GNCheck {
    bool holds = true;
    double slack = 0.0;    ///< (1/2)||grad u||^2 - ||u||_{p+1}^{p+1}/(p+1)
    bool vacuous = false;  ///< mass(u) > m1: the inequality is not asserted
};
GNCheck gn_check(const RadialFunction& u, double m1, double tol = 1e-8);

/// (1/2) t^{-1} (||grad u_{0t}||^2 - Q(u_{0t})), N = 2 only.
double dt_energy_along_dilation(const Nonlinearity& nl, const RadialFunction& u, double t);

}  // namespace nlslab
