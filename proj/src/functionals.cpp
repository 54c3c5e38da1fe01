#include "nlslab/functionals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace nlslab {

PotentialIntegrals potential_integrals(const Nonlinearity& nl, const RadialFunction& u) {
    auto w = u.grid()->weights();
    auto r = u.grid()->nodes();
    PotentialIntegrals out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto v = nl.eval(u[i]);
        if (!std::isfinite(v.G) || !std::isfinite(v.g)) {
            std::ostringstream os;
            os << "non-finite nonlinearity value at r = " << r[i] << " (u = " << u[i] << ")";
            throw NonFiniteValue(os.str(), r[i]);
        }
        out.G += w[i] * v.G;
        out.gu += w[i] * v.g * u[i];
    }
    return out;
}

double energy(const Nonlinearity& nl, const RadialFunction& u) {
    return 0.5 * grad2(u) - potential_integrals(nl, u).G;
}

double q_functional(const Nonlinearity& nl, const RadialFunction& u) {
    const auto pi = potential_integrals(nl, u);
    return pi.gu - 2.0 * pi.G;
}

double k_functional(const Nonlinearity& nl, const RadialFunction& u, double lambda) {
    const AProfile* a = nl.profile();
    if (nl.kind() != NonlinearityKind::PerturbedPower || a == nullptr)
        throw std::invalid_argument("k_functional: PerturbedPower only");
    const ProblemParams& pp = nl.params();
    const double amp = std::exp(0.25 * pp.N() * lambda);
    const double p1 = pp.p() + 1.0;
    auto w = u.grid()->weights();
    double pot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double s = std::abs(u[i]);
        if (s == 0.0) continue;
        pot += w[i] * (1.0 + a->value(amp * s)) * std::pow(s, p1);
    }
    return 0.5 * grad2(u) + mass(u) - pot / p1;
}

FunctionalValues evaluate(const Nonlinearity& nl, const RadialFunction& u, double lambda, double m) {
    if (!(u.grid()->params() == nl.params()))
        throw std::invalid_argument("evaluate: grid and nonlinearity dimensions differ");
    if (!(m > 0)) throw std::invalid_argument("evaluate: m must be positive");
    FunctionalValues f;
    f.mu = std::exp(lambda);
    f.m = m;
    f.mass = mass(u);
    f.grad2 = grad2(u);
    const auto pi = potential_integrals(nl, u);
    f.energy = 0.5 * f.grad2 - pi.G;
    f.zero_mass = f.energy;
    f.action_psi = f.energy + f.mu * f.mass;
    f.lagrangian = f.action_psi - f.mu * m;
    f.Q = pi.gu - 2.0 * pi.G;
    f.K = nl.kind() == NonlinearityKind::PerturbedPower ? k_functional(nl, u, lambda)
                                                         : std::numeric_limits<double>::quiet_NaN();
    const double N = nl.params().N();
    const double l2 = 2.0 * f.mass;
    const double denom = f.grad2 + f.mu * l2 + 1.0;
    f.pohozaev_res = (0.5 * (N - 2.0) * f.grad2 - N * (pi.G - 0.5 * f.mu * l2)) / denom;
    f.nehari_res = (f.grad2 + f.mu * l2 - pi.gu) / denom;
    return f;
}

double pohozaev_residual(const Nonlinearity& nl, const RadialFunction& u, double mu) {
    const double N = nl.params().N();
    const double g2 = grad2(u);
    const double l2 = 2.0 * mass(u);
    const auto pi = potential_integrals(nl, u);
    return (0.5 * (N - 2.0) * g2 - N * (pi.G - 0.5 * mu * l2)) / (g2 + mu * l2 + 1.0);
}

double nehari_residual(const Nonlinearity& nl, const RadialFunction& u, double mu) {
    const double g2 = grad2(u);
    const double l2 = 2.0 * mass(u);
    const auto pi = potential_integrals(nl, u);
    return (g2 + mu * l2 - pi.gu) / (g2 + mu * l2 + 1.0);
}

GNCheck gn_check(const RadialFunction& u, double m1, double tol) {
    const Norms n = norms(u);
    GNCheck c;
    c.slack = 0.5 * n.grad2 - n.lp1 / (u.grid()->params().p() + 1.0);
    c.vacuous = n.mass > m1;
    c.holds = c.vacuous || c.slack >= -tol * (1.0 + n.grad2);
    return c;
}

double dt_energy_along_dilation(const Nonlinearity& nl, const RadialFunction& u, double t) {
    const RadialFunction ut = dilate_mass_preserving(u, t);
    return 0.5 / t * (grad2(ut) - q_functional(nl, ut));
}

}  // namespace nlslab
