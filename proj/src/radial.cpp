#include "nlslab/radial.hpp"

#include <algorithm>
#include <math.h>  // pchip.hpp calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace nlslab {

ProblemParams::ProblemParams(int N) : N_(N) {
    if (N < 2) throw std::invalid_argument("ProblemParams: N must be >= 2");
    sigma_ = 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double ProblemParams::two_star() const {
    if (N_ <= 2) return std::numeric_limits<double>::infinity();
    return 2.0 * N_ / (N_ - 2.0);
}

namespace {

// sinh(k)/k = stretch, k >= 0
double solve_map_parameter(double stretch) {
    if (stretch <= 1.0 + 1e-14) return 0.0;
    double k = std::asinh(stretch) + std::log(2.0 * std::max(1.0, std::log(stretch)) + 1.0);
    for (int it = 0; it < 100; ++it) {
        const double f = std::sinh(k) / k - stretch;
        const double df = (k * std::cosh(k) - std::sinh(k)) / (k * k);
        const double step = f / df;
        k -= step;
        if (k <= 0) k = 1e-6;
        if (std::abs(step) < 1e-15 * k) break;
    }
    return k;
}

double gregory_weight(std::size_t i, std::size_t n) {
    const std::size_t j = std::min(i, n - i);
    switch (j) {
        case 0: return 3.0 / 8.0;
        case 1: return 7.0 / 6.0;
        case 2: return 23.0 / 24.0;
        default: return 1.0;
    }
}

}  // namespace

GridPtr build_grid(const ProblemParams& params, double rmax, std::size_t n, double stretch) {
    if (!std::isfinite(rmax) || !std::isfinite(stretch))
        throw std::invalid_argument("build_grid: non-finite input");
    if (rmax <= 0) throw std::invalid_argument("build_grid: Rmax must be positive");
    if (n < 64) throw std::invalid_argument("build_grid: need at least 64 intervals");
    if (n % 2 != 0) throw std::invalid_argument("build_grid: interval count must be even");
    if (stretch < 1.0) throw std::invalid_argument("build_grid: stretch must be >= 1");

    auto grid = std::shared_ptr<RadialGrid>(new RadialGrid(params));
    RadialGrid& g = *grid;
    g.rmax_ = rmax;
    g.stretch_ = stretch;
    g.map_k_ = solve_map_parameter(stretch);
    g.h_ = 1.0 / static_cast<double>(n);

    const double k = g.map_k_;
    const int N = params.N();
    auto r_of = [&](double xi) {
        return k == 0.0 ? rmax * xi : rmax * std::sinh(k * xi) / std::sinh(k);
    };
    auto dr_of = [&](double xi) {
        return k == 0.0 ? rmax : rmax * k * std::cosh(k * xi) / std::sinh(k);
    };

    g.nodes_.resize(n + 1);
    g.weights_.resize(n + 1);
    g.jac_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double xi = static_cast<double>(i) * g.h_;
        g.nodes_[i] = (i == n) ? rmax : r_of(xi);
        g.jac_[i] = dr_of(xi);
        g.weights_[i] = params.sigmaN() * gregory_weight(i, n) * g.h_ * g.jac_[i] *
                        std::pow(g.nodes_[i], N - 1);
    }
    g.mid_.resize(n);
    g.kin_w_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xi = (static_cast<double>(j) + 0.5) * g.h_;
        g.mid_[j] = r_of(xi);
        g.kin_w_[j] = g.h_ * params.sigmaN() * std::pow(g.mid_[j], N - 1) / dr_of(xi);
    }
    return grid;
}

GridPtr default_grid(const ProblemParams& params, double mu, std::size_t n) {
    if (!(mu > 0)) throw std::invalid_argument("default_grid: mu must be positive");
    return build_grid(params, 30.0 / std::sqrt(mu), n, kDefaultStretch);
}

// Staggered fourth-order stencil, even reflection at r = 0 and a one-sided
// stencil on the last interval.
void RadialGrid::staggered_derivative(std::span<const double> u, std::span<double> out) const {
    const std::size_t n = this->n();
    const double c = 1.0 / (24.0 * h_);
    out[0] = c * (u[1] - 27.0 * u[0] + 27.0 * u[1] - u[2]);
    for (std::size_t j = 1; j + 2 <= n; ++j)
        out[j] = c * (u[j - 1] - 27.0 * u[j] + 27.0 * u[j + 1] - u[j + 2]);
    out[n - 1] = c * (u[n - 3] - 3.0 * u[n - 2] - 21.0 * u[n - 1] + 23.0 * u[n]);
}

void RadialGrid::staggered_derivative_transpose(std::span<const double> v,
                                                std::span<double> out) const {
    const std::size_t n = this->n();
    const double c = 1.0 / (24.0 * h_);
    std::fill(out.begin(), out.end(), 0.0);
    out[1] += c * 28.0 * v[0];
    out[0] += -c * 27.0 * v[0];
    out[2] += -c * v[0];
    for (std::size_t j = 1; j + 2 <= n; ++j) {
        out[j - 1] += c * v[j];
        out[j] += -27.0 * c * v[j];
        out[j + 1] += 27.0 * c * v[j];
        out[j + 2] += -c * v[j];
    }
    out[n - 3] += c * v[n - 1];
    out[n - 2] += -3.0 * c * v[n - 1];
    out[n - 1] += -21.0 * c * v[n - 1];
    out[n] += 23.0 * c * v[n - 1];
}

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("RadialFunction: null grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("RadialFunction: length mismatch with grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("RadialFunction: non-finite value");
}

std::vector<double> RadialFunction::interpolate(std::span<const double> radii) const {
    std::vector<double> x(grid_->nodes().begin(), grid_->nodes().end());
    std::vector<double> y(values_);
    const double rmax = grid_->rmax();
    boost::math::interpolators::pchip<std::vector<double>> spline(std::move(x), std::move(y),
                                                                   0.0);
    std::vector<double> out(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        out[i] = (r < 0 || r > rmax) ? 0.0 : spline(r);
    }
    return out;
}

double integrate(const RadialGrid& grid, std::span<const double> f) {
    if (f.size() != grid.size()) throw std::invalid_argument("integrate: length mismatch");
    auto w = grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

double grad2(const RadialFunction& u) {
    const RadialGrid& g = *u.grid();
    std::vector<double> du(g.n());
    g.staggered_derivative(u.values(), du);
    auto kw = g.kinetic_weights();
    double s = 0.0;
    for (std::size_t j = 0; j < du.size(); ++j) s += kw[j] * du[j] * du[j];
    return s;
}

double mass(const RadialFunction& u) {
    auto w = u.grid()->weights();
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i] * u[i];
    return 0.5 * s;
}

Norms norms(const RadialFunction& u) {
    Norms out;
    const double p1 = u.grid()->params().p() + 1.0;
    auto w = u.grid()->weights();
    double l2 = 0.0, lp = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        l2 += w[i] * a * a;
        lp += w[i] * std::pow(a, p1);
        sup = std::max(sup, a);
    }
    out.mass = 0.5 * l2;
    out.grad2 = grad2(u);
    out.lp1 = lp;
    out.sup = sup;
    return out;
}

double inner_mass_fraction(const RadialFunction& u, double radius) {
    auto w = u.grid()->weights();
    auto r = u.grid()->nodes();
    double inner = 0.0, total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double m = w[i] * u[i] * u[i];
        total += m;
        if (r[i] < radius) inner += m;
    }
    return total > 0 ? inner / total : 0.0;
}

double tail_mass_fraction(const RadialFunction& u) {
    const double total = mass(u);
    if (total == 0.0) return 0.0;
    return 1.0 - inner_mass_fraction(u, 0.9 * u.grid()->rmax());
}

namespace {

GridPtr scaled_grid(const RadialGrid& g, double factor) {
    return build_grid(g.params(), g.rmax() * factor, g.n(), g.stretch());
}

RadialFunction amplitude_scaled(const RadialFunction& u, double amp, double length) {
    auto target = scaled_grid(*u.grid(), length);
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x *= amp;
    return RadialFunction(std::move(target), std::move(v));
}

RadialFunction amplitude_scaled(const RadialFunction& u, double amp, double length,
                                const GridPtr& target) {
    if (!(target->params() == u.grid()->params()))
        throw std::invalid_argument("rescale: target grid has a different dimension");
    auto r = target->nodes();
    std::vector<double> src(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) src[i] = r[i] / length;
    auto v = u.interpolate(src);
    for (double& x : v) x *= amp;
    return RadialFunction(target, std::move(v));
}

void check_mu(double mu) {
    if (!(mu > 0) || !std::isfinite(mu))
        throw std::invalid_argument("rescale_mu: mu must be positive");
}

void check_dilation(const RadialFunction& u, double t) {
    if (u.grid()->params().N() != 2)
        throw std::invalid_argument("dilate_mass_preserving: only defined for N = 2");
    if (!(t > 0) || !std::isfinite(t))
        throw std::invalid_argument("dilate_mass_preserving: t must be positive");
}

}  // namespace

RadialFunction rescale_mu(const RadialFunction& u, double mu) {
    check_mu(mu);
    const int N = u.grid()->params().N();
    return amplitude_scaled(u, std::pow(mu, 0.25 * N), 1.0 / std::sqrt(mu));
}

RadialFunction rescale_mu(const RadialFunction& u, double mu, const GridPtr& target) {
    check_mu(mu);
    const int N = u.grid()->params().N();
    return amplitude_scaled(u, std::pow(mu, 0.25 * N), 1.0 / std::sqrt(mu), target);
}

RadialFunction dilate_mass_preserving(const RadialFunction& u, double t) {
    check_dilation(u, t);
    return amplitude_scaled(u, std::sqrt(t), 1.0 / std::sqrt(t));
}

RadialFunction dilate_mass_preserving(const RadialFunction& u, double t, const GridPtr& target) {
    check_dilation(u, t);
    return amplitude_scaled(u, std::sqrt(t), 1.0 / std::sqrt(t), target);
}

RadialFunction with_mass(const RadialFunction& u, double m) {
    const double current = mass(u);
    if (!(current > 0)) throw std::invalid_argument("with_mass: zero function");
    const double c = std::sqrt(m / current);
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x *= c;
    return RadialFunction(u.grid(), std::move(v));
}

void write_csv(std::ostream& os, const RadialFunction& u) {
    os << "r,u\n" << std::setprecision(17);
    auto r = u.grid()->nodes();
    for (std::size_t i = 0; i < u.size(); ++i) os << r[i] << ',' << u[i] << '\n';
}

void write_csv(const std::string& path, const RadialFunction& u) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    write_csv(f, u);
}

}  // namespace nlslab
