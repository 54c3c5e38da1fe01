#pragma once

/// @file radial.hpp
/// @brief Radial discretization of R^N: graded grids, r^{N-1}-weighted
/// quadrature, discrete norms, interpolation and the two scaling maps
/// (L^2-isometric frequency rescaling and the N=2 mass-preserving dilation).

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nlslab {

/// Dimension data of the mass-critical problem. The exponent p = 1 + 4/N is
/// kept as the exact fraction (N+4)/N.
class ProblemParams {
  public:
    explicit ProblemParams(int N);

    int N() const { return N_; }
    int p_num() const { return N_ + 4; }
    int p_den() const { return N_; }
    double p() const { return static_cast<double>(N_ + 4) / N_; }
    /// Surface measure of the unit sphere S^{N-1}.
    double sigmaN() const { return sigma_; }
    /// Sobolev exponent 2N/(N-2); only meaningful for N >= 3.
    double two_star() const;

    bool operator==(const ProblemParams& o) const { return N_ == o.N_; }

  private:
    int N_;
    double sigma_;
};

/// Graded radial grid r_i = Rmax sinh(k xi_i)/sinh(k) on uniform xi_i = i/n.
/// Node weights are a fourth-order endpoint-corrected trapezoidal rule in xi,
/// folded with sigmaN r^{N-1} dr/dxi. The kinetic term lives on the n
/// midpoints and uses a staggered fourth-order difference.
class RadialGrid {
  public:
    const ProblemParams& params() const { return params_; }
    double rmax() const { return rmax_; }
    double stretch() const { return stretch_; }
    /// number of intervals; there are n()+1 nodes
    std::size_t n() const { return nodes_.size() - 1; }
    std::size_t size() const { return nodes_.size(); }
    double h() const { return h_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> midpoints() const { return mid_; }
    /// h sigmaN r_mid^{N-1} / r'(xi_mid); multiplies (du/dxi)^2 at midpoints
    std::span<const double> kinetic_weights() const { return kin_w_; }
    /// dr/dxi at the nodes
    std::span<const double> jacobian() const { return jac_; }

    /// du/dxi at midpoint j (between nodes j and j+1).
    void staggered_derivative(std::span<const double> u, std::span<double> out) const;
    /// Transpose of staggered_derivative: out_i = sum_j D_{j,i} v_j.
    void staggered_derivative_transpose(std::span<const double> v, std::span<double> out) const;

  private:
    friend std::shared_ptr<const RadialGrid> build_grid(const ProblemParams&, double, std::size_t,
                                                        double);
    RadialGrid(const ProblemParams& params) : params_(params) {}

    ProblemParams params_;
    double rmax_ = 0.0;
    double stretch_ = 1.0;
    double map_k_ = 0.0;
    double h_ = 0.0;
    std::vector<double> nodes_, weights_, jac_, mid_, kin_w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Default stretch: first spacing is a quarter of the uniform spacing.
inline constexpr double kDefaultStretch = 4.0;
inline constexpr std::size_t kDefaultNodes = 4096;

/// Builds a graded grid with n intervals. Requires Rmax > 0, even n >= 64 and
/// stretch >= 1, where stretch = (Rmax/n)/r_1 asymptotically.
GridPtr build_grid(const ProblemParams& params, double rmax, std::size_t n,
                   double stretch = kDefaultStretch);

/// Default grid for a confined problem at frequency mu: Rmax = 30/sqrt(mu).
GridPtr default_grid(const ProblemParams& params, double mu, std::size_t n = kDefaultNodes);

/// Nodal values of a radial function on a grid. Values beyond Rmax are 0.
class RadialFunction {
  public:
    RadialFunction(GridPtr grid, std::vector<double> values);
    /// Samples f(r) at the grid nodes.
    template <class F>
    static RadialFunction sample(GridPtr grid, F&& f) {
        std::vector<double> v(grid->size());
        auto r = grid->nodes();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(r[i]);
        return RadialFunction(std::move(grid), std::move(v));
    }

    const GridPtr& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Monotone cubic (PCHIP) interpolation; 0 outside [0, Rmax].
    std::vector<double> interpolate(std::span<const double> radii) const;

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// sum_i w_i f_i
double integrate(const RadialGrid& grid, std::span<const double> f);

struct Norms {
    double mass = 0.0;   ///< (1/2)||u||_2^2
    double grad2 = 0.0;  ///< ||grad u||_2^2
    double lp1 = 0.0;    ///< ||u||_{p+1}^{p+1}
    double sup = 0.0;    ///< ||u||_inf
};

Norms norms(const RadialFunction& u);
double mass(const RadialFunction& u);
double grad2(const RadialFunction& u);

/// Fraction of the L^2 mass located beyond 0.9 Rmax (truncation diagnostic).
double tail_mass_fraction(const RadialFunction& u);
/// Fraction of the L^2 mass located in r < radius.
double inner_mass_fraction(const RadialFunction& u, double radius);

/// mu^{N/4} u(mu^{1/2} r) on the grid scaled by mu^{-1/2} (exact, node to node).
RadialFunction rescale_mu(const RadialFunction& u, double mu);
/// mu^{N/4} u(mu^{1/2} r) interpolated onto `target`.
RadialFunction rescale_mu(const RadialFunction& u, double mu, const GridPtr& target);

/// t^{1/2} u(t^{1/2} r), N = 2 only, on the scaled grid (exact).
RadialFunction dilate_mass_preserving(const RadialFunction& u, double t);
/// Same, interpolated onto `target`.
RadialFunction dilate_mass_preserving(const RadialFunction& u, double t, const GridPtr& target);

/// Scales u by a constant so that (1/2)||u||_2^2 = m.
RadialFunction with_mass(const RadialFunction& u, double m);

/// CSV "r,u", 17 significant digits.
void write_csv(std::ostream& os, const RadialFunction& u);
void write_csv(const std::string& path, const RadialFunction& u);

}  // namespace nlslab
