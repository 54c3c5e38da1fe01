#include "nlslab/mass_flow.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "nlslab/functionals.hpp"
#include "nlslab/shooting.hpp"

namespace nlslab {

std::string to_string(FlowVerdict v) {
    switch (v) {
        case FlowVerdict::Converged: return "Converged";
        case FlowVerdict::Concentrating: return "Concentrating";
        case FlowVerdict::Vanishing: return "Vanishing";
        case FlowVerdict::MaxIter: return "MaxIter";
    }
    return "MaxIter";
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Discrete energy and its Euclidean gradient on a fixed grid.
class DiscreteEnergy {
  public:
    DiscreteEnergy(const Nonlinearity& nl, GridPtr grid) : nl_(nl), grid_(std::move(grid)) {
        du_.resize(grid_->n());
        tmp_.resize(grid_->size());
    }

    double value(const std::vector<double>& u) {
        grid_->staggered_derivative(u, du_);
        auto kw = grid_->kinetic_weights();
        auto w = grid_->weights();
        double kin = 0.0, pot = 0.0;
        for (std::size_t j = 0; j < du_.size(); ++j) kin += kw[j] * du_[j] * du_[j];
        for (std::size_t i = 0; i < u.size(); ++i) pot += w[i] * nl_.G(u[i]);
        return 0.5 * kin - pot;
    }

    /// Returns the energy and fills the gradient.
    double value_and_gradient(const std::vector<double>& u, std::vector<double>& grad) {
        grid_->staggered_derivative(u, du_);
        auto kw = grid_->kinetic_weights();
        auto w = grid_->weights();
        double kin = 0.0, pot = 0.0;
        for (std::size_t j = 0; j < du_.size(); ++j) {
            kin += kw[j] * du_[j] * du_[j];
            du_[j] *= kw[j];
        }
        grad.resize(u.size());
        grid_->staggered_derivative_transpose(du_, grad);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const auto v = nl_.eval(u[i]);
            pot += w[i] * v.G;
            grad[i] -= w[i] * v.g;
        }
        return 0.5 * kin - pot;
    }

  private:
    const Nonlinearity& nl_;
    GridPtr grid_;
    std::vector<double> du_, tmp_;
};

/// Tridiagonal H^1 metric: second-order stiffness plus shift * diag(w).
class Preconditioner {
  public:
    explicit Preconditioner(GridPtr grid) : grid_(std::move(grid)) {
        const std::size_t n = grid_->n();
        const double h2 = grid_->h() * grid_->h();
        auto kw = grid_->kinetic_weights();
        c_.resize(n);
        for (std::size_t j = 0; j < n; ++j) c_[j] = kw[j] / h2;
        diag_.resize(n + 1);
        cp_.resize(n + 1);
    }

    void set_shift(double sigma) {
        const std::size_t n = grid_->n();
        auto w = grid_->weights();
        for (std::size_t i = 0; i <= n; ++i) {
            double d = sigma * w[i];
            if (i > 0) d += c_[i - 1];
            if (i < n) d += c_[i];
            diag_[i] = d;
        }
        sigma_ = sigma;
    }
    double shift() const { return sigma_; }

    /// x = P^{-1} b (Thomas; off-diagonals are -c_j) on the nodes below Rmax;
    /// x_n = 0 keeps the Dirichlet node pinned.
    void solve(const std::vector<double>& b, std::vector<double>& x) {
        const std::size_t n = grid_->n();
        x.assign(n + 1, 0.0);
        cp_[0] = -c_[0] / diag_[0];
        x[0] = b[0] / diag_[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double lower = -c_[i - 1];
            const double denom = diag_[i] - lower * cp_[i - 1];
            cp_[i] = i + 1 < n ? -c_[i] / denom : 0.0;
            x[i] = (b[i] - lower * x[i - 1]) / denom;
        }
        for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp_[i] * x[i + 1];
    }

    /// y = P x on the same subspace
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        const std::size_t n = grid_->n();
        y.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double v = diag_[i] * x[i];
            if (i > 0) v -= c_[i - 1] * x[i - 1];
            if (i + 1 < n) v -= c_[i] * x[i + 1];
            y[i] = v;
        }
    }

  private:
    GridPtr grid_;
    std::vector<double> c_, diag_, cp_;
    double sigma_ = 1.0;
};

double half_l2(const std::vector<double>& u, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i] * u[i];
    return 0.5 * s;
}

void retract(std::vector<double>& u, std::span<const double> w, double m) {
    const double c = std::sqrt(m / half_l2(u, w));
    for (double& x : u) x *= c;
}

double sup_abs(const std::vector<double>& u) {
    double s = 0.0;
    for (double x : u) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

FlowReport minimize_d(const Nonlinearity& nl, double m, const RadialFunction& init, const FlowOptions& opts) {
    if (!(m > 0) || !std::isfinite(m)) throw std::invalid_argument("minimize_d: m must be positive");
    if (!(init.grid()->params() == nl.params()))
        throw std::invalid_argument("minimize_d: grid and nonlinearity dimensions differ");
    const GridPtr grid = init.grid();
    auto w = grid->weights();
    const double rmax = grid->rmax();

    FlowReport rep;
    rep.m = m;
    std::vector<double> u(init.values().begin(), init.values().end());
    // values beyond Rmax are zero: Dirichlet node at Rmax
    u.back() = 0.0;
    if (!(half_l2(u, w) > 0)) throw std::invalid_argument("minimize_d: zero initial function");
    retract(u, w, m);
    rep.initial_sup = sup_abs(u);

    DiscreteEnergy energy(nl, grid);
    Preconditioner P(grid);
    std::vector<double> g, Wu(u.size()), z1, z2, r(u.size()), d(u.size()), trial(u.size());
    std::vector<double> u_prev, r_prev, s_vec(u.size()), y_vec(u.size()), Ps;
    std::vector<double> energy_hist;

    double E = energy.value_and_gradient(u, g);
    double t = 1.0;
    double kappa = 0.0, gradnorm = 0.0;
    rep.verdict = FlowVerdict::MaxIter;

    auto mass_error = [&](const std::vector<double>& v) { return std::abs(half_l2(v, w) - m) / m; };

    int it = 0;
    for (;; ++it) {
        for (std::size_t i = 0; i < u.size(); ++i) Wu[i] = w[i] * u[i];
        const double uWu = dot(u, Wu);
        kappa = -dot(u, g) / uWu;
        P.set_shift(opts.adaptive_shift ? std::max(opts.shift, kappa) : opts.shift);
        P.solve(g, z1);
        P.solve(Wu, z2);
        const double eta = dot(Wu, z1) / dot(Wu, z2);
        for (std::size_t i = 0; i < u.size(); ++i) {
            r[i] = g[i] - eta * Wu[i];
            d[i] = -(z1[i] - eta * z2[i]);
        }
        const double gn2 = std::max(0.0, -dot(r, d));
        gradnorm = std::sqrt(gn2);
        const double sup = sup_abs(u);
        if (opts.record_trajectory) rep.trajectory.push_back({it, E, sup, kappa, gradnorm});
        energy_hist.push_back(E);

        // stopping tests
        if (gradnorm <= opts.grad_tol * (1.0 + std::abs(E))) {
            rep.verdict = kappa > 0 ? FlowVerdict::Converged : FlowVerdict::MaxIter;
            // kappa <= 0 admits no critical point on the whole space: only the
            // truncation at Rmax holds a spread-out state in place
            if (kappa <= 0 && sup <= rep.initial_sup / opts.concentration_factor) {
                rep.verdict = FlowVerdict::Vanishing;
                rep.diagnostic = "spread to the truncation radius (stationary with non-positive multiplier)";
            } else if (kappa <= 0) {
                rep.diagnostic = "stationary with non-positive multiplier";
            }
            break;
        }
        if (it >= opts.window) {
            const double dE = std::abs(E - energy_hist[energy_hist.size() - 1 - opts.window]);
            if (dE <= 1e-13 * (1.0 + std::abs(E)) && gradnorm <= 1e-5 * (1.0 + std::abs(E)) && kappa > 0) {
                rep.verdict = FlowVerdict::Converged;
                rep.diagnostic = "energy stalled at rounding level";
                break;
            }
            const bool flat = dE < 1e-3 * m;
            if (flat && sup >= opts.concentration_factor * rep.initial_sup) {
                const RadialFunction cur(grid, u);
                if (inner_mass_fraction(cur, rmax / 100.0) >= opts.inner_fraction) {
                    rep.verdict = FlowVerdict::Concentrating;
                    break;
                }
            }
            if (sup <= rep.initial_sup / opts.concentration_factor && std::abs(E) < 1e-3 * m) {
                rep.verdict = FlowVerdict::Vanishing;
                break;
            }
        }
        if (it >= opts.max_iter) break;

        // Barzilai–Borwein trial step in the P metric, then Armijo backtracking
        if (!u_prev.empty()) {
            for (std::size_t i = 0; i < u.size(); ++i) {
                s_vec[i] = u[i] - u_prev[i];
                y_vec[i] = r[i] - r_prev[i];
            }
            P.apply(s_vec, Ps);
            const double sy = dot(s_vec, y_vec);
            const double sPs = dot(s_vec, Ps);
            t = sy > 0 ? sPs / sy : 2.0 * t;
            t = std::clamp(t, 1e-10, 1e8);
        }
        bool accepted = false;
        double E_new = E;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + t * d[i];
            retract(trial, w, m);
            E_new = energy.value(trial);
            if (std::isfinite(E_new) && E_new <= E - opts.armijo * t * gn2) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (gradnorm <= 1e-6 * (1.0 + std::abs(E)) && kappa > 0) {
                rep.verdict = FlowVerdict::Converged;
                rep.diagnostic = "line search stalled at rounding level";
            } else {
                rep.diagnostic = "line search failed";
            }
            break;
        }
        if (E_new > E) rep.energy_monotone = false;
        u_prev = u;
        r_prev = r;
        u.swap(trial);
        rep.max_mass_error = std::max(rep.max_mass_error, mass_error(u));
        E = energy.value_and_gradient(u, g);
    }

    rep.iterations = it;
    rep.d_estimate = E;
    rep.multiplier = kappa;
    rep.final_gradnorm = gradnorm;
    rep.final_sup = sup_abs(u);
    {
        // Euler–Lagrange residual with the Rayleigh-quotient multiplier
        std::vector<double> res(u.size()), zr, zg, zw;
        for (std::size_t i = 0; i < u.size(); ++i) {
            Wu[i] = w[i] * u[i];
            res[i] = g[i] + kappa * Wu[i];
        }
        P.solve(res, zr);
        P.solve(g, zg);
        P.solve(Wu, zw);
        const double num = std::sqrt(std::max(0.0, dot(res, zr)));
        const double den = std::sqrt(std::max(0.0, dot(g, zg))) + std::abs(kappa) * std::sqrt(std::max(0.0, dot(Wu, zw)));
        rep.el_residual = den > 0 ? num / den : 0.0;
    }
    RadialFunction fin(grid, std::move(u));
    rep.inner_mass_fraction = inner_mass_fraction(fin, rmax / 100.0);
    rep.minimizer = std::move(fin);
    return rep;
}

std::vector<RadialFunction> standard_seeds(const ProblemParams& params, double m, const GridPtr& grid) {
    std::vector<RadialFunction> seeds;
    GroundStateOptions o;
    o.nodes = grid->n();
    o.rmax_scale = grid->rmax();
    o.stretch = grid->stretch();
    const GroundState w1 = find_ground_state(make_power(params), 1.0, o);
    seeds.push_back(with_mass(RadialFunction(grid, std::vector<double>(w1.u.values().begin(), w1.u.values().end())), m));
    seeds.push_back(with_mass(RadialFunction::sample(grid, [](double r) { return std::exp(-r * r / 8.0); }), m));
    seeds.push_back(with_mass(RadialFunction::sample(grid, [](double r) { return std::exp(-2.0 * r * r); }), m));
    return seeds;
}

BestFlow minimize_d_multistart(const Nonlinearity& nl, double m, const FlowOptions& opts, std::size_t nodes) {
    const GridPtr grid = default_grid(nl.params(), 1.0, nodes);
    BestFlow out;
    for (const auto& seed : standard_seeds(nl.params(), m, grid)) out.runs.push_back(minimize_d(nl, m, seed, opts));
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.runs.size(); ++i)
        if (out.runs[i].d_estimate < out.runs[best].d_estimate) best = i;
    out.best = out.runs[best];
    return out;
}

DComparison verify_d_equals_ubar(const Nonlinearity& nl, double m1, double lambda_lo, double lambda_hi,
                                 std::size_t samples, const FlowOptions& opts) {
    DComparison c;
    try {
        const BestFlow f = minimize_d_multistart(nl, m1, opts);
        c.d = f.best.d_estimate;
        c.verdict = f.best.verdict;
        c.multiplier = f.best.multiplier;
    } catch (const std::exception&) {
        c.d_defined = false;
    }
    c.scan = scan_b(nl, m1, lambda_lo, lambda_hi, samples);
    c.b_lower = c.scan.b_lower;
    c.b_defined = std::isfinite(c.b_lower);
    c.gap = (c.d_defined && c.b_defined) ? std::abs(c.d - c.b_lower) : std::numeric_limits<double>::quiet_NaN();
    return c;
}

LegendreResult legendre_check(const Nonlinearity& nl, double m, const std::vector<double>& mu_grid,
                              const FlowOptions& opts) {
    if (mu_grid.size() < 3) throw std::invalid_argument("legendre_check: need at least 3 frequencies");
    LegendreResult res;
    res.lhs = minimize_d_multistart(nl, m, opts).best.d_estimate;

    auto value = [&](double mu) { return find_ground_state(nl, mu).action - mu * m; };
    std::size_t arg = 0;
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        res.table.emplace_back(mu_grid[i], value(mu_grid[i]));
        if (res.table[i].second < res.table[arg].second) arg = i;
    }
    res.rhs = res.table[arg].second;
    res.argmin_mu = mu_grid[arg];
    if (arg > 0 && arg + 1 < mu_grid.size()) {
        auto f = [&](double lam) { return value(std::exp(lam)); };
        std::uintmax_t iters = 60;
        const auto r = boost::math::tools::brent_find_minima(f, std::log(mu_grid[arg - 1]), std::log(mu_grid[arg + 1]),
                                                             24, iters);
        if (r.second < res.rhs) {
            res.rhs = r.second;
            res.argmin_mu = std::exp(r.first);
        }
    } else {
        res.boundary_infimum = true;
    }
    const double m1 = compute_m1(nl.params());
    if (auto lim = b_limits(nl, m, m1).first; lim && *lim <= res.rhs) {
        res.rhs = *lim;
        res.argmin_mu = 0.0;
        res.boundary_infimum = true;
    }
    res.gap = std::abs(res.lhs - res.rhs);
    return res;
}

DilationImprovement n2_dilation_improve(const Nonlinearity& nl, const RadialFunction& u) {
    if (nl.params().N() != 2 || u.grid()->params().N() != 2)
        throw std::invalid_argument("n2_dilation_improve: only defined for N = 2");
    DilationImprovement out;
    out.energy_before = energy(nl, u);
    out.Q_before = q_functional(nl, u);
    if (out.Q_before > 0) {
        out.noop = true;
        out.energy_after = out.energy_before;
        out.Q_after = out.Q_before;
        return out;
    }
    auto Q = [&](double t) { return q_functional(nl, dilate_mass_preserving(u, t)); };
    // walk down from t = 1 to the first t with Q > 0, then bisect the sign change
    double hi = 1.0, lo = 0.0;
    bool found = false;
    for (int k = 1; k <= 2400; ++k) {
        const double t = std::pow(10.0, -k / 200.0);
        if (Q(t) > 0) {
            lo = t;
            found = true;
            break;
        }
        hi = t;
    }
    if (!found) throw NoSolution("n2_dilation_improve: Q(u_{0t}) stays non-positive down to t = 1e-12");
    for (int i = 0; i < 60 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (Q(mid) > 0 ? lo : hi) = mid;
    }
    out.t0 = lo;
    RadialFunction v = dilate_mass_preserving(u, lo);
    out.Q_after = q_functional(nl, v);
    out.energy_after = energy(nl, v);
    out.improved = std::move(v);
    return out;
}

}  // namespace nlslab
