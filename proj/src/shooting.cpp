#include "nlslab/shooting.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "nlslab/detail/radial_ode.hpp"
#include "nlslab/functionals.hpp"

namespace nlslab {

namespace detail {

namespace odeint = boost::numeric::odeint;

OdeResult integrate_radial(const OdeSpec& spec, std::span<const double> sample_rho, std::vector<double>* v,
                           std::vector<double>* dv) {
    const double N1 = spec.N - 1.0;
    const double f1 = spec.source(1.0);
    const double rho0 = 1e-4 / std::sqrt(std::max(1.0, std::abs(f1)));

    auto rhs = [&](const OdeState& x, OdeState& dxdt, double rho) {
        dxdt[0] = x[1];
        dxdt[1] = spec.source(x[0]) - N1 / rho * x[1];
    };

    OdeResult res;
    std::size_t next = 0;
    if (v) v->assign(sample_rho.size(), 0.0);
    if (dv) dv->assign(sample_rho.size(), 0.0);
    auto put = [&](double rho, const OdeState& x) {
        if (v) (*v)[next] = x[0];
        if (dv) (*dv)[next] = x[1];
        ++next;
        (void)rho;
    };
    // series near the origin
    auto series = [&](double rho) {
        return OdeState{1.0 + f1 * rho * rho / (2.0 * spec.N), f1 * rho / spec.N};
    };
    while (next < sample_rho.size() && sample_rho[next] <= rho0) put(sample_rho[next], series(sample_rho[next]));

    auto stepper = odeint::make_dense_output(spec.atol, spec.rtol, odeint::runge_kutta_dopri5<OdeState>());
    stepper.initialize(series(rho0), rho0, rho0);

    auto locate = [&](double a, double b, auto&& positive) {
        // positive(a) true, positive(b) false
        OdeState x;
        for (int it = 0; it < 80 && b - a > 1e-15 * b; ++it) {
            const double m = 0.5 * (a + b);
            stepper.calc_state(m, x);
            (positive(x) ? a : b) = m;
        }
        stepper.calc_state(b, x);
        return std::make_pair(b, x);
    };

    const std::size_t max_steps = 2000000;
    std::size_t steps = 0;
    try {
        while (true) {
            if (++steps > max_steps) {
                res.stop = OdeStop::Failure;
                res.diagnostic = "step budget exhausted";
                break;
            }
            const auto [t0, t1] = stepper.do_step(rhs);
            const OdeState x1 = stepper.current_state();
            if (!(t1 > t0) || t1 - t0 < 1e-14 * t1) {
                res.stop = OdeStop::Failure;
                res.diagnostic = "step size underflow";
                res.rho_event = t1;
                res.state = x1;
                break;
            }
            // earliest event inside (t0, t1]
            std::optional<std::pair<double, OdeState>> ev;
            OdeStop kind = OdeStop::Horizon;
            if (!std::isfinite(x1[0]) || !std::isfinite(x1[1])) {
                ev = std::make_pair(t1, x1);
                kind = OdeStop::Overflow;
            } else {
                if (x1[0] < 0) {
                    ev = locate(t0, t1, [](const OdeState& x) { return x[0] >= 0; });
                    kind = OdeStop::Crossing;
                }
                if (spec.stop_on_turning && x1[1] > 0) {
                    auto tp = locate(t0, t1, [](const OdeState& x) { return !(x[1] > 0 && x[0] > 0); });
                    if (tp.second[0] > 0 && (!ev || tp.first < ev->first)) {
                        ev = tp;
                        kind = OdeStop::Turning;
                    }
                }
                if (!ev && std::abs(x1[0]) > spec.blow) {
                    ev = std::make_pair(t1, x1);
                    kind = OdeStop::Overflow;
                }
            }
            const double upto = ev ? ev->first : std::min(t1, spec.rho_max);
            OdeState xs;
            while (next < sample_rho.size() && sample_rho[next] <= upto) {
                stepper.calc_state(sample_rho[next], xs);
                put(sample_rho[next], xs);
            }
            if (ev) {
                res.stop = kind;
                res.rho_event = ev->first;
                res.state = ev->second;
                break;
            }
            if (spec.decayed && spec.decayed(t1, x1)) {
                res.stop = OdeStop::Decay;
                res.rho_event = t1;
                res.state = x1;
                break;
            }
            if (t1 >= spec.rho_max) {
                stepper.calc_state(spec.rho_max, xs);
                res.stop = OdeStop::Horizon;
                res.rho_event = spec.rho_max;
                res.state = xs;
                break;
            }
        }
    } catch (const std::exception& e) {
        res.stop = OdeStop::Failure;
        res.diagnostic = e.what();
    }
    res.sampled = next;
    return res;
}

}  // namespace detail

std::string to_string(ShotClass c) {
    switch (c) {
        case ShotClass::CrossesZero: return "CrossesZero";
        case ShotClass::Decays: return "Decays";
        case ShotClass::Blows: return "Blows";
        case ShotClass::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

namespace {

using detail::OdeSpec;
using detail::OdeState;
using detail::OdeStop;

/// v'' + (N-1)/rho v' = v - g(s0 v)/(mu s0), rho = sqrt(mu) r, v = u/s0.
OdeSpec confined_spec(const Nonlinearity& nl, double mu, double s0, const IntegratorSettings& st) {
    OdeSpec spec;
    spec.N = nl.params().N();
    const double scale = 1.0 / (mu * s0);
    spec.source = [&nl, s0, scale](double v) { return v - nl.g(s0 * v) * scale; };
    spec.rho_max = st.horizon;
    spec.rtol = st.rtol;
    spec.atol = st.atol;
    spec.blow = st.blow;
    spec.stop_on_turning = true;
    const double level = st.decay_level;
    spec.decayed = [level](double, const OdeState& x) {
        return x[0] > 0 && x[0] < level && std::abs(x[1] / x[0] + 1.0) < 0.2;
    };
    return spec;
}

ShotOutcome classify(const detail::OdeResult& r, double mu, double s0) {
    ShotOutcome out;
    out.s0 = s0;
    const double len = 1.0 / std::sqrt(mu);
    out.r_event = r.rho_event * len;
    out.r_end = out.r_event;
    out.u_end = r.state[0] * s0;
    out.du_end = r.state[1] * s0 / len;
    out.diagnostic = r.diagnostic;
    switch (r.stop) {
        case OdeStop::Crossing: out.classification = ShotClass::CrossesZero; break;
        case OdeStop::Decay: out.classification = ShotClass::Decays; break;
        case OdeStop::Turning:
        case OdeStop::Overflow: out.classification = ShotClass::Blows; break;
        case OdeStop::Failure:
            out.classification = ShotClass::Blows;
            if (out.diagnostic.empty()) out.diagnostic = "integration failure";
            break;
        case OdeStop::Horizon:
            out.classification = (r.state[0] > 0 && r.state[0] < 1e-3) ? ShotClass::Decays : ShotClass::Blows;
            break;
    }
    return out;
}

}  // namespace

ShotOutcome shoot(const Nonlinearity& nl, double mu, double s0, const IntegratorSettings& settings) {
    if (!(mu > 0) || !std::isfinite(mu)) throw std::invalid_argument("shoot: mu must be positive");
    if (!(s0 > 0) || !std::isfinite(s0)) throw std::invalid_argument("shoot: s0 must be positive");
    const OdeSpec spec = confined_spec(nl, mu, s0, settings);
    const double f1 = spec.source(1.0);
    const auto r = detail::integrate_radial(spec);
    ShotOutcome out = classify(r, mu, s0);
    if (std::abs(f1) <= 1e-12) {
        out.degenerate_start = true;
        out.diagnostic = "degenerate start: mu s0 = g(s0) (constant solution)";
    }
    return out;
}

namespace {

struct Candidate {
    RadialFunction u;
    double s0;
    double action;
    double poho, nehari;
};

/// Profile from a bisected bracket [s_a, s_b] whose shots disagree in class.
std::optional<Candidate> build_profile(const Nonlinearity& nl, double mu, double s_a, double s_b,
                                       const GroundStateOptions& opts, const GridPtr& grid,
                                       const IntegratorSettings& st) {
    const double sq = std::sqrt(mu);
    auto r = grid->nodes();
    std::vector<double> rho(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) rho[i] = r[i] * sq;

    std::vector<double> va, vb;
    const auto ra = detail::integrate_radial(confined_spec(nl, mu, s_a, st), rho, &va);
    const auto rb = detail::integrate_radial(confined_spec(nl, mu, s_b, st), rho, &vb);
    const std::size_t k = std::min(ra.sampled, rb.sampled);
    if (k < 8) return std::nullopt;

    const double s_mid = 0.5 * (s_a + s_b);
    std::vector<double> u(r.size(), 0.0);
    std::size_t graft = k;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = va[i] * s_a, b = vb[i] * s_b;
        const double m = 0.5 * (a + b);
        if (rho[i] > 1.0 && (std::abs(a - b) > 1e-4 * std::abs(m) || m < 1e-7 * s_mid)) {
            graft = i;
            break;
        }
        u[i] = m;
    }
    if (graft < 2) return std::nullopt;
    // linear tail c rho^{-nu} K_nu(rho)
    const double nu = 0.5 * (nl.params().N() - 2.0);
    const std::size_t j = graft - 1;
    auto tail = [nu](double x) { return std::pow(x, -nu) * std::cyl_bessel_k(nu, x); };
    const double c = u[j] / tail(rho[j]);
    for (std::size_t i = graft; i < r.size(); ++i) u[i] = c * tail(rho[i]);
    (void)opts;

    for (double x : u)
        if (!(x > 0) || !std::isfinite(x)) return std::nullopt;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] > u[i - 1]) return std::nullopt;

    RadialFunction prof(grid, std::move(u));
    const auto f = evaluate(nl, prof, std::log(mu), 1.0);
    return Candidate{prof, s_mid, f.action_psi, f.pohozaev_res, f.nehari_res};
}

std::optional<Candidate> solve_bracket(const Nonlinearity& nl, double mu, double lo, double hi, ShotClass c_lo,
                                       const GroundStateOptions& opts, const GridPtr& grid,
                                       const IntegratorSettings& st) {
    for (int it = 0; it < 200 && (hi - lo) > opts.s0_tol * hi; ++it) {
        const double mid = std::sqrt(lo * hi);
        const ShotClass c = shoot(nl, mu, mid, st).classification;
        if (c == ShotClass::Decays) {
            lo = hi = mid;
            break;
        }
        (c == c_lo ? lo : hi) = mid;
    }
    return build_profile(nl, mu, lo, hi, opts, grid, st);
}

std::vector<Candidate> scan_branches(const Nonlinearity& nl, double mu, const GroundStateOptions& opts,
                                     const GridPtr& grid, const IntegratorSettings& st, double lo_f, double hi_f) {
    const double unit = std::pow(mu, 0.25 * nl.params().N());
    const int count = std::max(2, static_cast<int>(std::ceil(std::log10(hi_f / lo_f) * opts.per_decade)) + 1);
    const auto s = log_space(lo_f * unit, hi_f * unit, static_cast<std::size_t>(count));
    std::vector<ShotClass> cls(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) cls[i] = shoot(nl, mu, s[i], st).classification;

    std::vector<Candidate> out;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const ShotClass a = cls[i], b = cls[i + 1];
        const bool trans = (a == ShotClass::Blows && b == ShotClass::CrossesZero) ||
                           (a == ShotClass::CrossesZero && b == ShotClass::Blows);
        if (trans) {
            if (auto c = solve_bracket(nl, mu, s[i], s[i + 1], a, opts, grid, st)) out.push_back(std::move(*c));
        } else if (a == ShotClass::Decays) {
            if (auto c = build_profile(nl, mu, s[i], s[i], opts, grid, st)) out.push_back(std::move(*c));
        }
    }
    return out;
}

}  // namespace

GroundState find_ground_state(const Nonlinearity& nl, double mu, const GroundStateOptions& opts) {
    if (!(mu > 0) || !std::isfinite(mu)) throw std::invalid_argument("find_ground_state: mu must be positive");
    const GridPtr grid = build_grid(nl.params(), opts.rmax_scale / std::sqrt(mu), opts.nodes, opts.stretch);

    IntegratorSettings st = opts.integrator;
    std::string last_problem;
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto cands = scan_branches(nl, mu, opts, grid, st, opts.scan_lo, opts.scan_hi);
        if (cands.empty()) cands = scan_branches(nl, mu, opts, grid, st, 1e-6, 1e8);
        if (cands.empty()) {
            std::ostringstream os;
            os << "find_ground_state: no Blows/CrossesZero bracket for mu = " << mu;
            throw NoSolution(os.str());
        }
        std::vector<Candidate> ok;
        for (auto& c : cands) {
            if (c.action > 0 && std::abs(c.poho) <= opts.residual_tol && std::abs(c.nehari) <= opts.residual_tol)
                ok.push_back(std::move(c));
            else {
                std::ostringstream os;
                os << "branch s0 = " << c.s0 << ": action " << c.action << ", pohozaev " << c.poho << ", nehari "
                   << c.nehari;
                last_problem = os.str();
            }
        }
        if (ok.empty()) {
            st.rtol /= 10.0;
            st.atol /= 10.0;
            continue;
        }
        std::sort(ok.begin(), ok.end(), [](const Candidate& a, const Candidate& b) { return a.action < b.action; });
        const Candidate& best = ok.front();
        std::vector<double> actions;
        for (const auto& c : ok) actions.push_back(c.action);
        return GroundState{.mu = mu,
                           .u = best.u,
                           .action = best.action,
                           .mass = mass(best.u),
                           .pohozaev_res = best.poho,
                           .nehari_res = best.nehari,
                           .s0 = best.s0,
                           .branch_actions = std::move(actions),
                           .branch_ambiguity = ok.size() > 1 && std::abs(ok.back().action - best.action) >
                                                                    1e-6 * std::abs(best.action)};
    }
    throw ConvergenceFailure("find_ground_state: residuals above tolerance (" + last_problem + ")");
}

M1Estimate compute_m1_detailed(const ProblemParams& params, std::size_t n) {
    const Nonlinearity power = make_power(params);
    GroundStateOptions o;
    o.nodes = n;
    const double coarse = find_ground_state(power, 1.0, o).mass;
    o.nodes = 2 * n;
    const double fine = find_ground_state(power, 1.0, o).mass;
    return M1Estimate{fine + (fine - coarse) / 15.0, coarse, fine, n};
}

double compute_m1(const ProblemParams& params) {
    static std::mutex mtx;
    static std::map<int, double> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        if (auto it = cache.find(params.N()); it != cache.end()) return it->second;
    }
    const double m1 = compute_m1_detailed(params).m1;
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(params.N(), m1);
    return m1;
}

double b_of_lambda(const Nonlinearity& nl, double lambda, double m, const GroundStateOptions& opts) {
    const double mu = std::exp(lambda);
    return find_ground_state(nl, mu, opts).action - mu * m;
}

}  // namespace nlslab
