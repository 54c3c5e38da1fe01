#include "nlslab/zero_mass.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "nlslab/detail/radial_ode.hpp"
#include "nlslab/functionals.hpp"

namespace nlslab {

std::string to_string(G2Verdict v) {
    switch (v) {
        case G2Verdict::NoSolutionFound: return "NoSolutionFound";
        case G2Verdict::CandidateFound: return "CandidateFound";
        case G2Verdict::Unreliable: return "Unreliable";
    }
    return "Unreliable";
}

namespace {

using detail::OdeSpec;
using detail::OdeState;
using detail::OdeStop;

/// Length unit 1/sqrt(c) with c = |g(s0)|/s0; v = u/s0, rho = sqrt(c) r.
double length_scale(const Nonlinearity& nl, double s0) {
    const double c = std::abs(nl.g(s0)) / s0;
    return (c > 0 && std::isfinite(c)) ? c : 1.0;
}

OdeSpec zero_mass_spec(const Nonlinearity& nl, double s0, const ZeroMassOptions& opts) {
    OdeSpec spec;
    const int N = nl.params().N();
    spec.N = N;
    const double scale = 1.0 / (s0 * length_scale(nl, s0));
    spec.source = [&nl, s0, scale](double v) { return -nl.g(s0 * v) * scale; };
    spec.rho_max = opts.horizon;
    spec.rtol = opts.rtol;
    spec.atol = opts.atol;
    spec.blow = opts.blow;
    // a positive minimum means the profile turns back up: not a decaying solution
    spec.stop_on_turning = true;
    if (N >= 3) {
        // harmonic tail A rho^{2-N} with a negligible source
        auto src = spec.source;
        spec.decayed = [N, src](double rho, const OdeState& x) {
            if (!(x[0] > 0 && x[0] < 1e-2)) return false;
            if (std::abs(rho * x[1] / x[0] + (N - 2.0)) > 0.02) return false;
            return std::abs(rho * rho * src(x[0]) / x[0]) < 1e-3;
        };
    }
    return spec;
}

ShotOutcome classify(const detail::OdeResult& r, int N, double c, double s0, const ZeroMassOptions& opts) {
    ShotOutcome out;
    out.s0 = s0;
    const double len = 1.0 / std::sqrt(c);
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
            out.classification = ShotClass::Inconclusive;
            if (out.diagnostic.empty()) out.diagnostic = "integration failure";
            break;
        case OdeStop::Horizon: {
            const bool small = r.state[0] > 0 && r.state[0] < opts.decay_level;
            const bool flat = std::abs(r.rho_event * r.state[1]) < opts.decay_level;
            if (N == 2 && small && flat) {
                out.classification = ShotClass::Decays;
            } else {
                out.classification = ShotClass::Inconclusive;
                out.diagnostic = "positive tail at the horizon";
            }
            break;
        }
    }
    return out;
}

}  // namespace

ShotOutcome zero_mass_shoot(const Nonlinearity& nl, double q, double s0, const ZeroMassOptions& opts) {
    if (!(s0 > 0) || !std::isfinite(s0)) throw std::invalid_argument("zero_mass_shoot: s0 must be positive");
    if (!(q > 0)) throw std::invalid_argument("zero_mass_shoot: q must be positive");
    const double c = length_scale(nl, s0);
    const auto r = detail::integrate_radial(zero_mass_spec(nl, s0, opts));
    ShotOutcome out = classify(r, nl.params().N(), c, s0, opts);
    if (nl.g(s0) == 0.0) {
        // u = s0 is a constant solution, not in F_q
        out.degenerate_start = true;
        out.classification = ShotClass::Blows;
        out.diagnostic = "degenerate start: g(s0) = 0 (constant solution)";
    }
    return out;
}

DecayCheck decay_check(const RadialFunction& u, double q) {
    if (!(q > 0)) throw std::invalid_argument("decay_check: q must be positive");
    const RadialGrid& g = *u.grid();
    const int N = g.params().N();
    DecayCheck dc;
    dc.C_theory = std::pow((q + 2.0) / (2.0 * g.params().sigmaN()), 2.0 / (q + 2.0));

    const std::size_t n = g.n();
    auto r = g.nodes();
    auto w = g.weights();
    auto kw = g.kinetic_weights();
    std::vector<double> du(n);
    g.staggered_derivative(u.values(), du);

    // tail sums: Iq[i] over nodes j >= i, Ig[i] over midpoints beyond r_i
    std::vector<double> Iq(n + 2, 0.0), Ig(n + 2, 0.0);
    for (std::size_t i = n + 1; i-- > 0;) {
        Iq[i] = Iq[i + 1] + w[i] * std::pow(std::abs(u[i]), q);
        Ig[i] = Ig[i + 1] + (i < n ? kw[i] * du[i] * du[i] : 0.0);
    }
    const double Iq0 = Iq[0], Ig0 = Ig[0];
    const double e_r = 2.0 * (N - 1.0) / (q + 2.0);
    const double rmax = g.rmax();
    double c_half = 0.0, c_quarter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (r[i] > 0.5 * rmax) break;
        // negligible tails carry no information (compact support, underflow)
        if (Iq[i] <= 1e-14 * Iq0 || Ig[i] <= 1e-14 * Ig0) continue;
        const double ratio = std::abs(u[i]) * std::pow(r[i], e_r) / std::pow(Iq[i] * Ig[i], 1.0 / (q + 2.0));
        c_half = std::max(c_half, ratio);
        if (r[i] <= 0.25 * rmax) c_quarter = std::max(c_quarter, ratio);
    }
    dc.C_est = c_half;
    dc.C_half_window = c_quarter;
    dc.holds = std::isfinite(c_half) && c_half <= 1.1 * c_quarter + 1e-300;
    if (c_half == 0.0) dc.holds = !(Iq0 > 0 && !(Ig0 > 0));  // u = 0 passes, a nonzero constant does not
    return dc;
}

namespace {

/// Candidate profile from the bracket [s_a, s_b] (equal for a direct Decays shot).
std::optional<ZeroMassCandidate> build_candidate(const Nonlinearity& nl, double q, double s_a, double s_b,
                                                 const ZeroMassOptions& opts) {
    const ProblemParams& P = nl.params();
    const int N = P.N();
    const double ca = length_scale(nl, s_a), cb = length_scale(nl, s_b);
    const OdeSpec spa = zero_mass_spec(nl, s_a, opts), spb = zero_mass_spec(nl, s_b, opts);
    const auto ra = detail::integrate_radial(spa), rb = detail::integrate_radial(spb);
    const double rend = std::min(ra.rho_event / std::sqrt(ca), rb.rho_event / std::sqrt(cb));
    if (!(rend > 0) || !std::isfinite(rend)) return std::nullopt;

    // core resolved to about a thousandth of the length unit
    const std::size_t n = opts.nodes;
    const double core = 1e-3 / std::sqrt(std::max(ca, cb));
    const double stretch = std::max(kDefaultStretch, (rend / static_cast<double>(n)) / core);
    const GridPtr grid = build_grid(P, rend, n, stretch);
    auto r = grid->nodes();
    std::vector<double> rho_a(r.size()), rho_b(r.size()), va, vb;
    for (std::size_t i = 0; i < r.size(); ++i) rho_a[i] = r[i] * std::sqrt(ca), rho_b[i] = r[i] * std::sqrt(cb);
    const auto sa = detail::integrate_radial(spa, rho_a, &va);
    const auto sb = detail::integrate_radial(spb, rho_b, &vb);
    const std::size_t k = std::min(sa.sampled, sb.sampled);
    if (k < 8) return std::nullopt;

    const double s_mid = 0.5 * (s_a + s_b);
    std::vector<double> u(r.size(), 0.0);
    std::size_t graft = k;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = va[i] * s_a, b = vb[i] * s_b, m = 0.5 * (a + b);
        if (i > 0 && (std::abs(a - b) > 1e-4 * std::abs(m) || m < 1e-9 * s_mid)) {
            graft = i;
            break;
        }
        u[i] = m;
    }
    if (graft < 4) return std::nullopt;

    ZeroMassCandidate cand;
    cand.height = s_mid;
    const std::size_t j = graft - 1;
    // shots that part while still high settle near a positive zero of g instead of decaying
    const bool decayed = u[j] <= 1e-2 * s_mid;
    double tail_grad = 0.0, tail_G = 0.0;
    if (N >= 3) {
        // harmonic tail A r^{2-N} beyond the graft and beyond Rmax
        const double A = u[j] * std::pow(r[j], N - 2.0);
        for (std::size_t i = graft; i < r.size(); ++i) u[i] = A * std::pow(r[i], 2.0 - N);
        const double R = grid->rmax();
        tail_grad = P.sigmaN() * A * A * (N - 2.0) * std::pow(R, 2.0 - N);
        boost::math::quadrature::exp_sinh<double> es;
        tail_G = P.sigmaN() * es.integrate([&](double x) {
            const double rr = R + x;
            return nl.G(A * std::pow(rr, 2.0 - N)) * std::pow(rr, N - 1.0);
        });
        cand.in_Fq = (N - 2.0) * (q + 1.0) > N;
        if (!cand.in_Fq) cand.note = "harmonic tail not in L^{q+1}";
    } else {
        // no harmonic decay in the plane: the profile stops at the divergence point
        for (std::size_t i = graft; i < r.size(); ++i) u[i] = 0.0;
    }
    for (double x : u)
        if (!std::isfinite(x)) return std::nullopt;

    cand.profile = RadialFunction(grid, std::move(u));
    try {
        const auto pot = potential_integrals(nl, *cand.profile);
        cand.grad2 = grad2(*cand.profile) + tail_grad;
        const double intG = pot.G + tail_G;
        cand.Z = 0.5 * cand.grad2 - intG;
        cand.pohozaev_res = std::abs(N * cand.Z - cand.grad2) / (cand.grad2 + 1e-300);
    } catch (const NonFiniteValue& e) {
        cand.note = e.what();
        return cand;
    }
    if (N == 2) {
        const DecayCheck dc = decay_check(*cand.profile, q);
        cand.in_Fq = dc.holds;
        if (!dc.holds) cand.note = "pointwise F_q decay bound unstable";
    }
    const bool poho = cand.pohozaev_res <= opts.pohozaev_tol;
    const bool nonneg = cand.Z >= -1e-4 * cand.grad2;
    cand.accepted = poho && nonneg && cand.in_Fq && decayed;
    if (!decayed) cand.note += (cand.note.empty() ? "" : "; ") + std::string("no decay before the shots part");
    if (!poho) cand.note += (cand.note.empty() ? "" : "; ") + std::string("Pohozaev residual above tolerance");
    if (!nonneg) cand.note += (cand.note.empty() ? "" : "; ") + std::string("Z_G negative");
    return cand;
}

bool transition(ShotClass a, ShotClass b) {
    return (a == ShotClass::Blows && b == ShotClass::CrossesZero) ||
           (a == ShotClass::CrossesZero && b == ShotClass::Blows);
}

}  // namespace

ZeroMassScan g2_scan(const Nonlinearity& nl, double q, double beta_cap, const std::vector<double>& heights,
                     const ZeroMassOptions& opts) {
    if (heights.size() < 2) throw std::invalid_argument("g2_scan: need at least two heights");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (!(heights[i] > 0) || !std::isfinite(heights[i])) throw std::invalid_argument("g2_scan: heights must be positive");
        if (i > 0 && !(heights[i] > heights[i - 1])) throw std::invalid_argument("g2_scan: heights must increase");
    }
    if (std::log10(heights.back() / heights.front()) < 6.0 - 1e-9)
        throw std::invalid_argument("g2_scan: heights must span at least 6 decades");
    if (std::isnan(beta_cap)) throw std::invalid_argument("g2_scan: beta_cap is NaN");

    ZeroMassScan scan;
    scan.q = q;
    scan.beta_cap = beta_cap;
    scan.heights = heights;
    scan.outcomes.resize(heights.size());

    // independent shots: split the heights over worker threads
    const unsigned hw = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, heights.size());
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < heights.size(); i += workers)
                scan.outcomes[i] = zero_mass_shoot(nl, q, heights[i], opts);
        }));
    for (auto& j : jobs) j.get();

    std::size_t inconclusive = 0;
    for (const auto& o : scan.outcomes)
        if (o.classification == ShotClass::Inconclusive) ++inconclusive;
    scan.inconclusive_fraction = static_cast<double>(inconclusive) / static_cast<double>(heights.size());

    for (std::size_t i = 0; i < heights.size(); ++i) {
        const ShotClass a = scan.outcomes[i].classification;
        if (a == ShotClass::Decays) {
            if (auto c = build_candidate(nl, q, heights[i], heights[i], opts)) scan.candidates.push_back(std::move(*c));
        }
        if (i + 1 < heights.size() && transition(a, scan.outcomes[i + 1].classification)) {
            double lo = heights[i], hi = heights[i + 1];
            bool direct = false;
            for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = std::sqrt(lo * hi);
                const ShotClass c = zero_mass_shoot(nl, q, mid, opts).classification;
                if (c == ShotClass::Decays) {
                    lo = hi = mid;
                    direct = true;
                    break;
                }
                if (c == ShotClass::Inconclusive) break;
                (c == a ? lo : hi) = mid;
            }
            (void)direct;
            if (auto c = build_candidate(nl, q, lo, hi, opts)) scan.candidates.push_back(std::move(*c));
        }
    }

    for (const auto& c : scan.candidates) {
        if (!c.accepted || !(c.Z <= beta_cap)) continue;
        if (!scan.candidate_level || c.Z < *scan.candidate_level) scan.candidate_level = c.Z;
    }
    if (scan.candidate_level) {
        scan.verdict = G2Verdict::CandidateFound;
        scan.label = "numerical candidate";
    } else if (scan.inconclusive_fraction > opts.inconclusive_limit) {
        scan.verdict = G2Verdict::Unreliable;
        scan.label = "unreliable: too many inconclusive shots";
    }
    return scan;
}

namespace {

std::vector<double> densify(const std::vector<double>& h) {
    std::vector<double> out;
    for (std::size_t i = 0; i < h.size(); ++i) {
        out.push_back(h[i]);
        if (i + 1 < h.size()) out.push_back(std::sqrt(h[i] * h[i + 1]));
    }
    return out;
}

}  // namespace

StabilityTable stability_experiment(const Nonlinearity& nl_base, const PerturbationXi& xi,
                                    const std::vector<double>& eps_list, double beta_cap,
                                    const std::vector<double>& heights, double q, const ZeroMassOptions& opts) {
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0)) throw std::invalid_argument("stability_experiment: eps must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("stability_experiment: eps_list must be strictly decreasing");
    }
    StabilityTable t;
    t.baseline_ok = g2_scan(nl_base, q, beta_cap, heights, opts).verdict == G2Verdict::NoSolutionFound;
    const double norm = xi_norm(xi, nl_base.params());
    for (double eps : eps_list) {
        const auto s = g2_scan(perturb(nl_base, xi, eps), q, beta_cap, heights, opts);
        t.rows.push_back(StabilityRow{.eps = eps,
                                      .xi_norm = eps * norm,
                                      .verdict = s.verdict,
                                      .inconclusive_fraction = s.inconclusive_fraction,
                                      .candidates = s.candidates.size(),
                                      .dense_verdict = std::nullopt});
    }
    auto ok = [](G2Verdict v) { return v == G2Verdict::NoSolutionFound; };
    for (const auto& row : t.rows)
        if (ok(row.verdict) && (!t.largest_ok || row.eps > *t.largest_ok)) t.largest_ok = row.eps;

    // eps decreasing: a failure must not be followed by a larger eps that passes,
    // i.e. passing rows form a suffix of the list
    std::size_t first_pass = t.rows.size();
    for (std::size_t i = t.rows.size(); i-- > 0;) {
        if (!ok(t.rows[i].verdict)) break;
        first_pass = i;
    }
    if (first_pass < t.rows.size()) t.threshold = t.rows[first_pass].eps;
    for (std::size_t i = 0; i < first_pass; ++i) {
        if (!ok(t.rows[i].verdict)) continue;
        t.monotone = false;  // passes above a failure: rerun densely as a noise check
        for (std::size_t k : {i, first_pass == 0 ? i : first_pass - 1}) {
            auto& row = t.rows[k];
            if (row.dense_verdict) continue;
            row.dense_verdict = g2_scan(perturb(nl_base, xi, row.eps), q, beta_cap, densify(heights), opts).verdict;
        }
    }
    return t;
}

}  // namespace nlslab
