#include "nlslab/minimax.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

namespace nlslab {

std::string to_string(CaseTag c) {
    switch (c) {
        case CaseTag::I: return "i";
        case CaseTag::II: return "ii";
        case CaseTag::III: return "iii";
        case CaseTag::IV: return "iv";
        case CaseTag::Undetermined: return "undetermined";
    }
    return "undetermined";
}

CaseTag classify_case(double b_lower, double b_tilde, double band) {
    const bool lower_neg = b_lower < -band;
    const bool lower_zero = std::abs(b_lower) <= band;
    const bool tilde_pos = b_tilde > band;
    const bool tilde_zero = std::abs(b_tilde) <= band;
    if (lower_neg && tilde_pos) return CaseTag::I;
    if (lower_zero && tilde_pos) return CaseTag::II;
    if (lower_neg && tilde_zero) return CaseTag::III;
    if (lower_zero && tilde_zero) return CaseTag::IV;
    return CaseTag::Undetermined;
}

std::pair<std::optional<double>, std::optional<double>> b_limits(const Nonlinearity& nl, double m, double m1) {
    // small amplitudes only see the power; b -> mu (m1 - m) -> 0
    const bool critical_mass = std::abs(m - m1) <= 1e-12 * m1;
    switch (nl.kind()) {
        case NonlinearityKind::Power:
            if (critical_mass) return {0.0, 0.0};
            return {0.0, std::nullopt};
        case NonlinearityKind::PerturbedPower: {
            const AProfile* a = nl.profile();
            const auto sup = a ? a->support() : std::nullopt;
            const bool compact = sup && sup->first > 0 && std::isfinite(sup->second);
            if (!compact) return {std::nullopt, std::nullopt};
            if (critical_mass) return {0.0, 0.0};
            return {0.0, std::nullopt};
        }
        case NonlinearityKind::RhoFamily:
            // large amplitudes see G_0 + alpha s^2/2: a(mu) -> (mu - alpha) m1
            if (critical_mass) return {0.0, -nl.alpha() * m1};
            return {0.0, std::nullopt};
        default: return {std::nullopt, std::nullopt};
    }
}

namespace {

LevelSample sample_at(const Nonlinearity& nl, double lambda, double m, const GroundStateOptions& gso) {
    LevelSample s;
    s.lambda = lambda;
    s.mu = std::exp(lambda);
    try {
        const GroundState gs = find_ground_state(nl, s.mu, gso);
        s.a = gs.action;
        s.b = gs.action - s.mu * m;
        s.action_residual = std::max(std::abs(gs.pohozaev_res), std::abs(gs.nehari_res));
        if (gs.branch_ambiguity) s.note = "multiple decaying branches; least action used";
    } catch (const std::exception& e) {
        s.defined = false;
        s.b = std::numeric_limits<double>::quiet_NaN();
        s.a = std::numeric_limits<double>::quiet_NaN();
        s.note = e.what();
    }
    return s;
}

}  // namespace

LevelScan scan_b(const Nonlinearity& nl, double m, double lambda_lo, double lambda_hi, std::size_t n_samples,
                 const ScanOptions& opts) {
    if (!(lambda_hi > lambda_lo)) throw std::invalid_argument("scan_b: empty lambda range");
    if (n_samples < 2) throw std::invalid_argument("scan_b: need at least 2 samples");
    if (!(m > 0)) throw std::invalid_argument("scan_b: m must be positive");
    LevelScan scan;
    scan.m = m;
    scan.m1 = compute_m1(nl.params());
    scan.zero_band = 1e-3 * scan.m1;

    const auto& gso = opts.ground_state;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double lam = lambda_lo + (lambda_hi - lambda_lo) * static_cast<double>(i) / (n_samples - 1);
        scan.samples.push_back(sample_at(nl, lam, m, gso));
    }

    // golden/Brent refinement of both extrema between the neighbouring samples
    auto refine = [&](bool minimum) {
        std::size_t best = scan.samples.size();
        for (std::size_t i = 0; i < scan.samples.size(); ++i) {
            const auto& s = scan.samples[i];
            if (!s.defined) continue;
            if (best == scan.samples.size() || (minimum ? s.b < scan.samples[best].b : s.b > scan.samples[best].b))
                best = i;
        }
        if (best == scan.samples.size()) return;
        if (best == 0 || best + 1 == scan.samples.size()) return;  // edge: nothing to bracket
        const double a = scan.samples[best - 1].lambda, c = scan.samples[best + 1].lambda;
        std::vector<LevelSample> extra;
        auto f = [&](double lam) {
            LevelSample s = sample_at(nl, lam, m, gso);
            s.refinement = true;
            extra.push_back(s);
            if (!s.defined) return std::numeric_limits<double>::infinity();
            return minimum ? s.b : -s.b;
        };
        const int bits = std::max(4, static_cast<int>(std::ceil(-std::log2(opts.lambda_tol / (c - a)))) + 1);
        std::uintmax_t iters = 60;
        boost::math::tools::brent_find_minima(f, a, c, std::min(bits, 26), iters);
        for (auto& s : extra) scan.samples.push_back(std::move(s));
    };
    refine(true);
    refine(false);
    std::sort(scan.samples.begin(), scan.samples.end(),
              [](const LevelSample& x, const LevelSample& y) { return x.lambda < y.lambda; });

    scan.b_lower = std::numeric_limits<double>::infinity();
    scan.b_tilde = -std::numeric_limits<double>::infinity();
    for (const auto& s : scan.samples) {
        if (!s.defined) {
            ++scan.undefined_count;
            continue;
        }
        if (s.b < scan.b_lower) scan.b_lower = s.b, scan.lambda_lower = s.lambda;
        if (s.b > scan.b_tilde) scan.b_tilde = s.b, scan.lambda_tilde = s.lambda;
    }
    if (opts.include_limits) {
        auto [lm, lp] = b_limits(nl, m, scan.m1);
        scan.limit_minus_inf = lm;
        scan.limit_plus_inf = lp;
        for (auto [lim, where] : {std::pair{lm, -std::numeric_limits<double>::infinity()},
                                  std::pair{lp, std::numeric_limits<double>::infinity()}}) {
            if (!lim) continue;
            if (*lim < scan.b_lower) scan.b_lower = *lim, scan.lambda_lower = where, scan.lower_at_limit = true;
            if (*lim > scan.b_tilde) scan.b_tilde = *lim, scan.lambda_tilde = where, scan.tilde_at_limit = true;
        }
    }
    if (!std::isfinite(scan.b_lower) || !std::isfinite(scan.b_tilde)) {
        scan.case_tag = CaseTag::Undetermined;
        return scan;
    }
    scan.case_tag = classify_case(scan.b_lower, scan.b_tilde, scan.zero_band);
    return scan;
}

double beta_of(const Nonlinearity& nl, double lambda, const GroundStateOptions& opts) {
    const double m1 = compute_m1(nl.params());
    return b_of_lambda(nl, lambda, m1, opts) / std::exp(lambda) + m1;
}

LepsTable leps_experiment(double alpha, const std::vector<double>& L_list, const ProblemParams& params,
                          const GroundStateOptions& opts) {
    if (std::abs(alpha) > 0.5) throw std::invalid_argument("leps_experiment: |alpha| must be <= 1/2");
    for (std::size_t i = 1; i < L_list.size(); ++i)
        if (!(L_list[i] > L_list[i - 1])) throw std::invalid_argument("leps_experiment: L_list must increase");
    LepsTable t;
    t.alpha = alpha;
    const double m1 = compute_m1(params);
    const double target = std::pow(1.0 + alpha, -2.0 / (params.p() - 1.0)) * m1;
    for (double L : L_list) {
        const Nonlinearity nl = make_perturbed_power(params, make_profile_a(alpha, L, params));
        LepsRow row;
        row.L = L;
        row.beta = beta_of(nl, 0.0, opts);
        row.target = target;
        row.deviation = std::abs(row.beta - target);
        t.rows.push_back(row);
    }
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        if (!(t.rows[i].deviation < t.rows[i - 1].deviation)) t.strictly_decreasing = false;
    return t;
}

}  // namespace nlslab
