#include "nlslab/lab.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "nlslab/functionals.hpp"

namespace nlslab {

namespace {

using json = nlohmann::ordered_json;

/// JSON number, or null for non-finite values.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
json num(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Minimal CSV builder, 17 significant digits.
class Csv {
  public:
    explicit Csv(const std::string& header) { os_ << header << "\n"; }
    template <class... T>
    void row(const T&... cells) {
        std::size_t i = 0;
        ((os_ << (i++ ? "," : "") << cell(cells)), ...);
        os_ << "\n";
    }
    std::string str() const { return os_.str(); }

  private:
    static std::string cell(double x) { return g17(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(bool x) { return x ? "1" : "0"; }
    static std::string cell(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    static std::string cell(const char* s) { return cell(std::string(s)); }
    std::ostringstream os_;
};

std::string profile_csv(const RadialFunction& u) {
    std::ostringstream os;
    write_csv(os, u);
    return os.str();
}

double resolve_m(const std::optional<double>& m, double m1) { return m ? *m : m1; }

struct Context {
    const Scenario& s;
    ProblemParams P;
    Nonlinearity nl;
    double m1;
    ReportBundle& out;
    json& results;
    json& verdicts;

    void tag(const std::string& t) { out.tags.push_back(t); }
};

// ---- experiments --------------------------------------------------------

void ground_state(Context& c) {
    const double mu = c.s.ground_state.mu;
    const GroundState gs = find_ground_state(c.nl, mu, ground_state_options(c.s));
    const Norms nm = norms(gs.u);
    const auto f = evaluate(c.nl, gs.u, std::log(mu), c.m1);
    json& r = c.results;
    r["mu"] = num(mu);
    r["s0"] = num(gs.s0);
    r["action"] = num(gs.action);
    r["mass"] = num(gs.mass);
    r["grad2"] = num(nm.grad2);
    r["lp1"] = num(nm.lp1);
    r["energy"] = num(f.energy);
    r["pohozaev_res"] = num(gs.pohozaev_res);
    r["nehari_res"] = num(gs.nehari_res);
    r["branch_actions"] = gs.branch_actions;
    r["branch_ambiguity"] = gs.branch_ambiguity;
    r["tail_mass_fraction"] = num(tail_mass_fraction(gs.u));
    const double tol = c.s.tolerances.residual_tol;
    c.verdicts["residuals"] =
        std::abs(gs.pohozaev_res) <= tol && std::abs(gs.nehari_res) <= tol ? "accepted" : "rejected";
    c.tag("ground-state-existence");
    if (c.nl.kind() == NonlinearityKind::Power) {
        // omega_mu identities, relative errors against m1
        const int N = c.P.N();
        json id;
        id["mass_vs_m1"] = num(gs.mass / c.m1 - 1.0);
        id["grad2_vs_mu_N_m1"] = num(nm.grad2 / (mu * N * c.m1) - 1.0);
        id["lp1_vs_mu_Np2_m1"] = num(nm.lp1 / (mu * (N + 2) * c.m1) - 1.0);
        id["action_vs_mu_m1"] = num(gs.action / (mu * c.m1) - 1.0);
        r["scaling_identities"] = id;
        double worst = 0.0;
        for (const auto& [k, v] : id.items()) worst = std::max(worst, std::abs(v.get<double>()));
        c.verdicts["scaling_identities"] = worst <= 1e-4 ? "hold" : "violated";
        c.tag("scaling-identities");
    }
    c.out.csv["profile.csv"] = profile_csv(gs.u);
}

json scan_json(const LevelScan& scan) {
    json r;
    r["m"] = num(scan.m);
    r["b_lower"] = num(scan.b_lower);
    r["b_tilde"] = num(scan.b_tilde);
    r["lambda_lower"] = num(scan.lambda_lower);
    r["lambda_tilde"] = num(scan.lambda_tilde);
    r["lower_at_limit"] = scan.lower_at_limit;
    r["tilde_at_limit"] = scan.tilde_at_limit;
    r["limit_minus_inf"] = num(scan.limit_minus_inf);
    r["limit_plus_inf"] = num(scan.limit_plus_inf);
    r["zero_band"] = num(scan.zero_band);
    r["samples"] = scan.samples.size();
    r["undefined_count"] = scan.undefined_count;
    r["case_tag"] = to_string(scan.case_tag);
    return r;
}

std::string scan_csv(const LevelScan& scan) {
    Csv csv("lambda,mu,b,a,defined,refinement,action_residual,note");
    for (const auto& x : scan.samples) csv.row(x.lambda, x.mu, x.b, x.a, x.defined, x.refinement, x.action_residual, x.note);
    return csv.str();
}

void scan(Context& c) {
    const auto& sp = c.s.scan_b;
    const double m = resolve_m(sp.m, c.m1);
    const LevelScan sc = scan_b(c.nl, m, sp.lambda_lo, sp.lambda_hi, sp.samples, scan_options(c.s));
    c.results["scan"] = scan_json(sc);
    c.verdicts["case_tag"] = to_string(sc.case_tag);
    c.out.csv["scan_b.csv"] = scan_csv(sc);
    c.tag("level-sign-cases");
    const std::string& kind = c.s.nonlinearity.kind;
    if (kind == "bump") c.tag("sign-dichotomy");
    if (kind == "two-scale") c.tag("two-scale-example");
    if (kind == "power") c.tag("power-level-identity");
}

std::string flow_csv(const FlowReport& f) {
    Csv csv("iter,energy,supnorm,kappa,gradnorm");
    for (const auto& x : f.trajectory) csv.row(x.iter, x.energy, x.supnorm, x.kappa, x.gradnorm);
    return csv.str();
}

void minimize(Context& c) {
    const double m = resolve_m(c.s.minimize_d.m, c.m1);
    const FlowOptions fo = flow_options(c.s);
    BestFlow bf = minimize_d_multistart(c.nl, m, fo, c.s.grid.nodes);
    std::vector<std::string> seed_names = {"omega1", "broad-gaussian", "narrow-gaussian"};
    if (c.s.minimize_d.random_seeds > 0) {
        // Gaussian widths log-uniform in [1/4, 4], drawn from the scenario seed
        std::mt19937_64 rng(c.s.seed);
        std::uniform_real_distribution<double> logw(std::log(0.25), std::log(4.0));
        const GridPtr grid = default_grid(c.P, 1.0, c.s.grid.nodes);
        for (int k = 0; k < c.s.minimize_d.random_seeds; ++k) {
            const double w = std::exp(logw(rng));
            const auto seed = with_mass(RadialFunction::sample(grid, [w](double r) { return std::exp(-r * r / (w * w)); }), m);
            bf.runs.push_back(minimize_d(c.nl, m, seed, fo));
            seed_names.push_back("gaussian-w" + g17(w));
            if (bf.runs.back().d_estimate < bf.best.d_estimate) bf.best = bf.runs.back();
        }
    }
    Csv runs("seed,verdict,d,multiplier,iterations,initial_sup,final_sup,inner_mass_fraction,max_mass_error,energy_monotone,final_gradnorm");
    for (std::size_t i = 0; i < bf.runs.size(); ++i) {
        const auto& f = bf.runs[i];
        runs.row(seed_names[i], to_string(f.verdict), f.d_estimate, f.multiplier, f.iterations, f.initial_sup, f.final_sup,
                 f.inner_mass_fraction, f.max_mass_error, f.energy_monotone, f.final_gradnorm);
    }
    c.out.csv["flow_runs.csv"] = runs.str();
    c.out.csv["flow_trajectory.csv"] = flow_csv(bf.best);
    if (bf.best.minimizer) c.out.csv["flow_last_iterate.csv"] = profile_csv(*bf.best.minimizer);

    const FlowReport& b = bf.best;
    json& r = c.results;
    r["m"] = num(m);
    r["d_estimate"] = num(b.d_estimate);
    r["multiplier"] = num(b.multiplier);
    r["el_residual"] = num(b.el_residual);
    r["iterations"] = b.iterations;
    r["sup_growth"] = num(b.final_sup / b.initial_sup);
    r["inner_mass_fraction"] = num(b.inner_mass_fraction);
    r["max_mass_error"] = num(b.max_mass_error);
    r["energy_monotone"] = b.energy_monotone;
    r["diagnostic"] = b.diagnostic;
    c.verdicts["flow"] = to_string(b.verdict);
    if (b.verdict == FlowVerdict::Concentrating) c.tag("non-attainment");
    else c.tag("minimizer-existence");
    if (c.nl.kind() == NonlinearityKind::RhoFamily) {
        const double target = -c.nl.alpha() * c.m1;
        r["target_minus_alpha_m1"] = num(target);
        r["d_over_target"] = num(b.d_estimate / target);
        c.verdicts["within_2pct_of_target"] = std::abs(b.d_estimate / target - 1.0) <= 0.02 ? "yes" : "no";
    }
    if (c.s.minimize_d.compare_scan && std::abs(m - c.m1) <= 1e-12 * c.m1) {
        const auto& sp = c.s.scan_b;
        const LevelScan sc = scan_b(c.nl, m, sp.lambda_lo, sp.lambda_hi, sp.samples, scan_options(c.s));
        const double gap = std::abs(b.d_estimate - sc.b_lower);
        const double tol = std::max(1e-3 * std::abs(b.d_estimate), 1e-4 * c.m1);
        r["b_lower"] = num(sc.b_lower);
        r["d_minus_b_lower"] = num(b.d_estimate - sc.b_lower);
        r["gap_tolerance"] = num(tol);
        if (b.verdict == FlowVerdict::Concentrating)
            // the infimum is not attained: the last iterate only bounds it from above
            c.verdicts["d_equals_inf_b"] = b.d_estimate >= sc.b_lower - tol ? "upper-bound" : "disagree";
        else
            c.verdicts["d_equals_inf_b"] = gap <= tol ? "agree" : "disagree";
        c.out.csv["scan_b.csv"] = scan_csv(sc);
        c.tag("d-equals-inf-b");
    }
}

void legendre(Context& c) {
    const auto& lp = c.s.legendre;
    const double m = resolve_m(lp.m, c.m1);
    const LegendreResult L = legendre_check(c.nl, m, log_space(lp.mu_lo, lp.mu_hi, lp.mu_count), flow_options(c.s));
    json& r = c.results;
    r["m"] = num(m);
    r["d"] = num(L.lhs);
    r["inf_a_minus_mu_m"] = num(L.rhs);
    r["gap"] = num(L.gap);
    r["argmin_mu"] = num(L.argmin_mu);
    r["boundary_infimum"] = L.boundary_infimum;
    const double tol = std::max(1e-3 * std::abs(L.lhs), 1e-4 * c.m1);
    r["gap_tolerance"] = num(tol);
    c.verdicts["legendre"] = std::abs(L.gap) <= tol ? "agree" : "disagree";
    Csv csv("mu,a_minus_mu_m");
    for (auto [mu, v] : L.table) csv.row(mu, v);
    c.out.csv["legendre.csv"] = csv.str();
    c.tag("legendre-relation");
}

/// beta_cap from the configuration: inf, a number, or sup b plus a 20% margin.
std::pair<double, std::string> resolve_beta_cap(Context& c, const Nonlinearity& nl) {
    const std::string& v = c.s.zero_mass.beta_cap;
    if (v == "inf") return {std::numeric_limits<double>::infinity(), "inf"};
    if (v != "auto") return {std::stod(v), "config"};
    const auto& sp = c.s.scan_b;
    const LevelScan sc = scan_b(nl, c.m1, sp.lambda_lo, sp.lambda_hi, sp.samples, scan_options(c.s));
    if (!std::isfinite(sc.b_tilde)) return {std::numeric_limits<double>::infinity(), "auto: sup b undetermined, inf used"};
    return {std::max(1.2 * sc.b_tilde, sc.b_tilde + 0.2 * c.m1), "auto: sup b = " + g17(sc.b_tilde) + " plus 20% margin"};
}

void zero_mass(Context& c) {
    const double q = c.s.zero_mass.q ? *c.s.zero_mass.q : c.P.p();
    const auto [cap, cap_source] = resolve_beta_cap(c, c.nl);
    const auto heights = zero_mass_heights(c.s);
    const ZeroMassScan z = g2_scan(c.nl, q, cap, heights, zero_mass_options(c.s));
    json& r = c.results;
    r["q"] = num(q);
    r["beta_cap"] = num(cap);
    r["beta_cap_source"] = cap_source;
    r["heights"] = heights.size();
    r["inconclusive_fraction"] = num(z.inconclusive_fraction);
    r["candidates"] = z.candidates.size();
    r["candidate_level"] = num(z.candidate_level);
    r["label"] = z.label;
    std::map<std::string, int> counts;
    for (const auto& o : z.outcomes) ++counts[to_string(o.classification)];
    r["classification_counts"] = counts;
    c.verdicts["g2"] = to_string(z.verdict);

    Csv scan("s0,classification,ZG,pohozaev_res");
    for (const auto& o : z.outcomes) scan.row(o.s0, to_string(o.classification), std::nan(""), std::nan(""));
    for (const auto& cd : z.candidates) scan.row(cd.height, std::string("candidate"), cd.Z, cd.pohozaev_res);
    c.out.csv["zero_mass_scan.csv"] = scan.str();
    Csv cands("height,ZG,grad2,pohozaev_res,in_Fq,accepted,decay_C_est,note");
    for (const auto& cd : z.candidates) {
        const double C = cd.profile ? decay_check(*cd.profile, q).C_est : std::nan("");
        cands.row(cd.height, cd.Z, cd.grad2, cd.pohozaev_res, cd.in_Fq, cd.accepted, C, cd.note);
    }
    c.out.csv["zero_mass_candidates.csv"] = cands.str();
    c.tag("zero-mass-nonexistence");
}

void examples(Context& c) {
    const auto& ex = c.s.examples;
    const GroundStateOptions gso = ground_state_options(c.s);
    GroundStateOptions fine = gso;
    fine.nodes *= 2;
    const double p = c.P.p();

    // the three parts are independent
    auto plateau = std::async(std::launch::async, [&] {
        Csv csv("alpha,a1,scaled,m1,rel_error");
        json rows = json::array();
        double worst = 0.0;
        for (double a : ex.alphas) {
            const double a1 = find_ground_state(make_plateau_power(c.P, a), 1.0, gso).action;
            const double scaled = a1 * std::pow(1.0 + a, 2.0 / (p - 1.0));
            const double err = std::abs(scaled / c.m1 - 1.0);
            worst = std::max(worst, err);
            csv.row(a, a1, scaled, c.m1, err);
            rows.push_back({{"alpha", num(a)}, {"a1", num(a1)}, {"rel_error", num(err)}});
        }
        return std::make_tuple(rows, csv.str(), worst);
    });
    auto leps = std::async(std::launch::async, [&] {
        Csv csv("alpha,L,beta,target,deviation");
        json out = json::array();
        bool all = true;
        for (double a : ex.alphas) {
            const LepsTable t = leps_experiment(a, ex.L_list, c.P, gso);
            json rows = json::array();
            for (const auto& row : t.rows) {
                csv.row(a, row.L, row.beta, row.target, row.deviation);
                rows.push_back({{"L", num(row.L)}, {"beta", num(row.beta)}, {"deviation", num(row.deviation)}});
            }
            all = all && t.strictly_decreasing;
            out.push_back({{"alpha", num(a)}, {"rows", rows}, {"strictly_decreasing", t.strictly_decreasing}});
        }
        return std::make_tuple(out, csv.str(), all);
    });
    auto two_scale = std::async(std::launch::async, [&] {
        const auto& nls = c.s.nonlinearity;
        const auto a1 = make_profile_a(nls.alpha1, nls.L2, c.P), a2 = make_profile_a(nls.alpha2, nls.L2, c.P);
        const double ell_min = min_admissible_ell(*a1, *a2, c.P);
        const double ell = nls.ell ? *nls.ell : std::ceil(ell_min) + 1.0;
        const Nonlinearity ts = make_two_scale(a1, a2, ell, c.P);
        const double b0 = beta_of(ts, 0.0, gso), bl = beta_of(ts, ell, gso);
        // solver noise: change under doubled resolution
        const double noise = std::max(std::abs(beta_of(ts, 0.0, fine) - b0), std::abs(beta_of(ts, ell, fine) - bl));
        const double margin = std::min(b0 - c.m1, c.m1 - bl);
        ScanOptions so = scan_options(c.s);
        const LevelScan sc = scan_b(ts, c.m1, -6.0, ell + 6.0, ex.two_scale_samples, so);
        json j{{"ell", num(ell)},           {"ell_min", num(ell_min)}, {"beta_at_0", num(b0)},
               {"beta_at_ell", num(bl)},    {"m1", num(c.m1)},         {"margin", num(margin)},
               {"solver_noise", num(noise)}, {"case_tag", to_string(sc.case_tag)}, {"scan", scan_json(sc)}};
        const bool ordered = b0 > c.m1 && c.m1 > bl && margin >= 5.0 * noise;
        return std::make_tuple(j, scan_csv(sc), ordered && sc.case_tag == CaseTag::I);
    });

    auto [pl_rows, pl_csv, pl_worst] = plateau.get();
    auto [le_rows, le_csv, le_ok] = leps.get();
    auto [ts_json, ts_csv, ts_ok] = two_scale.get();
    c.results["plateau"] = pl_rows;
    c.results["leps"] = le_rows;
    c.results["two_scale"] = ts_json;
    c.verdicts["plateau"] = pl_worst <= 1e-4 ? "hold" : "violated";
    c.verdicts["leps_trend"] = le_ok ? "strictly-decreasing" : "not-monotone";
    c.verdicts["two_scale"] = ts_ok ? "case-i" : "not-case-i";
    c.out.csv["plateau.csv"] = pl_csv;
    c.out.csv["leps.csv"] = le_csv;
    c.out.csv["two_scale_scan.csv"] = ts_csv;
    c.tag("plateau-level");
    c.tag("profile-level-limit");
    c.tag("two-scale-example");
}

void stability(Context& c) {
    const double q = c.s.zero_mass.q ? *c.s.zero_mass.q : c.P.p();
    const Nonlinearity base = make_g2_example(c.P, 0.0);
    const PerturbationXi xi = g2_example_perturbation(c.P);
    const auto [cap, cap_source] = resolve_beta_cap(c, base);
    const StabilityTable t = stability_experiment(base, xi, c.s.stability.eps_list, cap, zero_mass_heights(c.s), q,
                                                  zero_mass_options(c.s));
    json& r = c.results;
    r["q"] = num(q);
    r["beta_cap"] = num(cap);
    r["beta_cap_source"] = cap_source;
    r["xi_norm"] = num(xi_norm(xi, c.P));
    r["baseline_ok"] = t.baseline_ok;
    r["largest_ok_eps"] = num(t.largest_ok);
    r["threshold_eps"] = num(t.threshold);
    r["monotone"] = t.monotone;
    // every eps passed: the empirical threshold is only a lower bound
    r["all_pass"] = t.threshold && !t.rows.empty() && *t.threshold == t.rows.front().eps;
    Csv csv("eps,eps_xi_norm,verdict,inconclusive_fraction,candidates,dense_verdict");
    for (const auto& row : t.rows)
        csv.row(row.eps, row.xi_norm, to_string(row.verdict), row.inconclusive_fraction, row.candidates,
                row.dense_verdict ? to_string(*row.dense_verdict) : std::string());
    c.out.csv["stability.csv"] = csv.str();
    c.verdicts["baseline"] = t.baseline_ok ? "NoSolutionFound" : "failed";
    c.verdicts["monotone"] = t.monotone ? "yes" : "flagged";
    c.tag("perturbation-stability");
    c.tag("zero-mass-nonexistence");
}

}  // namespace

ReportBundle execute(const Scenario& input) {
    const auto diags = validate(input);
    if (has_errors(diags)) {
        for (const auto& d : diags)
            if (d.severity == Diagnostic::Severity::Error) throw ConfigError(d.field, 0, d.message);
    }
    const Scenario s = input.refine ? refined(input) : input;
    ReportBundle out;
    out.out_dir = s.out_dir;
    json& sum = out.summary;
    sum["experiment"] = to_string(s.experiment);
    sum["N"] = s.N;
    sum["p"] = num(ProblemParams(s.N).p());
    sum["seed"] = s.seed;
    sum["refine"] = input.refine;

    const std::string ctx = "experiment " + to_string(s.experiment) + ": ";
    try {
        const ProblemParams P(s.N);
        const Nonlinearity nl = build_nonlinearity(s);
        const M1Estimate est = compute_m1_detailed(P);
        sum["nonlinearity"] = {{"kind", s.nonlinearity.kind}, {"description", nl.description()}};
        sum["m1"] = {{"value", num(est.m1)},
                     {"method", "shooting ground state of the power nonlinearity at mu = 1, Richardson over n and 2n nodes"},
                     {"n_coarse", est.n_coarse},
                     {"mass_coarse", num(est.coarse)},
                     {"mass_fine", num(est.fine)}};
        json results = json::object(), verdicts = json::object();
        Context c{s, P, nl, est.m1, out, results, verdicts};
        switch (s.experiment) {
            case Experiment::GroundState: ground_state(c); break;
            case Experiment::ScanB: scan(c); break;
            case Experiment::MinimizeD: minimize(c); break;
            case Experiment::Legendre: legendre(c); break;
            case Experiment::ZeroMass: zero_mass(c); break;
            case Experiment::Examples: examples(c); break;
            case Experiment::Stability: stability(c); break;
        }
        sum["results"] = results;
        sum["verdicts"] = verdicts;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ExperimentError(ctx + e.what());
    }
    json warnings = json::array();
    for (const auto& d : diags) warnings.push_back(d.field + ": " + d.message);
    sum["warnings"] = warnings;
    sum["tags"] = out.tags;
    json files = json::array();
    for (const auto& [name, _] : out.csv) files.push_back(name);
    sum["files"] = files;
    sum["scenario"] = to_ini(input);
    return out;
}

void write_report(const ReportBundle& b) {
    namespace fs = std::filesystem;
    const fs::path dir(b.out_dir);
    fs::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
        os << text;
    };
    for (const auto& [name, text] : b.csv) put(name, text);
    std::ostringstream man;
    man << "experiment: " << b.summary.value("experiment", std::string()) << "\n";
    for (const auto& t : b.tags) man << "tag: " << t << "\n";
    man << "file: summary.json\n";
    for (const auto& [name, _] : b.csv) man << "file: " << name << "\n";
    put("MANIFEST.txt", man.str());
    put("summary.json", b.summary.dump(2) + "\n");
}

ReportBundle run(const Scenario& s) {
    ReportBundle b = execute(s);
    write_report(b);
    return b;
}

std::string headline(const ReportBundle& b) {
    const auto& v = b.summary.value("verdicts", json::object());
    for (const char* key : {"case_tag", "flow", "g2", "legendre", "two_scale", "baseline", "residuals"})
        if (v.contains(key)) return v[key].get<std::string>();
    return "done";
}

}  // namespace nlslab
