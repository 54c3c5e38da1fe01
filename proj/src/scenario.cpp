#include "nlslab/scenario.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nlslab {

namespace pt = boost::property_tree;

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::GroundState: return "ground-state";
        case Experiment::ScanB: return "scan-b";
        case Experiment::MinimizeD: return "minimize-d";
        case Experiment::Legendre: return "legendre";
        case Experiment::ZeroMass: return "zero-mass";
        case Experiment::Examples: return "examples";
        case Experiment::Stability: return "stability";
    }
    return "ground-state";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
    std::string n = name;
    std::replace(n.begin(), n.end(), '_', '-');
    for (auto e : {Experiment::GroundState, Experiment::ScanB, Experiment::MinimizeD, Experiment::Legendre,
                   Experiment::ZeroMass, Experiment::Examples, Experiment::Stability})
        if (to_string(e) == n) return e;
    return std::nullopt;
}

namespace {

std::string located(const std::string& field, int line, const std::string& what) {
    std::ostringstream os;
    os << "config";
    if (line > 0) os << " line " << line;
    if (!field.empty()) os << " [" << field << "]";
    os << ": " << what;
    return os.str();
}

}  // namespace

ConfigError::ConfigError(const std::string& field, int line, const std::string& what)
    : std::runtime_error(located(field, line, what)), field_(field), line_(line) {}

namespace {

// ---- value codecs -------------------------------------------------------

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

struct BadValue {
    std::string what;
};

double to_double(const std::string& text) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) throw BadValue{"expected a number, got '" + t + "'"};
    return v;
}

long long to_integer(const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw BadValue{"expected an integer, got '" + t + "'"};
    return v;
}

std::size_t to_size(const std::string& text) {
    const long long v = to_integer(text);
    if (v < 0) throw BadValue{"expected a non-negative integer"};
    return static_cast<std::size_t>(v);
}

std::uint64_t to_u64(const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw BadValue{"expected an unsigned 64-bit integer, got '" + t + "'"};
    return v;
}

bool to_bool(const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw BadValue{"expected true/false, got '" + t + "'"};
}

std::optional<double> to_opt_double(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty() || t == "default") return std::nullopt;
    return to_double(t);
}

std::vector<double> to_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(to_double(item));
    return out;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    // shortest text that reads back to the same double
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}
std::string brief(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "default"; }
std::string fmt(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

// ---- field registry -----------------------------------------------------

struct Field {
    const char* section;
    const char* key;
    std::function<void(Scenario&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
};

#define NLS_FIELD(sec, key, expr, parse, show)                                   \
    Field {                                                                      \
        sec, key, [](Scenario& s, const std::string& v) { s.expr = parse(v); }, \
            [](const Scenario& s) { return show(s.expr); }                       \
    }

std::string same(const std::string& v) { return trim(v); }
std::string show_str(const std::string& v) { return v; }
std::string show_int(long long v) { return std::to_string(v); }
std::string show_u64(std::uint64_t v) { return std::to_string(v); }
std::string show_bool(bool v) { return v ? "true" : "false"; }
std::string show_d(double v) { return fmt(v); }
std::string show_od(const std::optional<double>& v) { return fmt(v); }
std::string show_list(const std::vector<double>& v) { return fmt(v); }
int to_int(const std::string& v) { return static_cast<int>(to_integer(v)); }
Experiment to_experiment(const std::string& v) {
    if (auto e = parse_experiment(trim(v))) return *e;
    throw BadValue{"unknown experiment '" + trim(v) + "'"};
}
std::string show_experiment(Experiment e) { return to_string(e); }

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        NLS_FIELD("problem", "N", N, to_int, show_int),
        NLS_FIELD("problem", "experiment", experiment, to_experiment, show_experiment),
        NLS_FIELD("problem", "seed", seed, to_u64, show_u64),
        NLS_FIELD("problem", "refine", refine, to_bool, show_bool),
        NLS_FIELD("nonlinearity", "kind", nonlinearity.kind, same, show_str),
        NLS_FIELD("nonlinearity", "alpha", nonlinearity.alpha, to_double, show_d),
        NLS_FIELD("nonlinearity", "L", nonlinearity.L, to_double, show_d),
        NLS_FIELD("nonlinearity", "mollify", nonlinearity.mollify, to_opt_double, show_od),
        NLS_FIELD("nonlinearity", "eps", nonlinearity.eps, to_double, show_d),
        NLS_FIELD("nonlinearity", "sign", nonlinearity.sign, to_int, show_int),
        NLS_FIELD("nonlinearity", "k", nonlinearity.k, to_double, show_d),
        NLS_FIELD("nonlinearity", "table", nonlinearity.table, same, show_str),
        NLS_FIELD("nonlinearity", "alpha1", nonlinearity.alpha1, to_double, show_d),
        NLS_FIELD("nonlinearity", "alpha2", nonlinearity.alpha2, to_double, show_d),
        NLS_FIELD("nonlinearity", "L2", nonlinearity.L2, to_double, show_d),
        NLS_FIELD("nonlinearity", "ell", nonlinearity.ell, to_opt_double, show_od),
        NLS_FIELD("grid", "nodes", grid.nodes, to_size, show_int),
        NLS_FIELD("grid", "rmax_scale", grid.rmax_scale, to_double, show_d),
        NLS_FIELD("grid", "stretch", grid.stretch, to_double, show_d),
        NLS_FIELD("grid", "per_decade", grid.per_decade, to_int, show_int),
        NLS_FIELD("tolerances", "rtol", tolerances.rtol, to_double, show_d),
        NLS_FIELD("tolerances", "atol", tolerances.atol, to_double, show_d),
        NLS_FIELD("tolerances", "s0_tol", tolerances.s0_tol, to_double, show_d),
        NLS_FIELD("tolerances", "residual_tol", tolerances.residual_tol, to_double, show_d),
        NLS_FIELD("tolerances", "grad_tol", tolerances.grad_tol, to_double, show_d),
        NLS_FIELD("tolerances", "pohozaev_tol", tolerances.pohozaev_tol, to_double, show_d),
        NLS_FIELD("ground_state", "mu", ground_state.mu, to_double, show_d),
        NLS_FIELD("scan_b", "lambda_lo", scan_b.lambda_lo, to_double, show_d),
        NLS_FIELD("scan_b", "lambda_hi", scan_b.lambda_hi, to_double, show_d),
        NLS_FIELD("scan_b", "samples", scan_b.samples, to_size, show_int),
        NLS_FIELD("scan_b", "lambda_tol", scan_b.lambda_tol, to_double, show_d),
        NLS_FIELD("scan_b", "m", scan_b.m, to_opt_double, show_od),
        NLS_FIELD("minimize_d", "m", minimize_d.m, to_opt_double, show_od),
        NLS_FIELD("minimize_d", "max_iter", minimize_d.max_iter, to_int, show_int),
        NLS_FIELD("minimize_d", "random_seeds", minimize_d.random_seeds, to_int, show_int),
        NLS_FIELD("minimize_d", "compare_scan", minimize_d.compare_scan, to_bool, show_bool),
        NLS_FIELD("legendre", "m", legendre.m, to_opt_double, show_od),
        NLS_FIELD("legendre", "mu_lo", legendre.mu_lo, to_double, show_d),
        NLS_FIELD("legendre", "mu_hi", legendre.mu_hi, to_double, show_d),
        NLS_FIELD("legendre", "mu_count", legendre.mu_count, to_size, show_int),
        NLS_FIELD("zero_mass", "q", zero_mass.q, to_opt_double, show_od),
        NLS_FIELD("zero_mass", "h_lo", zero_mass.h_lo, to_double, show_d),
        NLS_FIELD("zero_mass", "h_hi", zero_mass.h_hi, to_double, show_d),
        NLS_FIELD("zero_mass", "heights", zero_mass.heights, to_size, show_int),
        NLS_FIELD("zero_mass", "beta_cap", zero_mass.beta_cap, same, show_str),
        NLS_FIELD("zero_mass", "horizon", zero_mass.horizon, to_double, show_d),
        NLS_FIELD("examples", "alphas", examples.alphas, to_list, show_list),
        NLS_FIELD("examples", "L_list", examples.L_list, to_list, show_list),
        NLS_FIELD("examples", "two_scale_samples", examples.two_scale_samples, to_size, show_int),
        NLS_FIELD("stability", "eps_list", stability.eps_list, to_list, show_list),
        NLS_FIELD("output", "dir", out_dir, same, show_str),
    };
    return f;
}

#undef NLS_FIELD

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : fields())
        if (section == f.section && key == f.key) return &f;
    return nullptr;
}

/// "section.key" -> line number, from a plain scan of the text.
std::map<std::string, int> key_lines(const std::string& text) {
    std::map<std::string, int> lines;
    std::istringstream is(text);
    std::string line, section;
    for (int no = 1; std::getline(is, line); ++no) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq != std::string::npos) lines.emplace(section + "." + trim(t.substr(0, eq)), no);
    }
    return lines;
}

void assign(Scenario& s, const std::string& section, const std::string& key, const std::string& value, int line) {
    const std::string name = section + "." + key;
    const Field* f = find_field(section, key);
    if (!f) {
        s.parse_notes.push_back({Diagnostic::Severity::Error, name, "unknown key"});
        return;
    }
    try {
        f->set(s, value);
    } catch (const BadValue& e) {
        throw ConfigError(name, line, e.what);
    }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::vector<Override>& overrides) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", static_cast<int>(e.line()), e.message());
    }
    const auto lines = key_lines(text);
    Scenario s;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            if (!body.data().empty())
                s.parse_notes.push_back({Diagnostic::Severity::Error, section, "key outside any section"});
            else if (std::none_of(fields().begin(), fields().end(), [&](const Field& f) { return section == f.section; }))
                s.parse_notes.push_back({Diagnostic::Severity::Error, section, "unknown section"});
            continue;
        }
        for (const auto& [key, node] : body) {
            const auto it = lines.find(section + "." + key);
            assign(s, section, key, node.data(), it == lines.end() ? 0 : it->second);
        }
    }
    for (const auto& [name, value] : overrides) {
        const auto dot = name.find('.');
        if (dot == std::string::npos) throw ConfigError(name, 0, "override must be section.key=value");
        assign(s, name.substr(0, dot), name.substr(dot + 1), value, 0);
    }
    return s;
}

Scenario load_scenario(const std::string& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), overrides);
}

std::string to_ini(const Scenario& s) {
    std::ostringstream os;
    std::string section;
    for (const auto& f : fields()) {
        if (section != f.section) {
            if (!section.empty()) os << "\n";
            section = f.section;
            os << "[" << section << "]\n";
        }
        os << f.key << " = " << f.get(s) << "\n";
    }
    return os.str();
}

// ---- validation ---------------------------------------------------------

bool has_errors(const std::vector<Diagnostic>& d) {
    return std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.severity == Diagnostic::Severity::Error; });
}

std::vector<Diagnostic> validate(const Scenario& s) {
    std::vector<Diagnostic> out = s.parse_notes;
    auto error = [&](const std::string& f, const std::string& m) { out.push_back({Diagnostic::Severity::Error, f, m}); };
    auto warn = [&](const std::string& f, const std::string& m) { out.push_back({Diagnostic::Severity::Warning, f, m}); };
    auto finite = [](double x) { return std::isfinite(x); };
    auto profile_bound = [&](const std::string& f, double a) {
        if (!(std::abs(a) <= 0.5))
            error(f, f.substr(f.find('.') + 1) + " = " + brief(a) + " violates the profile bound -1/2 <= a(s) <= 1/2");
    };

    if (s.N < 2) error("problem.N", "N = " + std::to_string(s.N) + " is out of scope: the problem is posed for N >= 2");
    if (s.N > 10) warn("problem.N", "large N: the exponent p = 1 + 4/N is close to 1");

    const auto& nl = s.nonlinearity;
    static const std::vector<std::string> kinds = {"power", "profile", "plateau", "bump", "rho", "tabulated",
                                                   "two-scale", "g2-example"};
    if (std::find(kinds.begin(), kinds.end(), nl.kind) == kinds.end())
        error("nonlinearity.kind", "unknown kind '" + nl.kind + "'");
    if (nl.kind == "profile" || nl.kind == "plateau") profile_bound("nonlinearity.alpha", nl.alpha);
    if (nl.kind == "profile") {
        if (!(nl.L > 1) || !finite(nl.L)) error("nonlinearity.L", "L must be finite and > 1");
        else if (nl.mollify && !(*nl.mollify >= 0 && *nl.mollify <= std::log((nl.L + 1) / nl.L)))
            error("nonlinearity.mollify", "mollifier radius must lie in [0, log((L+1)/L)]");
    }
    if (nl.kind == "bump") {
        if (!(nl.eps > 0 && nl.eps < std::exp(1.0))) error("nonlinearity.eps", "bump amplitude must lie in (0, e)");
        if (nl.sign != 1 && nl.sign != -1) error("nonlinearity.sign", "sign must be +1 or -1");
    }
    if (nl.kind == "rho") {
        if (!finite(nl.alpha)) error("nonlinearity.alpha", "alpha must be finite");
        if (!(nl.k > 0)) error("nonlinearity.k", "k must be positive");
        if (nl.alpha <= 0) warn("nonlinearity.alpha", "alpha <= 0: the family does not exhibit non-attainment");
    }
    if (nl.kind == "tabulated" && nl.table.empty()) error("nonlinearity.table", "tabulated kind needs a CSV path");
    if (nl.kind == "two-scale") {
        profile_bound("nonlinearity.alpha1", nl.alpha1);
        profile_bound("nonlinearity.alpha2", nl.alpha2);
        if (!(nl.L2 > 1)) error("nonlinearity.L2", "L2 must be > 1");
        else if (nl.ell && s.N >= 2 && std::abs(nl.alpha1) <= 0.5 && std::abs(nl.alpha2) <= 0.5) {
            const ProblemParams P(s.N);
            const double lo = min_admissible_ell(*make_profile_a(nl.alpha1, nl.L2, P), *make_profile_a(nl.alpha2, nl.L2, P), P);
            if (*nl.ell < lo) error("nonlinearity.ell", "supports overlap: ell must be >= " + fmt(lo));
        }
    }
    if (nl.kind == "g2-example" && !(nl.eps >= 0)) error("nonlinearity.eps", "perturbation size must be >= 0");

    if (s.grid.nodes < 64 || s.grid.nodes % 2) error("grid.nodes", "need an even node count >= 64");
    if (!(s.grid.rmax_scale > 0) || !finite(s.grid.rmax_scale)) error("grid.rmax_scale", "must be positive");
    if (!(s.grid.stretch >= 1) || !finite(s.grid.stretch)) error("grid.stretch", "must be >= 1");
    if (s.grid.per_decade < 1) error("grid.per_decade", "must be >= 1");

    const auto& t = s.tolerances;
    if (!(t.rtol > 0 && t.rtol < 1)) error("tolerances.rtol", "must lie in (0, 1)");
    if (!(t.atol > 0)) error("tolerances.atol", "must be positive");
    else if (t.atol > t.rtol) error("tolerances.atol", "atol must not exceed rtol");
    if (!(t.s0_tol > 0 && t.s0_tol < 1)) error("tolerances.s0_tol", "must lie in (0, 1)");
    if (!(t.residual_tol > 0)) error("tolerances.residual_tol", "must be positive");
    if (!(t.grad_tol > 0)) error("tolerances.grad_tol", "must be positive");
    if (!(t.pohozaev_tol > 0)) error("tolerances.pohozaev_tol", "must be positive");
    if (t.residual_tol > t.pohozaev_tol) warn("tolerances.residual_tol", "looser than the zero-mass Pohozaev filter");

    if (!(s.ground_state.mu > 0) || !finite(s.ground_state.mu)) error("ground_state.mu", "must be positive");
    if (!(s.scan_b.lambda_hi > s.scan_b.lambda_lo)) error("scan_b.lambda_hi", "must exceed lambda_lo");
    if (s.scan_b.samples < 2) error("scan_b.samples", "need at least 2 samples");
    if (!(s.scan_b.lambda_tol > 0)) error("scan_b.lambda_tol", "must be positive");
    for (auto [f, m] : {std::pair{"scan_b.m", s.scan_b.m}, std::pair{"minimize_d.m", s.minimize_d.m},
                        std::pair{"legendre.m", s.legendre.m}})
        if (m && !(*m > 0 && finite(*m))) error(f, "mass must be positive");
    if (s.minimize_d.max_iter < 1) error("minimize_d.max_iter", "must be positive");
    if (s.minimize_d.random_seeds < 0) error("minimize_d.random_seeds", "must be >= 0");
    if (!(s.legendre.mu_lo > 0 && s.legendre.mu_hi > s.legendre.mu_lo)) error("legendre.mu_hi", "need 0 < mu_lo < mu_hi");
    if (s.legendre.mu_count < 3) error("legendre.mu_count", "need at least 3 frequencies");

    const auto& z = s.zero_mass;
    if (z.q && !(*z.q > 0)) error("zero_mass.q", "must be positive");
    if (z.q && s.N >= 3 && !((s.N - 2.0) * (*z.q + 1.0) > s.N))
        warn("zero_mass.q", "harmonic tails r^{2-N} are not in L^{q+1}; every candidate will be rejected");
    if (!(z.h_lo > 0 && z.h_hi > z.h_lo)) error("zero_mass.h_hi", "need 0 < h_lo < h_hi");
    else if (std::log10(z.h_hi / z.h_lo) < 6.0 - 1e-9) error("zero_mass.h_hi", "heights must span at least 6 decades");
    if (z.heights < 2) error("zero_mass.heights", "need at least 2 heights");
    if (z.beta_cap != "auto" && z.beta_cap != "inf") {
        try {
            if (std::isnan(to_double(z.beta_cap))) error("zero_mass.beta_cap", "must not be NaN");
        } catch (const BadValue& e) {
            error("zero_mass.beta_cap", "expected auto, inf or a number: " + e.what);
        }
    }
    if (!(z.horizon > 0)) error("zero_mass.horizon", "must be positive");

    for (double a : s.examples.alphas) profile_bound("examples.alphas", a);
    for (std::size_t i = 0; i < s.examples.L_list.size(); ++i) {
        if (!(s.examples.L_list[i] > 1)) error("examples.L_list", "every L must exceed 1");
        if (i && !(s.examples.L_list[i] > s.examples.L_list[i - 1])) error("examples.L_list", "must increase");
    }
    if (s.examples.two_scale_samples < 2) error("examples.two_scale_samples", "need at least 2 samples");

    const auto& e = s.stability.eps_list;
    if (e.empty()) error("stability.eps_list", "must not be empty");
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(e[i] > 0)) error("stability.eps_list", "entries must be positive");
        if (i && !(e[i] < e[i - 1])) error("stability.eps_list", "must be strictly decreasing");
    }
    if (s.experiment == Experiment::Stability && nl.kind != "g2-example")
        error("nonlinearity.kind", "the stability experiment perturbs the g2-example family; set kind = g2-example");
    if (s.out_dir.empty()) error("output.dir", "must not be empty");
    return out;
}

Scenario refined(const Scenario& s) {
    Scenario r = s;
    r.grid.nodes *= 2;
    r.grid.per_decade *= 2;
    r.scan_b.samples = 2 * s.scan_b.samples - 1;
    r.legendre.mu_count = 2 * s.legendre.mu_count - 1;
    r.zero_mass.heights *= 2;
    r.examples.two_scale_samples = 2 * s.examples.two_scale_samples - 1;
    return r;
}

// ---- mapping to the modules ---------------------------------------------

Nonlinearity build_nonlinearity(const Scenario& s) {
    const ProblemParams P(s.N);
    const auto& nl = s.nonlinearity;
    if (nl.kind == "power") return make_power(P);
    if (nl.kind == "profile") return make_perturbed_power(P, make_profile_a(nl.alpha, nl.L, P, nl.mollify));
    if (nl.kind == "plateau") return make_plateau_power(P, nl.alpha);
    if (nl.kind == "bump") return make_bump(P, nl.eps, nl.sign);
    if (nl.kind == "rho") return make_rho_family(P, nl.alpha, nl.k);
    if (nl.kind == "tabulated") return load_tabulated(P, nl.table);
    if (nl.kind == "two-scale") {
        const auto a1 = make_profile_a(nl.alpha1, nl.L2, P), a2 = make_profile_a(nl.alpha2, nl.L2, P);
        const double ell = nl.ell ? *nl.ell : std::ceil(min_admissible_ell(*a1, *a2, P)) + 1.0;
        return make_two_scale(a1, a2, ell, P);
    }
    if (nl.kind == "g2-example") return make_g2_example(P, nl.eps);
    throw ConfigError("nonlinearity.kind", 0, "unknown kind '" + nl.kind + "'");
}

GroundStateOptions ground_state_options(const Scenario& s) {
    GroundStateOptions o;
    o.nodes = s.grid.nodes;
    o.rmax_scale = s.grid.rmax_scale;
    o.stretch = s.grid.stretch;
    o.per_decade = s.grid.per_decade;
    o.s0_tol = s.tolerances.s0_tol;
    o.residual_tol = s.tolerances.residual_tol;
    o.integrator.rtol = s.tolerances.rtol;
    o.integrator.atol = s.tolerances.atol;
    return o;
}

ScanOptions scan_options(const Scenario& s) {
    ScanOptions o;
    o.ground_state = ground_state_options(s);
    o.lambda_tol = s.scan_b.lambda_tol;
    return o;
}

FlowOptions flow_options(const Scenario& s) {
    FlowOptions o;
    o.max_iter = s.minimize_d.max_iter;
    o.grad_tol = s.tolerances.grad_tol;
    return o;
}

ZeroMassOptions zero_mass_options(const Scenario& s) {
    ZeroMassOptions o;
    o.rtol = s.tolerances.rtol;
    o.atol = s.tolerances.atol;
    o.horizon = s.zero_mass.horizon;
    o.nodes = 2 * s.grid.nodes;
    o.pohozaev_tol = s.tolerances.pohozaev_tol;
    return o;
}

std::vector<double> zero_mass_heights(const Scenario& s) {
    return log_space(s.zero_mass.h_lo, s.zero_mass.h_hi, s.zero_mass.heights);
}

}  // namespace nlslab
