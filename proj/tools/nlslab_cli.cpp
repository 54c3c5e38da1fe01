// nlslab: command-line front end. One subcommand per experiment, plus
// `validate`, which checks a configuration and echoes the full scenario.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlslab/lab.hpp"
#include "nlslab/scenario.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    bool refine = false;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> set;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "scenario file (INI sections per module)")->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_flag("--refine", f.refine, "double the resolution (nodes, samples, heights)");
    cmd->add_option("--seed", f.seed, "seed for randomized initializations");
    cmd->add_option("--set", f.set, "override, section.key=value (repeatable)");
}

nlslab::Scenario load(const Flags& f, std::optional<nlslab::Experiment> exp) {
    std::vector<nlslab::Override> ov;
    for (const auto& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw nlslab::ConfigError(kv, 0, "--set expects section.key=value");
        ov.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    nlslab::Scenario s = f.config.empty() ? nlslab::parse_scenario("", ov) : nlslab::load_scenario(f.config, ov);
    if (exp) s.experiment = *exp;
    if (!f.out.empty()) s.out_dir = f.out;
    if (f.refine) s.refine = true;
    if (f.seed) s.seed = *f.seed;
    return s;
}

void print(const std::vector<nlslab::Diagnostic>& diags) {
    for (const auto& d : diags)
        std::cerr << (d.severity == nlslab::Diagnostic::Severity::Error ? "error: " : "warning: ") << d.field << ": "
                  << d.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normalized solutions of mass-critical NLS: numerical experiments"};
    app.require_subcommand(1);

    Flags flags;
    std::optional<nlslab::Experiment> chosen;
    bool validate_only = false;

    for (auto e : {nlslab::Experiment::GroundState, nlslab::Experiment::ScanB, nlslab::Experiment::MinimizeD,
                   nlslab::Experiment::Legendre, nlslab::Experiment::ZeroMass, nlslab::Experiment::Examples,
                   nlslab::Experiment::Stability}) {
        auto* cmd = app.add_subcommand(nlslab::to_string(e), "run the " + nlslab::to_string(e) + " experiment");
        add_common(cmd, flags);
        cmd->callback([&chosen, e] { chosen = e; });
    }
    auto* val = app.add_subcommand("validate", "check a scenario and print it in full");
    add_common(val, flags);
    val->callback([&validate_only] { validate_only = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const nlslab::Scenario s = load(flags, chosen);
        const auto diags = nlslab::validate(s);
        print(diags);
        if (validate_only) {
            std::cout << nlslab::to_ini(s);
            return nlslab::has_errors(diags) ? 1 : 0;
        }
        if (nlslab::has_errors(diags)) return 1;
        const nlslab::ReportBundle b = nlslab::run(s);
        std::cout << nlslab::to_string(s.experiment) << ": " << nlslab::headline(b) << " -> " << b.out_dir << "\n";
        return 0;
    } catch (const nlslab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
