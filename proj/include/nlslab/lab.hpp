#pragma once

/// @file lab.hpp
/// @brief Runs a scenario: dispatches to the modules and assembles
/// summary.json, the per-experiment CSV files and MANIFEST.txt.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlslab/scenario.hpp"

namespace nlslab {

/// A module failure, prefixed with the experiment that raised it.
class ExperimentError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ReportBundle {
    std::string out_dir;
    nlohmann::ordered_json summary;
    std::map<std::string, std::string> csv;  ///< file name -> contents
    std::vector<std::string> tags;           ///< results exercised, e.g. "sign-dichotomy"
};

/// Computes everything without touching the file system. Throws ConfigError
/// when validate() reports errors and ExperimentError on module failures.
ReportBundle execute(const Scenario& s);
/// Writes summary.json, the CSV files and MANIFEST.txt into bundle.out_dir.
void write_report(const ReportBundle& bundle);
/// execute + write_report.
ReportBundle run(const Scenario& s);

/// Verdict string of a bundle: the closed-enumeration value most relevant to
/// the experiment (case tag, flow verdict, zero-mass verdict, ...).
std::string headline(const ReportBundle& bundle);

}  // namespace nlslab
