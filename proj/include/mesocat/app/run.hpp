#ifndef MESOCAT_APP_RUN_HPP
#define MESOCAT_APP_RUN_HPP

#include <map>
#include <string>
#include <vector>

#include "mesocat/app/config.hpp"

namespace mesocat::app {

struct OutputRecord {
  std::string artifact;
  std::string path;
  std::string checksum;
};

struct DiagnosticsEntry {
  std::string label;  // e.g. "n=5 xi=0.2"
  std::map<std::string, double> values;
};

struct RunReport {
  std::map<std::string, std::string> config;
  std::vector<DiagnosticsEntry> diagnostics;
  std::vector<OutputRecord> outputs;
  std::vector<std::string> warnings;
  /// Human-readable result lines (oracle verdicts and similar).
  std::vector<std::string> lines;
  double wall_time_s = 0;
  /// False when a numerical gate (oracle fidelity threshold) failed.
  bool gates_passed = true;
};

/// Executes the configured pipeline, writes data files plus report.json into
/// config.output_dir, and returns the report.
RunReport run(const ExperimentConfig& config);

/// Rows j = -n_max..n_max of (j, Re alpha_j, Im alpha_j, theta_j).
Table alpha_table(const ProtocolParams<double>& pp, int n_max);

std::string render_report(const RunReport& report);

}  // namespace mesocat::app

#endif  // MESOCAT_APP_RUN_HPP
