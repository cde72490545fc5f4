#ifndef MESOCAT_APP_CONFIG_HPP
#define MESOCAT_APP_CONFIG_HPP

// Flat "key = value" experiment configuration. Lines starting with '#' are
// comments. Recognized keys:
//
//   mode        walk | cat | decohere | oracle-check | alpha-table
//   l1, l2      pulse kick and rotation strengths (dimensionless, >= 0)
//   phi         drive phase in radians; "4.5pi" means 4.5 * pi
//   n           pulse-pair count, or a comma list "1,5,10,20"
//   xi          per-pulse dephasing exponent, or a comma list
//   alpha0_re, alpha0_im   initial coherent amplitude
//   derive      true: take l1, l2, phi, xi from omega, g, Omega1, Omega2, Gamma
//   omega, g, Omega1, Omega2, Gamma   physical rates (rad/s)
//   eta         coupling ratio used to realize (l1, l2) in oracle runs
//   cutoff      Fock cutoff for oracle runs
//   hamiltonian block | effective | full (oracle)
//   fidelity_threshold     oracle-check pass threshold
//   outcome     ground | excited (cat)
//   n_max       alpha-table half range
//   grid        "xmin,xmax,pmin,pmax,nx,np"
//   outputs     comma list of alpha-table, pdist, wigner, diagnostics
//   output_dir  directory for generated files
//   format      csv | json
//   seed        reserved; every protocol here is deterministic

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mesocat/app/table_io.hpp"
#include "mesocat/fock_oracle.hpp"
#include "mesocat/observables.hpp"
#include "mesocat/protocol.hpp"

namespace mesocat::app {

enum class Mode { walk, cat, decohere, oracle_check, alpha_table };

enum class Artifact { alpha_table, pdist, wigner, diagnostics };

struct ExperimentConfig {
  Mode mode = Mode::walk;
  ProtocolParams<double> protocol;
  std::vector<int> n_values;
  std::vector<double> xi_values;
  bool derive = false;
  PhysicalParams<double> physical;
  double eta = 1e-2;
  OracleSettings<double> oracle;
  double fidelity_threshold = 1.0 - 1e-6;
  QubitOutcome outcome = QubitOutcome::ground;
  int n_max = 10;
  std::optional<PhaseSpaceGrid<double>> grid;
  std::vector<Artifact> outputs;
  std::filesystem::path output_dir = "out";
  Format format = Format::csv;
  std::uint64_t seed = 0;
  /// Every key as it was finally resolved, for the report.
  std::map<std::string, std::string> echo;
};

using KeyValues = std::map<std::string, std::string>;

/// Splits the text into keys and values; rejects malformed lines and duplicates.
KeyValues parse_key_values(std::string_view text);

/// Builds a config for `mode`; unknown keys and contradictions raise ConfigError.
ExperimentConfig build_config(Mode mode, const KeyValues& values);

ExperimentConfig load_config(Mode mode, const std::optional<std::filesystem::path>& path,
                             const KeyValues& overrides = {});

double parse_angle(std::string_view text);
PhaseSpaceGrid<double> parse_grid(std::string_view text);

Mode parse_mode(std::string_view text);
const char* to_string(Mode mode);
const char* to_string(Artifact artifact);

}  // namespace mesocat::app

#endif  // MESOCAT_APP_CONFIG_HPP
