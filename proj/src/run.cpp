#include "mesocat/app/run.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mesocat/decoherence.hpp"
#include "mesocat/errors.hpp"
#include "mesocat/fock_oracle.hpp"
#include "mesocat/observables.hpp"
#include "mesocat/protocol.hpp"

namespace mesocat::app {

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool wants(const ExperimentConfig& c, Artifact a) {
  return std::find(c.outputs.begin(), c.outputs.end(), a) != c.outputs.end();
}

Table density_table(const GridField<double>& field, const std::string& what) {
  Table t;
  t.comment = what + "; columns: x (dimensionless position quadrature), density (normalized to unit integral)";
  t.columns = {"x", "density"};
  const auto xs = field.grid.xs();
  t.rows.reserve(static_cast<std::size_t>(xs.size()));
  for (Eigen::Index i = 0; i < xs.size(); ++i) t.rows.push_back({xs(i), field.values(i, 0)});
  return t;
}

Table wigner_table(const GridField<double>& field, const std::string& what) {
  Table t;
  t.comment = what + "; columns: x, p (quadratures, hbar = 1), W (Wigner quasi-probability); x-major order";
  t.columns = {"x", "p", "W"};
  const auto xs = field.grid.xs();
  const auto ps = field.grid.ps();
  t.rows.reserve(static_cast<std::size_t>(xs.size() * ps.size()));
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    for (Eigen::Index k = 0; k < ps.size(); ++k) t.rows.push_back({xs(i), ps(k), field.values(i, k)});
  return t;
}

class Emitter {
 public:
  Emitter(const ExperimentConfig& c, RunReport& r) : config_(c), report_(r) {}

  void emit(Artifact artifact, const std::string& stem, const Table& table) {
    const auto path = config_.output_dir / (stem + extension(config_.format));
    const auto sum = write_table(table, path, config_.format);
    report_.outputs.push_back({to_string(artifact), path.string(), sum});
  }

 private:
  const ExperimentConfig& config_;
  RunReport& report_;
};

std::map<std::string, double> diagnostics_values(const Diagnostics<double>& d) {
  return {{"mean_x", d.mean_x},
          {"mean_p", d.mean_p},
          {"var_x", d.var_x},
          {"var_p", d.var_p},
          {"negativity_volume", d.negativity_volume},
          {"min_W", d.min_W}};
}

PhaseSpaceGrid<double> grid_for(const ExperimentConfig& c,
                                const std::vector<CoherentLabel<double>>& labels) {
  return c.grid ? *c.grid : default_grid_for(labels);
}

void absorb_warnings(RunReport& report, const std::string& label,
                     const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) report.warnings.push_back(label + ": " + w);
}

void run_walk(const ExperimentConfig& c, RunReport& report, Emitter& out) {
  for (int n : c.n_values) {
    auto pp = c.protocol;
    pp.n = n;
    const auto state = walk_state(pp);
    const auto grid = grid_for(c, state.labels());
    const std::string label = "n=" + std::to_string(n);
    const std::string what = "walk state after " + std::to_string(n) + " pulse pairs";
    if (wants(c, Artifact::pdist)) {
      out.emit(Artifact::pdist, "pdist_n" + std::to_string(n),
               density_table(position_density(state, grid), "position density of " + what));
    }
    if (wants(c, Artifact::wigner)) {
      out.emit(Artifact::wigner, "wigner_n" + std::to_string(n),
               wigner_table(wigner_pure(state, grid), "Wigner function of " + what));
    }
    if (wants(c, Artifact::diagnostics)) {
      const auto d = diagnostics(state, grid);
      auto values = diagnostics_values(d);
      values["purity"] = 1.0;
      values["success_probability"] = conditioned_walk(pp).record_probability;
      report.diagnostics.push_back({label, values});
      absorb_warnings(report, label, d.warnings);
    }
  }
  if (wants(c, Artifact::alpha_table)) {
    out.emit(Artifact::alpha_table, "alpha_table", alpha_table(c.protocol, c.n_max));
  }
}

void run_decohere(const ExperimentConfig& c, RunReport& report, Emitter& out) {
  for (int n : c.n_values) {
    for (double xi : c.xi_values) {
      auto pp = c.protocol;
      pp.n = n;
      pp.xi = xi;
      const auto rho = decohered_walk(pp);
      const auto grid = grid_for(c, rho.labels);
      const std::string stem = "n" + std::to_string(n) + "_xi" + short_number(xi);
      const std::string label = "n=" + std::to_string(n) + " xi=" + short_number(xi);
      const std::string what = "dephased walk state (" + label + ")";
      if (wants(c, Artifact::pdist)) {
        out.emit(Artifact::pdist, "pdist_" + stem,
                 density_table(position_density(rho, grid), "position density of " + what));
      }
      if (wants(c, Artifact::wigner)) {
        out.emit(Artifact::wigner, "wigner_" + stem,
                 wigner_table(wigner_mixed(rho, grid), "Wigner function of " + what));
      }
      if (wants(c, Artifact::diagnostics)) {
        const auto d = diagnostics(rho, grid);
        auto values = diagnostics_values(d);
        values["purity"] = purity(rho);
        report.diagnostics.push_back({label, values});
        absorb_warnings(report, label, d.warnings);
      }
    }
  }
  if (wants(c, Artifact::alpha_table)) {
    out.emit(Artifact::alpha_table, "alpha_table", alpha_table(c.protocol, c.n_max));
  }
}

void run_cat(const ExperimentConfig& c, RunReport& report, Emitter& out) {
  for (int n : c.n_values) {
    for (double xi : c.xi_values) {
      auto pp = c.protocol;
      pp.n = n;
      pp.xi = xi;
      const auto measured = cat_measurement(pp, c.outcome);
      const double suppression = 2.0 * n * xi;
      const auto rho = cat_ensemble(pp, suppression, c.outcome);
      const auto grid = grid_for(c, rho.labels);
      const std::string stem = "cat_n" + std::to_string(n) + "_xi" + short_number(xi);
      const std::string label = "n=" + std::to_string(n) + " xi=" + short_number(xi);
      const std::string what = "cat state (" + label + ", outcome " + to_string(c.outcome) + ")";
      if (wants(c, Artifact::pdist)) {
        out.emit(Artifact::pdist, "pdist_" + stem,
                 density_table(position_density(rho, grid), "position density of " + what));
      }
      if (wants(c, Artifact::wigner)) {
        out.emit(Artifact::wigner, "wigner_" + stem,
                 wigner_table(wigner_mixed(rho, grid), "Wigner function of " + what));
      }
      if (wants(c, Artifact::diagnostics)) {
        const auto d = diagnostics(rho, grid);
        auto values = diagnostics_values(d);
        values["purity"] = purity(rho);
        values["success_probability"] = measured.probability;
        values["cross_suppression"] = std::exp(-suppression);
        values["re_beta_plus"] = rho.labels[1].amplitude.real();
        values["im_beta_plus"] = rho.labels[1].amplitude.imag();
        report.diagnostics.push_back({label, values});
        absorb_warnings(report, label, d.warnings);
      }
    }
  }
}

void run_oracle_check(const ExperimentConfig& c, RunReport& report) {
  const auto physical =
      c.derive ? c.physical : physical_for(c.protocol.l1, c.protocol.l2, c.eta);
  try {
    check_regime(physical);
  } catch (const RegimeViolation& e) {
    throw ConfigError(std::string("regime violation: ") + e.what());
  }
  absorb_warnings(report, "oracle", regime_warnings(physical));
  const char* ham = c.oracle.hamiltonian == OracleHamiltonian::block_diagonal ? "block"
                    : c.oracle.hamiltonian == OracleHamiltonian::effective    ? "effective"
                                                                              : "full";
  for (int n : c.n_values) {
    const auto pp = derive_protocol(physical, n, c.protocol.alpha0);
    const auto closed = walk_state(pp);
    const auto run = run_walk_oracle(physical, n, c.protocol.alpha0, c.oracle);
    const double fid = fidelity(run.oscillator, closed);
    const bool pass = fid >= c.fidelity_threshold;
    report.gates_passed = report.gates_passed && pass;
    char line[200];
    std::snprintf(line, sizeof line, "n=%d hamiltonian=%s fidelity=%.12f (threshold %.6f) %s", n,
                  ham, fid, c.fidelity_threshold, pass ? "pass" : "FAIL");
    report.lines.push_back(line);
    report.diagnostics.push_back(
        {"n=" + std::to_string(n),
         {{"fidelity", fid},
          {"infidelity", 1.0 - fid},
          {"success_probability_oracle", run.record_probability},
          {"success_probability_closed", conditioned_walk(pp).record_probability},
          {"eta", physical.eta()},
          {"l1", pp.l1},
          {"l2", pp.l2},
          {"phi", pp.phi}}});
  }
}

nlohmann::json report_json(const RunReport& r) {
  nlohmann::json j;
  j["config"] = r.config;
  j["diagnostics"] = nlohmann::json::array();
  for (const auto& d : r.diagnostics) j["diagnostics"].push_back({{"label", d.label}, {"values", d.values}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : r.outputs) {
    j["outputs"].push_back({{"artifact", o.artifact}, {"path", o.path}, {"checksum", o.checksum}});
  }
  j["warnings"] = r.warnings;
  j["lines"] = r.lines;
  j["wall_time_s"] = r.wall_time_s;
  j["gates_passed"] = r.gates_passed;
  return j;
}

}  // namespace

Table alpha_table(const ProtocolParams<double>& pp, int n_max) {
  if (n_max < 0) throw std::invalid_argument("alpha_table: n_max must be >= 0");
  const LabelLadder<double> ladder(pp.l1, pp.l2, pp.alpha0, n_max);
  Table t;
  t.comment = "coherent labels alpha_j = O(l1,l2)^j|alpha0> (O(-l1,-l2)^|j| for j<0) with l1=" +
              short_number(pp.l1) + " l2=" + short_number(pp.l2) +
              "; columns: j, re_alpha, im_alpha, theta (accumulated phase, radians)";
  t.columns = {"j", "re_alpha", "im_alpha", "theta"};
  for (int j = -n_max; j <= n_max; ++j) {
    const auto& l = ladder.at(j);
    t.rows.push_back({double(j), l.amplitude.real(), l.amplitude.imag(), l.phase});
  }
  return t;
}

RunReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config.echo;

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    throw ConfigError("output_dir '" + config.output_dir.string() + "' is not writable");
  }
  if (config.derive) absorb_warnings(report, "regime", regime_warnings(config.physical));

  Emitter out(config, report);
  switch (config.mode) {
    case Mode::walk: run_walk(config, report, out); break;
    case Mode::decohere: run_decohere(config, report, out); break;
    case Mode::cat: run_cat(config, report, out); break;
    case Mode::oracle_check: run_oracle_check(config, report); break;
    case Mode::alpha_table:
      out.emit(Artifact::alpha_table, "alpha_table", alpha_table(config.protocol, config.n_max));
      break;
  }

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto path = config.output_dir / "report.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << report_json(report).dump(2) << "\n";
  return report;
}

std::string render_report(const RunReport& r) {
  std::string s;
  char buf[256];
  for (const auto& line : r.lines) s += line + "\n";
  for (const auto& d : r.diagnostics) {
    s += "[" + d.label + "]";
    for (const auto& [k, v] : d.values) {
      std::snprintf(buf, sizeof buf, " %s=%.6g", k.c_str(), v);
      s += buf;
    }
    s += "\n";
  }
  for (const auto& o : r.outputs) s += "wrote " + o.path + " (" + o.artifact + ", fnv1a " + o.checksum + ")\n";
  for (const auto& w : r.warnings) s += "warning: " + w + "\n";
  std::snprintf(buf, sizeof buf, "wall time %.3f s\n", r.wall_time_s);
  s += buf;
  return s;
}

}  // namespace mesocat::app
