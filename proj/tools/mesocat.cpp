// mesocat: command-line front end for the coherent-state walk simulator.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mesocat/app/config.hpp"
#include "mesocat/app/run.hpp"
#include "mesocat/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGate = 3;

struct SharedFlags {
  std::string config;
  std::string out;
  std::string format;
  std::string grid;
  std::optional<std::uint64_t> seed;
};

void add_shared(CLI::App* sub, SharedFlags& f) {
  sub->add_option("--config", f.config, "key = value experiment file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "output directory (overrides output_dir)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--grid", f.grid, "\"xmin,xmax,pmin,pmax,nx,np\"");
  sub->add_option("--seed", f.seed, "reserved; runs are deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-conditioned coherent-state walks of a driven qubit-resonator system"};
  app.require_subcommand(1);
  SharedFlags flags;
  for (const char* name : {"walk", "cat", "decohere", "oracle-check", "alpha-table"}) {
    add_shared(app.add_subcommand(name, std::string("run the ") + name + " pipeline"), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const auto* sub = app.get_subcommands().front();
  try {
    mesocat::app::KeyValues overrides;
    if (!flags.out.empty()) overrides["output_dir"] = flags.out;
    if (!flags.format.empty()) overrides["format"] = flags.format;
    if (!flags.grid.empty()) overrides["grid"] = flags.grid;
    if (flags.seed) overrides["seed"] = std::to_string(*flags.seed);
    std::optional<std::filesystem::path> path;
    if (!flags.config.empty()) path = flags.config;

    const auto config =
        mesocat::app::load_config(mesocat::app::parse_mode(sub->get_name()), path, overrides);
    const auto report = mesocat::app::run(config);
    std::cout << mesocat::app::render_report(report);
    return report.gates_passed ? 0 : kExitGate;
  } catch (const mesocat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mesocat::RegimeViolation& e) {
    std::cerr << "regime violation: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mesocat::Error& e) {
    std::cerr << "numerical gate: " << e.what() << "\n";
    return kExitGate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}
