#include "mesocat/app/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "mesocat/errors.hpp"

namespace mesocat::app {

namespace {

std::string trim(std::string_view s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(',', start);
    const auto item = trim(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + s + "' as a number");
  }
}

int parse_int(const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("key '" + key + "': cannot parse '" + s + "' as an integer");
  }
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + s + "'");
}

Artifact parse_artifact(const std::string& s) {
  if (s == "alpha-table") return Artifact::alpha_table;
  if (s == "pdist") return Artifact::pdist;
  if (s == "wigner") return Artifact::wigner;
  if (s == "diagnostics") return Artifact::diagnostics;
  throw ConfigError("unknown output artifact '" + s + "'");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mode",   "l1",     "l2",         "phi",    "n",          "xi",
      "alpha0_re", "alpha0_im", "derive", "omega", "g",       "Omega1",
      "Omega2", "Gamma",  "eta",        "cutoff", "hamiltonian", "fidelity_threshold",
      "outcome", "n_max", "grid",       "outputs", "output_dir", "format",
      "seed"};
  return keys;
}

std::string format_echo(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::walk: return "walk";
    case Mode::cat: return "cat";
    case Mode::decohere: return "decohere";
    case Mode::oracle_check: return "oracle-check";
    case Mode::alpha_table: return "alpha-table";
  }
  return "?";
}

const char* to_string(Artifact artifact) {
  switch (artifact) {
    case Artifact::alpha_table: return "alpha-table";
    case Artifact::pdist: return "pdist";
    case Artifact::wigner: return "wigner";
    case Artifact::diagnostics: return "diagnostics";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  const std::string s = trim(text);
  for (Mode m : {Mode::walk, Mode::cat, Mode::decohere, Mode::oracle_check, Mode::alpha_table}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown mode '" + s + "'");
}

double parse_angle(std::string_view text) {
  std::string s = trim(text);
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    std::string head = trim(s.substr(0, s.size() - 2));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    double factor = 1.0;
    if (head == "-") {
      factor = -1.0;
    } else if (!head.empty() && head != "+") {
      factor = parse_real("phi", head);
    }
    return factor * std::numbers::pi;
  }
  return parse_real("phi", s);
}

PhaseSpaceGrid<double> parse_grid(std::string_view text) {
  const auto parts = split_list(text);
  if (parts.size() != 6) throw ConfigError("grid: expected xmin,xmax,pmin,pmax,nx,np");
  PhaseSpaceGrid<double> g;
  g.x_min = parse_real("grid", parts[0]);
  g.x_max = parse_real("grid", parts[1]);
  g.p_min = parse_real("grid", parts[2]);
  g.p_max = parse_real("grid", parts[3]);
  g.nx = parse_int("grid", parts[4]);
  g.np = parse_int("grid", parts[5]);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  return g;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

ExperimentConfig build_config(Mode mode, const KeyValues& values) {
  for (const auto& [k, v] : values) {
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  auto has = [&](const char* k) { return values.count(k) > 0; };
  auto get = [&](const char* k) -> const std::string& { return values.at(k); };

  ExperimentConfig c;
  if (has("mode") && parse_mode(get("mode")) != mode) {
    throw ConfigError(std::string("config mode '") + get("mode") + "' contradicts subcommand '" +
                      to_string(mode) + "'");
  }
  c.mode = mode;

  // Default parameter set: l1 = 0.1, l2 = 0.01, phi = 9 pi / 2.
  c.protocol.l1 = 0.1;
  c.protocol.l2 = 0.01;
  double phi = 4.5 * std::numbers::pi;
  switch (mode) {
    case Mode::walk: c.n_values = {1, 5, 10, 20}; break;
    case Mode::decohere: c.n_values = {5}; c.xi_values = {0.0, 0.2, 0.5, 1.0}; break;
    case Mode::cat: c.n_values = {10}; break;
    case Mode::oracle_check: c.n_values = {1, 2, 3, 4}; break;
    case Mode::alpha_table: c.n_values = {10}; break;
  }
  if (c.xi_values.empty()) c.xi_values = {0.0};

  if (has("l1")) c.protocol.l1 = parse_real("l1", get("l1"));
  if (has("l2")) c.protocol.l2 = parse_real("l2", get("l2"));
  if (has("phi")) phi = parse_angle(get("phi"));
  if (has("n")) {
    c.n_values.clear();
    for (const auto& item : split_list(get("n"))) c.n_values.push_back(parse_int("n", item));
    if (c.n_values.empty()) throw ConfigError("key 'n': empty list");
  }
  if (has("xi")) {
    c.xi_values.clear();
    for (const auto& item : split_list(get("xi"))) c.xi_values.push_back(parse_real("xi", item));
    if (c.xi_values.empty()) throw ConfigError("key 'xi': empty list");
  }
  c.protocol.alpha0 = {has("alpha0_re") ? parse_real("alpha0_re", get("alpha0_re")) : 0.0,
                       has("alpha0_im") ? parse_real("alpha0_im", get("alpha0_im")) : 0.0};

  if (has("derive")) c.derive = parse_bool("derive", get("derive"));
  const char* physical_keys[] = {"omega", "g", "Omega1", "Omega2", "Gamma"};
  const bool any_physical = std::any_of(std::begin(physical_keys), std::end(physical_keys),
                                        [&](const char* k) { return has(k); });
  if (c.derive) {
    for (const char* k : {"omega", "g", "Omega1", "Omega2"}) {
      if (!has(k)) throw ConfigError(std::string("derive = true requires key '") + k + "'");
    }
    for (const char* k : {"l1", "l2", "phi"}) {
      if (has(k)) throw ConfigError(std::string("key '") + k + "' contradicts derive = true");
    }
    if (has("xi") && has("Gamma")) throw ConfigError("keys 'xi' and 'Gamma' both set with derive = true");
    c.physical.omega = parse_real("omega", get("omega"));
    c.physical.g = parse_real("g", get("g"));
    c.physical.Omega1 = parse_real("Omega1", get("Omega1"));
    c.physical.Omega2 = parse_real("Omega2", get("Omega2"));
    c.physical.Gamma = has("Gamma") ? parse_real("Gamma", get("Gamma")) : 0.0;
    try {
      const auto derived = derive_protocol(c.physical, 0, c.protocol.alpha0);
      c.protocol.l1 = derived.l1;
      c.protocol.l2 = derived.l2;
      phi = derived.phi;
      if (!has("xi")) c.xi_values = {derived.xi};
    } catch (const RegimeViolation& e) {
      throw ConfigError(std::string("regime violation: ") + e.what());
    }
  } else if (any_physical) {
    throw ConfigError("physical rates given without derive = true");
  }
  c.protocol.phi = reduce_angle(phi);

  if (has("eta")) c.eta = parse_real("eta", get("eta"));
  if (!(c.eta > 0) || c.eta > 0.05) throw ConfigError("eta must lie in (0, 0.05]");
  if (has("cutoff")) c.oracle.cutoff = parse_int("cutoff", get("cutoff"));
  if (has("hamiltonian")) {
    const std::string h = trim(get("hamiltonian"));
    if (h == "block") c.oracle.hamiltonian = OracleHamiltonian::block_diagonal;
    else if (h == "effective") c.oracle.hamiltonian = OracleHamiltonian::effective;
    else if (h == "full") c.oracle.hamiltonian = OracleHamiltonian::full;
    else throw ConfigError("hamiltonian must be block, effective or full");
  }
  if (has("fidelity_threshold")) {
    c.fidelity_threshold = parse_real("fidelity_threshold", get("fidelity_threshold"));
  }
  if (has("outcome")) {
    const std::string o = trim(get("outcome"));
    if (o == "ground") c.outcome = QubitOutcome::ground;
    else if (o == "excited") c.outcome = QubitOutcome::excited;
    else throw ConfigError("outcome must be ground or excited");
  }
  c.n_max = *std::max_element(c.n_values.begin(), c.n_values.end());
  if (has("n_max")) c.n_max = parse_int("n_max", get("n_max"));
  if (has("grid")) c.grid = parse_grid(get("grid"));

  switch (mode) {
    case Mode::walk: c.outputs = {Artifact::alpha_table, Artifact::pdist, Artifact::diagnostics}; break;
    case Mode::cat:
    case Mode::decohere: c.outputs = {Artifact::pdist, Artifact::wigner, Artifact::diagnostics}; break;
    case Mode::oracle_check: c.outputs = {Artifact::diagnostics}; break;
    case Mode::alpha_table: c.outputs = {Artifact::alpha_table}; break;
  }
  if (has("outputs")) {
    c.outputs.clear();
    for (const auto& item : split_list(get("outputs"))) c.outputs.push_back(parse_artifact(item));
  }
  if (has("output_dir")) c.output_dir = trim(get("output_dir"));
  if (has("format")) {
    const std::string f = trim(get("format"));
    if (f == "csv") c.format = Format::csv;
    else if (f == "json") c.format = Format::json;
    else throw ConfigError("format must be csv or json");
  }
  if (has("seed")) c.seed = static_cast<std::uint64_t>(parse_int("seed", get("seed")));

  // Validation of the resolved values.
  if (c.protocol.l1 < 0 || c.protocol.l2 < 0) throw ConfigError("l1 and l2 must be >= 0");
  for (int n : c.n_values) {
    if (n < 0) throw ConfigError("n must be >= 0");
    if (mode == Mode::cat && n < 1) throw ConfigError("cat mode needs n >= 1");
  }
  for (double xi : c.xi_values) {
    if (xi < 0) throw ConfigError("xi must be >= 0");
  }
  if (c.n_max < 0) throw ConfigError("n_max must be >= 0");
  if (c.oracle.cutoff < 4) throw ConfigError("cutoff must be >= 4");
  if (mode == Mode::alpha_table &&
      std::find(c.outputs.begin(), c.outputs.end(), Artifact::alpha_table) == c.outputs.end()) {
    throw ConfigError("alpha-table mode must request the alpha-table output");
  }

  c.echo["mode"] = to_string(mode);
  c.echo["l1"] = format_echo(c.protocol.l1);
  c.echo["l2"] = format_echo(c.protocol.l2);
  c.echo["phi"] = format_echo(c.protocol.phi);
  c.echo["alpha0_re"] = format_echo(c.protocol.alpha0.real());
  c.echo["alpha0_im"] = format_echo(c.protocol.alpha0.imag());
  std::string ns, xis, outs;
  for (int n : c.n_values) ns += (ns.empty() ? "" : ",") + std::to_string(n);
  for (double xi : c.xi_values) xis += (xis.empty() ? "" : ",") + format_echo(xi);
  for (Artifact a : c.outputs) outs += (outs.empty() ? "" : ",") + std::string(to_string(a));
  c.echo["n"] = ns;
  c.echo["xi"] = xis;
  c.echo["outputs"] = outs;
  c.echo["format"] = c.format == Format::csv ? "csv" : "json";
  c.echo["output_dir"] = c.output_dir.string();
  c.echo["derive"] = c.derive ? "true" : "false";
  if (mode == Mode::oracle_check) {
    c.echo["eta"] = format_echo(c.eta);
    c.echo["cutoff"] = std::to_string(c.oracle.cutoff);
    c.echo["fidelity_threshold"] = format_echo(c.fidelity_threshold);
  }
  if (mode == Mode::alpha_table || mode == Mode::walk) c.echo["n_max"] = std::to_string(c.n_max);
  if (c.grid) {
    const auto& g = *c.grid;
    c.echo["grid"] = format_echo(g.x_min) + "," + format_echo(g.x_max) + "," + format_echo(g.p_min) +
                     "," + format_echo(g.p_max) + "," + std::to_string(g.nx) + "," + std::to_string(g.np);
  }
  c.echo["seed"] = std::to_string(c.seed);
  return c;
}

ExperimentConfig load_config(Mode mode, const std::optional<std::filesystem::path>& path,
                             const KeyValues& overrides) {
  KeyValues values;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file " + path->string());
    std::stringstream buf;
    buf << in.rdbuf();
    values = parse_key_values(buf.str());
  }
  for (const auto& [k, v] : overrides) values[k] = v;
  return build_config(mode, values);
}

}  // namespace mesocat::app
