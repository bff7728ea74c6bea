#pragma once

// Run configuration for the command-line front end. The on-disk format is a
// JSON document whose sections mirror ChainSpec / CouplingSpec; see README.

#include "xxzent/experiments.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace xxzent {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { Spectrum, Effective, Evolve, Sweep, Critical, Scaling, Fullcheck };

inline const std::vector<std::pair<Subcommand, std::string>>& subcommand_names() {
  static const std::vector<std::pair<Subcommand, std::string>> names = {
      {Subcommand::Spectrum, "spectrum"}, {Subcommand::Effective, "effective"},
      {Subcommand::Evolve, "evolve"},     {Subcommand::Sweep, "sweep"},
      {Subcommand::Critical, "critical"}, {Subcommand::Scaling, "scaling"},
      {Subcommand::Fullcheck, "fullcheck"}};
  return names;
}

inline std::string to_string(Subcommand s) {
  for (const auto& [k, v] : subcommand_names())
    if (k == s) return v;
  return "?";
}

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const { return uniform_grid(start, stop, step); }
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Spectrum;
  ChainSpec chain{};
  CouplingSpec coupling{};
  InitialState initial_state = InitialState::Basis01;
  GridSpec field_grid{0.0, 4.0, 0.02};
  GridSpec time_grid{0.0, 50.0, 0.05};
  ScanRange scan{};
  std::vector<int> scaling_sizes{2, 4, 6, 8};
  std::vector<int> period_sizes{4, 6};
  double period_tolerance = 0.2;
  std::string output_dir = "out";
  unsigned workers = 1;
  std::optional<long long> seed;
  int max_total_spins = kDefaultMaxTotalSpins;
};

namespace detail {

using nlohmann::json;

class ConfigReader {
 public:
  ConfigReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  /// Rejects keys that were never looked up.
  void finish() const {
    for (const auto& [key, _] : node_.items())
      if (!seen_.count(key)) fail(qualify(key), "unknown field");
  }

  ConfigReader(const ConfigReader&) = delete;
  ConfigReader& operator=(const ConfigReader&) = delete;

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  const json& at(const std::string& key) { return node_.at(key); }

  std::string qualify(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void read(const std::string& key, double& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number()) fail(qualify(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(qualify(key), "must be finite");
  }

  void read(const std::string& key, int& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_number_integer()) fail(qualify(key), "expected an integer");
    out = v.get<int>();
  }

  void read(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_string()) fail(qualify(key), "expected a string");
    out = v.get<std::string>();
  }

  void read(const std::string& key, std::vector<int>& out) {
    if (!has(key)) return;
    const auto& v = at(key);
    if (!v.is_array()) fail(qualify(key), "expected an array of integers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail(qualify(key), "expected an array of integers");
      out.push_back(e.get<int>());
    }
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Enum>
Enum parse_enum(const std::string& field, const std::string& value,
                const std::vector<std::pair<Enum, std::string>>& options) {
  std::string allowed;
  for (const auto& [e, name] : options) {
    if (name == value) return e;
    allowed += (allowed.empty() ? "" : ", ") + name;
  }
  ConfigReader::fail(field, "unknown value '" + value + "' (expected one of: " + allowed + ")");
}

inline void read_grid(ConfigReader& parent, const std::string& key, GridSpec& grid) {
  if (!parent.has(key)) return;
  ConfigReader r(parent.at(key), parent.qualify(key));
  r.read("start", grid.start);
  r.read("stop", grid.stop);
  r.read("step", grid.step);
  r.finish();
  if (!(grid.step > 0.0)) ConfigReader::fail(r.qualify("step"), "must be positive");
  if (grid.stop < grid.start) ConfigReader::fail(r.qualify("stop"), "must be >= start");
  if ((grid.stop - grid.start) / grid.step > 1e7) ConfigReader::fail(r.qualify("step"), "grid has more than 1e7 points");
}

}  // namespace detail

/// Parses and validates a configuration document. A run manifest (an object
/// with a "config" member) is accepted and its embedded config is used.
inline RunConfig parse_config(const nlohmann::json& doc) {
  using detail::ConfigReader;
  if (doc.is_null() || (doc.is_object() && doc.empty())) throw ConfigError("config: document is empty");
  if (doc.is_object() && doc.contains("config") && doc.contains("tool")) return parse_config(doc.at("config"));

  RunConfig cfg;
  ConfigReader root(doc, "");
  if (!root.has("subcommand")) ConfigReader::fail("subcommand", "required field is missing");
  std::string sub;
  root.read("subcommand", sub);
  cfg.subcommand = detail::parse_enum("subcommand", sub, subcommand_names());

  if (root.has("chain")) {
    ConfigReader r(root.at("chain"), "chain");
    r.read("N", cfg.chain.sites);
    r.read("J", cfg.chain.coupling);
    r.read("Delta", cfg.chain.anisotropy);
    r.read("B", cfg.chain.field);
    std::string boundary = to_string(cfg.chain.boundary);
    r.read("boundary", boundary);
    r.finish();
    cfg.chain.boundary = detail::parse_enum<Boundary>(
        "chain.boundary", boundary, {{Boundary::Open, "open"}, {Boundary::Periodic, "periodic"}});
    if (cfg.chain.sites < 2) ConfigReader::fail("chain.N", "must be >= 2");
    if (cfg.chain.coupling == 0.0) ConfigReader::fail("chain.J", "must be nonzero");
  }

  if (root.has("coupling")) {
    ConfigReader r(root.at("coupling"), "coupling");
    r.read("Jp", cfg.coupling.strength);
    std::string topology = to_string(cfg.coupling.topology);
    std::string convention = to_string(cfg.coupling.convention);
    r.read("topology", topology);
    r.read("convention", convention);
    r.read("sites_a", cfg.coupling.sites_a);
    r.read("sites_b", cfg.coupling.sites_b);
    r.finish();
    cfg.coupling.topology = detail::parse_enum<Topology>(
        "coupling.topology", topology,
        {{Topology::AllSites, "all_sites"}, {Topology::EndSites, "end_sites"}, {Topology::Explicit, "explicit"}});
    cfg.coupling.convention = detail::parse_enum<Convention>(
        "coupling.convention", convention,
        {{Convention::PauliDot, "pauli"}, {Convention::SpinHalfDot, "spin_half"}});
    if (cfg.coupling.topology == Topology::Explicit) {
      for (const auto* key : {"sites_a", "sites_b"}) {
        const auto& list = std::string(key) == "sites_a" ? cfg.coupling.sites_a : cfg.coupling.sites_b;
        if (list.empty()) ConfigReader::fail(std::string("coupling.") + key, "explicit topology needs a nonempty site list");
        for (int s : list)
          if (s < 1 || s > cfg.chain.sites)
            ConfigReader::fail(std::string("coupling.") + key,
                               "site " + std::to_string(s) + " outside [1, " + std::to_string(cfg.chain.sites) + "]");
      }
    } else if (!cfg.coupling.sites_a.empty() || !cfg.coupling.sites_b.empty()) {
      ConfigReader::fail("coupling.sites_a", "site lists are only valid with topology 'explicit'");
    }
  }

  std::string initial = to_string(cfg.initial_state);
  root.read("initial_state", initial);
  cfg.initial_state = detail::parse_enum<InitialState>(
      "initial_state", initial,
      {{InitialState::Basis01, "basis_01"}, {InitialState::BellPlus0110, "bell_01_10"},
       {InitialState::BellPlus0011, "bell_00_11"}});

  if (root.has("grids")) {
    ConfigReader r(root.at("grids"), "grids");
    detail::read_grid(r, "B", cfg.field_grid);
    detail::read_grid(r, "t", cfg.time_grid);
    r.finish();
  }

  if (root.has("scan")) {
    ConfigReader r(root.at("scan"), "scan");
    r.read("B_min", cfg.scan.b_min);
    r.read("B_max", cfg.scan.b_max);
    r.read("grid_step", cfg.scan.search.grid_step);
    r.read("bracket_tol", cfg.scan.search.bracket_tol);
    r.finish();
    if (!(cfg.scan.b_min < cfg.scan.b_max)) ConfigReader::fail("scan.B_max", "must exceed B_min");
    if (!(cfg.scan.search.grid_step > 0.0)) ConfigReader::fail("scan.grid_step", "must be positive");
    if (!(cfg.scan.search.bracket_tol > 0.0)) ConfigReader::fail("scan.bracket_tol", "must be positive");
  }

  if (root.has("scaling")) {
    ConfigReader r(root.at("scaling"), "scaling");
    r.read("N_list", cfg.scaling_sizes);
    r.read("period_N_list", cfg.period_sizes);
    r.read("tolerance", cfg.period_tolerance);
    r.finish();
    for (const auto* list : {&cfg.scaling_sizes, &cfg.period_sizes})
      for (int n : *list)
        if (n < 2 || n % 2 != 0) ConfigReader::fail("scaling.N_list", "entries must be even and >= 2");
    if (cfg.scaling_sizes.size() < 3) ConfigReader::fail("scaling.N_list", "needs at least 3 entries");
  }

  root.read("output_dir", cfg.output_dir);
  int workers = static_cast<int>(cfg.workers);
  root.read("workers", workers);
  if (workers < 1) ConfigReader::fail("workers", "must be >= 1");
  cfg.workers = static_cast<unsigned>(workers);
  root.read("max_total_spins", cfg.max_total_spins);
  if (cfg.max_total_spins < 3 || cfg.max_total_spins > 16)
    ConfigReader::fail("max_total_spins", "must lie in [3, 16]");
  if (root.has("seed")) {
    if (!root.at("seed").is_number_integer()) ConfigReader::fail("seed", "expected an integer");
    cfg.seed = root.at("seed").get<long long>();
  }
  root.finish();

  const bool needs_coupling = cfg.subcommand != Subcommand::Spectrum && cfg.subcommand != Subcommand::Critical;
  if (needs_coupling && cfg.chain.sites + 2 > cfg.max_total_spins)
    ConfigReader::fail("chain.N", "N + 2 = " + std::to_string(cfg.chain.sites + 2) +
                                      " exceeds max_total_spins = " + std::to_string(cfg.max_total_spins));
  if (!needs_coupling && cfg.chain.sites > cfg.max_total_spins)
    ConfigReader::fail("chain.N", "exceeds max_total_spins");
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("config: file is empty");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Fully resolved configuration, suitable for re-running.
inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["subcommand"] = to_string(cfg.subcommand);
  j["chain"] = {{"N", cfg.chain.sites},
                {"J", cfg.chain.coupling},
                {"Delta", cfg.chain.anisotropy},
                {"B", cfg.chain.field},
                {"boundary", to_string(cfg.chain.boundary)}};
  j["coupling"] = {{"Jp", cfg.coupling.strength},
                   {"topology", to_string(cfg.coupling.topology)},
                   {"convention", to_string(cfg.coupling.convention)}};
  if (cfg.coupling.topology == Topology::Explicit) {
    j["coupling"]["sites_a"] = cfg.coupling.sites_a;
    j["coupling"]["sites_b"] = cfg.coupling.sites_b;
  }
  j["initial_state"] = to_string(cfg.initial_state);
  auto grid = [](const GridSpec& g) { return nlohmann::json{{"start", g.start}, {"stop", g.stop}, {"step", g.step}}; };
  j["grids"] = {{"B", grid(cfg.field_grid)}, {"t", grid(cfg.time_grid)}};
  j["scan"] = {{"B_min", cfg.scan.b_min},
               {"B_max", cfg.scan.b_max},
               {"grid_step", cfg.scan.search.grid_step},
               {"bracket_tol", cfg.scan.search.bracket_tol}};
  j["scaling"] = {{"N_list", cfg.scaling_sizes},
                  {"period_N_list", cfg.period_sizes},
                  {"tolerance", cfg.period_tolerance}};
  j["output_dir"] = cfg.output_dir;
  j["workers"] = cfg.workers;
  j["max_total_spins"] = cfg.max_total_spins;
  if (cfg.seed) j["seed"] = *cfg.seed;
  return j;
}

}  // namespace xxzent
