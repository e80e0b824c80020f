#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "biorarsa/emit.hpp"
#include "biorarsa/harness.hpp"
#include "biorarsa/schemes.hpp"

namespace biorarsa {

enum class ExperimentKind { trajectory, sweep_delta, sweep_nodes, gain_table, stepsize_trace };

inline constexpr std::array<ExperimentKind, 5> all_experiments = {
    ExperimentKind::trajectory, ExperimentKind::sweep_delta, ExperimentKind::sweep_nodes,
    ExperimentKind::gain_table, ExperimentKind::stepsize_trace,
};

inline std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::trajectory: return "trajectory";
    case ExperimentKind::sweep_delta: return "sweep-delta";
    case ExperimentKind::sweep_nodes: return "sweep-nodes";
    case ExperimentKind::gain_table: return "gain-table";
    case ExperimentKind::stepsize_trace: return "stepsize-trace";
  }
  throw std::invalid_argument("to_string: bad ExperimentKind");
}

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error("config: " + what) {}
};

/// A fully validated run description. Stepsizes are kept both as written
/// (degrees) and converted once (radians); the algorithms consume radians,
/// reports echo the degree values verbatim.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::sweep_delta;
  std::vector<SchemeKind> schemes;
  std::vector<int> node_counts;
  std::vector<double> delta0_deg;
  std::vector<double> delta0_rad;
  std::vector<double> c_stop_values;
  int n_channels = 20;
  int n_sequences = 20;
  AmplitudeModel amplitude_model = AmplitudeModel::rayleigh;
  double power = 1.0;
  int hold_length = 5;
  int max_swim = 5;
  double alpha = 0.5;
  std::uint64_t cap_per_node = 500;
  std::uint64_t base_seed = 1;
  std::string out_path;  // empty means derive from the experiment name
  OutputFormat format = OutputFormat::csv;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

using json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& message) { throw ConfigError(message); }

inline double as_number(const json& value, const std::string& field) {
  if (!value.is_number()) fail("field '" + field + "' must be a number");
  return value.get<double>();
}

inline std::int64_t as_integer(const json& value, const std::string& field) {
  if (!value.is_number_integer()) fail("field '" + field + "' must be an integer");
  return value.get<std::int64_t>();
}

/// Scalars are promoted to one-element lists; lists must be non-empty.
inline std::vector<json> as_list(const json& value, const std::string& field) {
  if (value.is_array()) {
    if (value.empty()) fail("field '" + field + "' must not be empty");
    return std::vector<json>(value.begin(), value.end());
  }
  return {value};
}

template <typename T>
inline void reject_duplicates(const std::vector<T>& values, const std::string& field) {
  std::set<T> seen;
  for (const T& v : values) {
    if (!seen.insert(v).second) fail("field '" + field + "' has duplicate entries");
  }
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  detail::json root;
  try {
    root = detail::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) detail::fail("top level must be a JSON object");

  static const std::set<std::string> known_keys = {
      "experiment", "schemes",     "node_counts", "delta0_deg", "c_stop",
      "channels",   "sequences",   "amplitude_model", "power",  "hold_length",
      "max_swim",   "alpha",       "cap_per_node",    "seed",   "out",
      "format",
  };
  for (const auto& [key, value] : root.items()) {
    if (!known_keys.count(key)) detail::fail("unknown key '" + key + "'");
  }
  for (const char* required : {"experiment", "schemes", "node_counts", "delta0_deg"}) {
    if (!root.contains(required)) detail::fail(std::string("missing required field '") + required + "'");
  }

  RunConfig config;

  {
    const detail::json& value = root.at("experiment");
    if (!value.is_string()) detail::fail("field 'experiment' must be a string");
    const std::string name = value.get<std::string>();
    bool found = false;
    for (const ExperimentKind kind : all_experiments) {
      if (name == to_string(kind)) {
        config.experiment = kind;
        found = true;
        break;
      }
    }
    if (!found) detail::fail("unknown experiment '" + name + "'");
  }

  for (const detail::json& entry : detail::as_list(root.at("schemes"), "schemes")) {
    if (!entry.is_string()) detail::fail("field 'schemes' must hold scheme names");
    try {
      config.schemes.push_back(scheme_from_string(entry.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      detail::fail(std::string("field 'schemes': ") + e.what());
    }
  }
  detail::reject_duplicates(config.schemes, "schemes");

  for (const detail::json& entry : detail::as_list(root.at("node_counts"), "node_counts")) {
    const std::int64_t n = detail::as_integer(entry, "node_counts");
    if (n < 1) detail::fail("field 'node_counts' entries must be >= 1");
    config.node_counts.push_back(static_cast<int>(n));
  }
  detail::reject_duplicates(config.node_counts, "node_counts");

  for (const detail::json& entry : detail::as_list(root.at("delta0_deg"), "delta0_deg")) {
    const double deg = detail::as_number(entry, "delta0_deg");
    if (!(deg > 0.0)) detail::fail("field 'delta0_deg' entries must be positive");
    config.delta0_deg.push_back(deg);
    config.delta0_rad.push_back(deg * deg_to_rad);
  }
  detail::reject_duplicates(config.delta0_deg, "delta0_deg");

  if (root.contains("c_stop")) {
    for (const detail::json& entry : detail::as_list(root.at("c_stop"), "c_stop")) {
      const double c = detail::as_number(entry, "c_stop");
      if (!(c > 0.0) || !(c < 1.0)) detail::fail("field 'c_stop' entries must be in (0, 1)");
      config.c_stop_values.push_back(c);
    }
    detail::reject_duplicates(config.c_stop_values, "c_stop");
  } else {
    config.c_stop_values = {0.75};
  }

  if (root.contains("channels")) {
    const std::int64_t n = detail::as_integer(root.at("channels"), "channels");
    if (n < 1) detail::fail("field 'channels' must be >= 1");
    config.n_channels = static_cast<int>(n);
  }
  if (root.contains("sequences")) {
    const std::int64_t n = detail::as_integer(root.at("sequences"), "sequences");
    if (n < 1) detail::fail("field 'sequences' must be >= 1");
    config.n_sequences = static_cast<int>(n);
  }

  if (root.contains("amplitude_model")) {
    const detail::json& value = root.at("amplitude_model");
    if (!value.is_string()) detail::fail("field 'amplitude_model' must be a string");
    const std::string name = value.get<std::string>();
    if (name == "rayleigh") config.amplitude_model = AmplitudeModel::rayleigh;
    else if (name == "unit") config.amplitude_model = AmplitudeModel::unit;
    else detail::fail("field 'amplitude_model' must be 'rayleigh' or 'unit'");
  }

  if (root.contains("power")) {
    config.power = detail::as_number(root.at("power"), "power");
    if (!(config.power > 0.0)) detail::fail("field 'power' must be positive");
  }
  if (root.contains("hold_length")) {
    const std::int64_t n = detail::as_integer(root.at("hold_length"), "hold_length");
    if (n < 1) detail::fail("field 'hold_length' must be >= 1");
    config.hold_length = static_cast<int>(n);
  }
  if (root.contains("max_swim")) {
    const std::int64_t n = detail::as_integer(root.at("max_swim"), "max_swim");
    if (n < 1) detail::fail("field 'max_swim' must be >= 1");
    config.max_swim = static_cast<int>(n);
  }
  if (root.contains("alpha")) {
    config.alpha = detail::as_number(root.at("alpha"), "alpha");
    if (!(config.alpha > 0.0) || config.alpha > 1.0)
      detail::fail("field 'alpha' must be in (0, 1]");
  }
  if (root.contains("cap_per_node")) {
    const std::int64_t n = detail::as_integer(root.at("cap_per_node"), "cap_per_node");
    if (n < 1) detail::fail("field 'cap_per_node' must be >= 1");
    config.cap_per_node = static_cast<std::uint64_t>(n);
  }
  if (root.contains("seed")) {
    const std::int64_t n = detail::as_integer(root.at("seed"), "seed");
    if (n < 0) detail::fail("field 'seed' must be >= 0");
    config.base_seed = static_cast<std::uint64_t>(n);
  }
  if (root.contains("out")) {
    const detail::json& value = root.at("out");
    if (!value.is_string()) detail::fail("field 'out' must be a string");
    config.out_path = value.get<std::string>();
  }
  if (root.contains("format")) {
    const detail::json& value = root.at("format");
    if (!value.is_string()) detail::fail("field 'format' must be a string");
    const std::string name = value.get<std::string>();
    if (name == "csv") config.format = OutputFormat::csv;
    else if (name == "json") config.format = OutputFormat::json;
    else detail::fail("field 'format' must be 'csv' or 'json'");
  }

  // Shape constraints that depend on the experiment.
  switch (config.experiment) {
    case ExperimentKind::trajectory:
    case ExperimentKind::stepsize_trace:
      if (config.node_counts.size() != 1)
        detail::fail("experiment '" + std::string(to_string(config.experiment)) +
                     "' needs exactly one node count");
      if (config.c_stop_values.size() != 1)
        detail::fail("experiment '" + std::string(to_string(config.experiment)) +
                     "' needs exactly one c_stop");
      break;
    case ExperimentKind::sweep_nodes:
      if (config.node_counts.size() < 2)
        detail::fail("experiment 'sweep-nodes' needs at least two node counts");
      break;
    case ExperimentKind::gain_table:
      if (config.schemes.size() != 2)
        detail::fail("experiment 'gain-table' needs exactly two schemes, baseline first");
      if (config.c_stop_values.size() != 1)
        detail::fail("experiment 'gain-table' needs exactly one c_stop");
      break;
    case ExperimentKind::sweep_delta:
      break;
  }

  return config;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

/// Normalized JSON form of a config. parse_config(emit_config(c).dump())
/// reproduces c exactly, including defaulted fields.
inline nlohmann::ordered_json emit_config(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["experiment"] = std::string(to_string(config.experiment));
  {
    std::vector<std::string> names;
    for (const SchemeKind s : config.schemes) names.emplace_back(to_string(s));
    j["schemes"] = names;
  }
  j["node_counts"] = config.node_counts;
  j["delta0_deg"] = config.delta0_deg;
  j["c_stop"] = config.c_stop_values;
  j["channels"] = config.n_channels;
  j["sequences"] = config.n_sequences;
  j["amplitude_model"] =
      config.amplitude_model == AmplitudeModel::rayleigh ? "rayleigh" : "unit";
  j["power"] = config.power;
  j["hold_length"] = config.hold_length;
  j["max_swim"] = config.max_swim;
  j["alpha"] = config.alpha;
  j["cap_per_node"] = config.cap_per_node;
  j["seed"] = config.base_seed;
  if (!config.out_path.empty()) j["out"] = config.out_path;
  j["format"] = std::string(to_string(config.format));
  return j;
}

}  // namespace biorarsa
