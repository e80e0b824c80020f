#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biorarsa/config.hpp"
#include "biorarsa/emit.hpp"
#include "biorarsa/harness.hpp"

namespace biorarsa {

struct RunOptions {
  int threads = 0;
  bool strict = false;             // fail if any trial misses the target
  bool full_scale = false;         // 100 channels x 100 sequences
  std::string trials_dump_path;    // per-trial dump for the sweep experiments
};

struct EmittedFile {
  std::string path;
  std::string content;
};

namespace detail {

inline ExperimentGrid grid_from_config(const RunConfig& config, const RunOptions& options) {
  ExperimentGrid grid;
  grid.schemes = config.schemes;
  grid.node_counts = config.node_counts;
  grid.delta0_values = config.delta0_rad;
  grid.delta0_degrees = config.delta0_deg;
  grid.c_stop_values = config.c_stop_values;
  grid.n_channels = options.full_scale ? 100 : config.n_channels;
  grid.n_sequences = options.full_scale ? 100 : config.n_sequences;
  grid.base_seed = config.base_seed;
  grid.amplitude_model = config.amplitude_model;
  grid.power = config.power;
  return grid;
}

inline HarnessParams harness_from_config(const RunConfig& config) {
  HarnessParams params;
  params.hold_length = config.hold_length;
  params.max_swim = config.max_swim;
  params.alpha = config.alpha;
  params.cap_per_node = config.cap_per_node;
  return params;
}

inline std::string output_path(const RunConfig& config) {
  if (!config.out_path.empty()) return config.out_path;
  return std::string(to_string(config.experiment)) + "." + std::string(to_string(config.format));
}

inline std::pair<std::string, std::string> split_extension(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return {path, ""};
  return {path.substr(0, dot), path.substr(dot)};
}

inline std::string with_tag(const std::string& path, const std::string& tag) {
  const auto [stem, ext] = split_extension(path);
  return stem + "_" + tag + ext;
}

inline std::string degree_tag(double deg) {
  std::string s = format_double(deg);
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return "d" + s;
}

/// Run the single illustrative trial used by the trajectory and
/// stepsize-trace experiments: channel 0 and sequence 0 of the cell.
inline std::pair<TrialRecord, double> single_trial(const RunConfig& config, SchemeKind scheme,
                                                   std::size_t delta_index,
                                                   const RunOptions& options) {
  const int nodes = config.node_counts.front();
  const double c_stop = config.c_stop_values.front();
  const ChannelRealization channel =
      generate_channel(static_cast<std::size_t>(nodes), config.power, config.amplitude_model,
                       channel_seed(config.base_seed, nodes, config.amplitude_model, 0));
  SchemeParams params;
  params.delta0 = config.delta0_rad[delta_index];
  params.hold_length = config.hold_length;
  params.max_swim = config.max_swim;
  params.alpha = config.alpha;
  params.c_stop = c_stop;
  params.max_transmissions = config.cap_per_node * static_cast<std::uint64_t>(nodes);

  const CellKey key{scheme, nodes, config.delta0_rad[delta_index],
                    config.delta0_deg[delta_index], c_stop};
  TrialRecord record =
      run_trial(scheme, channel, params, trial_seed(config.base_seed, key, 0, 0));
  if (options.strict && !record.converged) {
    throw std::runtime_error("trial for scheme '" + std::string(to_string(scheme)) +
                             "' hit the transmission cap before the target");
  }
  return {std::move(record), c_stop * optimal_magnitude(channel)};
}

/// File name for one (scheme, stepsize) combination: suffixes are added only
/// along the axes that actually vary.
inline std::string combination_path(const RunConfig& config, SchemeKind scheme, double deg) {
  std::string path = output_path(config);
  if (config.schemes.size() > 1) path = with_tag(path, std::string(to_string(scheme)));
  if (config.delta0_deg.size() > 1) path = with_tag(path, degree_tag(deg));
  return path;
}

inline std::vector<EmittedFile> render_per_trial_experiment(const RunConfig& config,
                                                            const RunOptions& options) {
  std::vector<EmittedFile> files;
  for (const SchemeKind scheme : config.schemes) {
    for (std::size_t d = 0; d < config.delta0_deg.size(); ++d) {
      const auto [record, target] = single_trial(config, scheme, d, options);
      std::ostringstream out;
      if (config.experiment == ExperimentKind::trajectory) {
        if (config.format == OutputFormat::csv) write_trajectory_csv(out, record, target);
        else write_json(out, trajectory_json(record, target));
      } else {
        if (config.format == OutputFormat::csv) write_stepsize_csv(out, record);
        else write_json(out, stepsize_json(record));
      }
      files.push_back({combination_path(config, scheme, config.delta0_deg[d]), out.str()});
    }
  }
  return files;
}

inline std::vector<EmittedFile> render_sweep_delta(const RunConfig& config,
                                                   const GridResult& result) {
  std::vector<EmittedFile> files;
  std::ostringstream out;
  emit_results(out, result.stats, config.format);
  files.push_back({output_path(config), out.str()});
  return files;
}

inline std::vector<FitRow> scalability_fits(const RunConfig& config, const AggregateStats& stats) {
  std::vector<FitRow> fits;
  for (const SchemeKind scheme : config.schemes) {
    for (std::size_t d = 0; d < config.delta0_rad.size(); ++d) {
      for (const double c_stop : config.c_stop_values) {
        std::vector<std::pair<double, double>> points;
        for (const int nodes : config.node_counts) {
          const CellStats* cell = stats.find(scheme, nodes, config.delta0_rad[d], c_stop);
          if (cell == nullptr) throw std::logic_error("scalability_fits: missing cell");
          points.emplace_back(static_cast<double>(nodes), cell->mean_transmissions);
        }
        fits.push_back({scheme, config.delta0_deg[d], c_stop, linear_fit(points)});
      }
    }
  }
  return fits;
}

inline std::vector<EmittedFile> render_sweep_nodes(const RunConfig& config,
                                                   const GridResult& result) {
  const std::vector<FitRow> fits = scalability_fits(config, result.stats);
  std::vector<EmittedFile> files;
  if (config.format == OutputFormat::csv) {
    std::ostringstream cells;
    write_cells_csv(cells, result.stats);
    files.push_back({output_path(config), cells.str()});
    std::ostringstream fit_out;
    write_fits_csv(fit_out, fits);
    files.push_back({with_tag(output_path(config), "fit"), fit_out.str()});
  } else {
    nlohmann::ordered_json j;
    j["cells"] = cells_json(result.stats);
    j["fits"] = fits_json(fits);
    std::ostringstream out;
    write_json(out, j);
    files.push_back({output_path(config), out.str()});
  }
  return files;
}

inline std::vector<EmittedFile> render_gain_table(const RunConfig& config,
                                                  const GridResult& result) {
  const SchemeKind baseline = config.schemes[0];
  const SchemeKind candidate = config.schemes[1];
  const double c_stop = config.c_stop_values.front();

  GainTable table;
  table.delta0_deg = config.delta0_deg;
  table.node_counts = config.node_counts;
  table.gains.resize(config.delta0_deg.size());
  for (std::size_t d = 0; d < config.delta0_rad.size(); ++d) {
    for (const int nodes : config.node_counts) {
      const CellStats* b = result.stats.find(baseline, nodes, config.delta0_rad[d], c_stop);
      const CellStats* c = result.stats.find(candidate, nodes, config.delta0_rad[d], c_stop);
      if (b == nullptr || c == nullptr) throw std::logic_error("gain table: missing cell");
      table.gains[d].push_back(gain_percent(b->mean_transmissions, c->mean_transmissions));
    }
  }
  for (std::size_t col = 0; col < config.node_counts.size(); ++col) {
    double sum = 0.0;
    for (std::size_t d = 0; d < table.gains.size(); ++d) sum += table.gains[d][col];
    table.average.push_back(sum / static_cast<double>(table.gains.size()));
  }

  std::vector<EmittedFile> files;
  std::ostringstream out;
  if (config.format == OutputFormat::csv) write_gain_table_csv(out, table);
  else write_json(out, gain_table_json(table));
  files.push_back({output_path(config), out.str()});
  return files;
}

}  // namespace detail

/// Produce every output file of an experiment as in-memory bytes. Pure given
/// the config and options, which is what makes byte-level reproducibility
/// testable. The trial dump, when requested, is appended as an extra file.
inline std::vector<EmittedFile> render_experiment(const RunConfig& config,
                                                  const RunOptions& options = {}) {
  if (config.experiment == ExperimentKind::trajectory ||
      config.experiment == ExperimentKind::stepsize_trace) {
    return detail::render_per_trial_experiment(config, options);
  }

  RunGridOptions grid_options;
  grid_options.threads = options.threads;
  grid_options.strict_convergence = options.strict;
  grid_options.keep_records = !options.trials_dump_path.empty();
  const ExperimentGrid grid = detail::grid_from_config(config, options);
  const GridResult result = run_grid(grid, detail::harness_from_config(config), grid_options);

  std::vector<EmittedFile> files;
  switch (config.experiment) {
    case ExperimentKind::sweep_delta:
      files = detail::render_sweep_delta(config, result);
      break;
    case ExperimentKind::sweep_nodes:
      files = detail::render_sweep_nodes(config, result);
      break;
    case ExperimentKind::gain_table:
      files = detail::render_gain_table(config, result);
      break;
    default:
      throw std::logic_error("render_experiment: unhandled experiment");
  }
  if (!options.trials_dump_path.empty()) {
    std::ostringstream out;
    write_trials_csv(out, result.stats, result.records, grid.n_channels, grid.n_sequences);
    files.push_back({options.trials_dump_path, out.str()});
  }
  return files;
}

/// Render and write to disk; returns the paths written.
inline std::vector<std::string> run_experiment(const RunConfig& config,
                                               const RunOptions& options = {}) {
  const std::vector<EmittedFile> files = render_experiment(config, options);
  std::vector<std::string> paths;
  for (const EmittedFile& file : files) {
    std::ofstream out(file.path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + file.path + "'");
    out << file.content;
    if (!out) throw std::runtime_error("write failed for '" + file.path + "'");
    paths.push_back(file.path);
  }
  return paths;
}

}  // namespace biorarsa
