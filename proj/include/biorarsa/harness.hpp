#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "biorarsa/channel.hpp"
#include "biorarsa/schemes.hpp"
#include "biorarsa/stats.hpp"

namespace biorarsa {

/// One point of an experiment grid. delta0 is the value the algorithms see
/// (radians); delta0_deg is the same stepsize as written in configs and
/// reports, carried separately so emitted tables show the exact figure the
/// user asked for.
struct CellKey {
  SchemeKind scheme = SchemeKind::one_bit;
  int nodes = 0;
  double delta0 = 0.0;
  double delta0_deg = 0.0;
  double c_stop = 0.0;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellStats {
  CellKey key;
  std::size_t n_trials = 0;
  std::size_t n_converged = 0;
  double mean_transmissions = 0.0;
  double stderr_transmissions = 0.0;

  double converged_fraction() const {
    return n_trials == 0 ? 0.0 : static_cast<double>(n_converged) / static_cast<double>(n_trials);
  }
};

struct AggregateStats {
  std::vector<CellStats> cells;

  const CellStats* find(SchemeKind scheme, int nodes, double delta0, double c_stop) const {
    for (const CellStats& cell : cells) {
      if (cell.key.scheme == scheme && cell.key.nodes == nodes && cell.key.delta0 == delta0 &&
          cell.key.c_stop == c_stop) {
        return &cell;
      }
    }
    return nullptr;
  }
};

/// Cartesian experiment grid. Every cell runs n_channels * n_sequences
/// trials: one fresh channel per channel index, one independent start and
/// perturbation stream per sequence index.
struct ExperimentGrid {
  std::vector<SchemeKind> schemes;
  std::vector<int> node_counts;
  std::vector<double> delta0_values;   // radians
  std::vector<double> delta0_degrees;  // display values; derived if left empty
  std::vector<double> c_stop_values;
  int n_channels = 20;
  int n_sequences = 20;
  std::uint64_t base_seed = 1;
  AmplitudeModel amplitude_model = AmplitudeModel::rayleigh;
  double power = 1.0;
};

/// Scheme parameters shared by every cell; delta0 and c_stop come from the
/// cell key, and the transmission cap scales with the node count.
struct HarnessParams {
  int hold_length = 5;
  int max_swim = 5;
  double alpha = 0.5;
  std::uint64_t cap_per_node = 500;
};

struct RunGridOptions {
  int threads = 0;                  // <= 0 picks the hardware concurrency
  bool keep_records = false;        // retain full per-trial records
  bool strict_convergence = false;  // any capped trial fails the run
};

struct GridResult {
  AggregateStats stats;
  /// Full records in task order (cell-major, then channel, then sequence);
  /// empty unless keep_records was set.
  std::vector<TrialRecord> records;
};

/// Channels are seeded independently of scheme, stepsize and stopping
/// threshold, so every cell at a given node count faces the same fading
/// realizations and comparisons across schemes are paired.
inline std::uint64_t channel_seed(std::uint64_t base_seed, int nodes, AmplitudeModel model,
                                  int channel_index) {
  return hash_words({base_seed, 0x6368616e6e656cULL, static_cast<std::uint64_t>(nodes),
                     static_cast<std::uint64_t>(model), static_cast<std::uint64_t>(channel_index)});
}

/// Per-trial stream seed. Depends on the full cell identity plus the trial
/// indices, so no two trials in a run share a stream.
inline std::uint64_t trial_seed(std::uint64_t base_seed, const CellKey& key, int channel_index,
                                int sequence_index) {
  return hash_words({base_seed, 0x747269616cULL, static_cast<std::uint64_t>(key.scheme),
                     static_cast<std::uint64_t>(key.nodes), bit_key(key.delta0),
                     bit_key(key.c_stop), static_cast<std::uint64_t>(channel_index),
                     static_cast<std::uint64_t>(sequence_index)});
}

namespace detail {

inline void validate_grid(const ExperimentGrid& grid) {
  if (grid.schemes.empty()) throw std::invalid_argument("grid: no schemes");
  if (grid.node_counts.empty()) throw std::invalid_argument("grid: no node counts");
  for (const int n : grid.node_counts)
    if (n < 1) throw std::invalid_argument("grid: node counts must be >= 1");
  if (grid.delta0_values.empty()) throw std::invalid_argument("grid: no stepsizes");
  for (const double d : grid.delta0_values)
    if (!(d > 0.0)) throw std::invalid_argument("grid: stepsizes must be positive");
  if (!grid.delta0_degrees.empty() && grid.delta0_degrees.size() != grid.delta0_values.size())
    throw std::invalid_argument("grid: delta0_degrees length mismatch");
  if (grid.c_stop_values.empty()) throw std::invalid_argument("grid: no stopping thresholds");
  for (const double c : grid.c_stop_values)
    if (!(c > 0.0) || !(c < 1.0))
      throw std::invalid_argument("grid: stopping thresholds must be in (0, 1)");
  if (grid.n_channels < 1 || grid.n_sequences < 1)
    throw std::invalid_argument("grid: need at least one channel and one sequence");
  if (!(grid.power > 0.0)) throw std::invalid_argument("grid: power must be positive");
}

struct TrialSummary {
  std::uint64_t transmissions = 0;
  bool converged = false;
};

}  // namespace detail

/// Run every trial of the grid and aggregate per cell. The task list is
/// fixed up front and each trial is a pure function of its seeds, so the
/// result is identical for any thread count, including 1.
inline GridResult run_grid(const ExperimentGrid& grid, const HarnessParams& params,
                           const RunGridOptions& options = {}) {
  detail::validate_grid(grid);

  std::vector<CellKey> cells;
  for (const SchemeKind scheme : grid.schemes) {
    for (const int nodes : grid.node_counts) {
      for (std::size_t d = 0; d < grid.delta0_values.size(); ++d) {
        const double delta0 = grid.delta0_values[d];
        const double delta0_deg =
            grid.delta0_degrees.empty() ? delta0 * rad_to_deg : grid.delta0_degrees[d];
        for (const double c_stop : grid.c_stop_values) {
          cells.push_back(CellKey{scheme, nodes, delta0, delta0_deg, c_stop});
        }
      }
    }
  }

  // One channel set per node count, shared by every cell at that count.
  std::map<int, std::vector<ChannelRealization>> channels;
  for (const int nodes : grid.node_counts) {
    if (channels.count(nodes)) continue;
    std::vector<ChannelRealization>& list = channels[nodes];
    list.reserve(static_cast<std::size_t>(grid.n_channels));
    for (int c = 0; c < grid.n_channels; ++c) {
      list.push_back(generate_channel(static_cast<std::size_t>(nodes), grid.power,
                                      grid.amplitude_model,
                                      channel_seed(grid.base_seed, nodes, grid.amplitude_model, c)));
    }
  }

  const std::size_t trials_per_cell =
      static_cast<std::size_t>(grid.n_channels) * static_cast<std::size_t>(grid.n_sequences);
  const std::size_t total = cells.size() * trials_per_cell;

  std::vector<detail::TrialSummary> summaries(total);
  GridResult result;
  if (options.keep_records) result.records.resize(total);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    try {
      for (std::size_t task = next.fetch_add(1); task < total; task = next.fetch_add(1)) {
        const std::size_t cell_idx = task / trials_per_cell;
        const std::size_t within = task % trials_per_cell;
        const int channel_idx = static_cast<int>(within / grid.n_sequences);
        const int sequence_idx = static_cast<int>(within % grid.n_sequences);
        const CellKey& key = cells[cell_idx];

        SchemeParams sp;
        sp.delta0 = key.delta0;
        sp.hold_length = params.hold_length;
        sp.max_swim = params.max_swim;
        sp.alpha = params.alpha;
        sp.c_stop = key.c_stop;
        sp.max_transmissions = params.cap_per_node * static_cast<std::uint64_t>(key.nodes);

        TrialRecord record =
            run_trial(key.scheme, channels.at(key.nodes)[static_cast<std::size_t>(channel_idx)], sp,
                      trial_seed(grid.base_seed, key, channel_idx, sequence_idx));
        summaries[task] = {record.transmissions, record.converged};
        if (options.keep_records) result.records[task] = std::move(record);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  int n_threads = options.threads;
  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  result.stats.cells.reserve(cells.size());
  std::vector<double> costs(trials_per_cell);
  for (std::size_t cell_idx = 0; cell_idx < cells.size(); ++cell_idx) {
    CellStats cs;
    cs.key = cells[cell_idx];
    cs.n_trials = trials_per_cell;
    for (std::size_t i = 0; i < trials_per_cell; ++i) {
      const detail::TrialSummary& s = summaries[cell_idx * trials_per_cell + i];
      costs[i] = static_cast<double>(s.transmissions);
      if (s.converged) cs.n_converged += 1;
    }
    const MeanStderr ms = mean_stderr(costs);
    cs.mean_transmissions = ms.mean;
    cs.stderr_transmissions = ms.se;
    if (options.strict_convergence && cs.n_converged != cs.n_trials) {
      throw std::runtime_error(
          "run_grid: " + std::to_string(cs.n_trials - cs.n_converged) +
          " trial(s) hit the transmission cap in cell scheme=" + std::string(to_string(cs.key.scheme)) +
          " nodes=" + std::to_string(cs.key.nodes));
    }
    result.stats.cells.push_back(std::move(cs));
  }
  return result;
}

}  // namespace biorarsa
