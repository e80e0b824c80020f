#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "biorarsa/harness.hpp"
#include "biorarsa/stats.hpp"

namespace biorarsa {

enum class OutputFormat { csv, json };

inline std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

/// Shortest decimal string that parses back to the exact double. Keeps every
/// emitted file byte-stable across runs and platforms.
inline std::string format_double(double x) {
  std::array<char, 32> buf;
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), result.ptr);
}

inline void write_json(std::ostream& out, const nlohmann::ordered_json& j) {
  out << j.dump(2) << '\n';
}

// Per-cell summaries. Column order: cell key fields, then the cost summary.

inline void write_cells_csv(std::ostream& out, const AggregateStats& stats) {
  out << "scheme,nodes,delta0_deg,c_stop,mean_transmissions,stderr_transmissions,"
         "n_trials,converged_fraction\n";
  for (const CellStats& cell : stats.cells) {
    out << to_string(cell.key.scheme) << ',' << cell.key.nodes << ','
        << format_double(cell.key.delta0_deg) << ',' << format_double(cell.key.c_stop) << ','
        << format_double(cell.mean_transmissions) << ','
        << format_double(cell.stderr_transmissions) << ',' << cell.n_trials << ','
        << format_double(cell.converged_fraction()) << '\n';
  }
}

inline nlohmann::ordered_json cells_json(const AggregateStats& stats) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CellStats& cell : stats.cells) {
    nlohmann::ordered_json row;
    row["scheme"] = std::string(to_string(cell.key.scheme));
    row["nodes"] = cell.key.nodes;
    row["delta0_deg"] = cell.key.delta0_deg;
    row["c_stop"] = cell.key.c_stop;
    row["mean_transmissions"] = cell.mean_transmissions;
    row["stderr_transmissions"] = cell.stderr_transmissions;
    row["n_trials"] = cell.n_trials;
    row["converged_fraction"] = cell.converged_fraction();
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Write the per-cell summaries in the requested format. This is the main
/// results artifact of the sweep experiments.
inline void emit_results(std::ostream& out, const AggregateStats& stats, OutputFormat format) {
  if (format == OutputFormat::csv) write_cells_csv(out, stats);
  else write_json(out, cells_json(stats));
}

// Single-trial magnitude trajectory. The target column is constant so the
// stopping threshold can be plotted against the curve directly.

inline void write_trajectory_csv(std::ostream& out, const TrialRecord& record,
                                 double target_magnitude) {
  out << "transmission,magnitude,target_magnitude\n";
  for (const auto& [transmission, mag] : record.magnitude_trajectory) {
    out << transmission << ',' << format_double(mag) << ','
        << format_double(target_magnitude) << '\n';
  }
}

inline nlohmann::ordered_json trajectory_json(const TrialRecord& record, double target_magnitude) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& [transmission, mag] : record.magnitude_trajectory) {
    nlohmann::ordered_json row;
    row["transmission"] = transmission;
    row["magnitude"] = mag;
    row["target_magnitude"] = target_magnitude;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Stepsize trace of a single trial; epoch 0 is the initial stepsize.

inline void write_stepsize_csv(std::ostream& out, const TrialRecord& record) {
  out << "epoch,delta_radians,delta_degrees\n";
  for (const auto& [epoch, delta] : record.stepsize_trace) {
    out << epoch << ',' << format_double(delta) << ',' << format_double(delta * rad_to_deg)
        << '\n';
  }
}

inline nlohmann::ordered_json stepsize_json(const TrialRecord& record) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& [epoch, delta] : record.stepsize_trace) {
    nlohmann::ordered_json row;
    row["epoch"] = epoch;
    row["delta_radians"] = delta;
    row["delta_degrees"] = delta * rad_to_deg;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Scalability fits: one least-squares line per (scheme, stepsize, threshold)
// over the node counts.

struct FitRow {
  SchemeKind scheme = SchemeKind::one_bit;
  double delta0_deg = 0.0;
  double c_stop = 0.0;
  LinearFit fit;
};

inline void write_fits_csv(std::ostream& out, const std::vector<FitRow>& fits) {
  out << "scheme,delta0_deg,c_stop,slope,intercept,r_squared\n";
  for (const FitRow& row : fits) {
    out << to_string(row.scheme) << ',' << format_double(row.delta0_deg) << ','
        << format_double(row.c_stop) << ',' << format_double(row.fit.slope) << ','
        << format_double(row.fit.intercept) << ',' << format_double(row.fit.r_squared) << '\n';
  }
}

inline nlohmann::ordered_json fits_json(const std::vector<FitRow>& fits) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const FitRow& row : fits) {
    nlohmann::ordered_json entry;
    entry["scheme"] = std::string(to_string(row.scheme));
    entry["delta0_deg"] = row.delta0_deg;
    entry["c_stop"] = row.c_stop;
    entry["slope"] = row.fit.slope;
    entry["intercept"] = row.fit.intercept;
    entry["r_squared"] = row.fit.r_squared;
    rows.push_back(std::move(entry));
  }
  return rows;
}

// Gain table: candidate savings over the baseline in percent, stepsizes down
// the rows, node counts across the columns, plus a per-column average row.

struct GainTable {
  std::vector<double> delta0_deg;
  std::vector<int> node_counts;
  std::vector<std::vector<double>> gains;  // gains[row][column]
  std::vector<double> average;             // per column
};

inline void write_gain_table_csv(std::ostream& out, const GainTable& table) {
  out << "delta0_deg";
  for (const int n : table.node_counts) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < table.delta0_deg.size(); ++r) {
    out << format_double(table.delta0_deg[r]);
    for (const double g : table.gains[r]) out << ',' << format_double(g);
    out << '\n';
  }
  out << "average_gain";
  for (const double g : table.average) out << ',' << format_double(g);
  out << '\n';
}

inline nlohmann::ordered_json gain_table_json(const GainTable& table) {
  nlohmann::ordered_json j;
  j["node_counts"] = table.node_counts;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < table.delta0_deg.size(); ++r) {
    nlohmann::ordered_json row;
    row["delta0_deg"] = table.delta0_deg[r];
    row["gains_percent"] = table.gains[r];
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["average_gain"] = table.average;
  return j;
}

// Raw per-trial dump; records are in task order, cells in stats order.

inline void write_trials_csv(std::ostream& out, const AggregateStats& stats,
                             const std::vector<TrialRecord>& records, int n_channels,
                             int n_sequences) {
  out << "scheme,nodes,delta0_deg,c_stop,channel,sequence,transmissions,converged\n";
  const std::size_t per_cell =
      static_cast<std::size_t>(n_channels) * static_cast<std::size_t>(n_sequences);
  for (std::size_t cell_idx = 0; cell_idx < stats.cells.size(); ++cell_idx) {
    const CellKey& key = stats.cells[cell_idx].key;
    for (std::size_t i = 0; i < per_cell; ++i) {
      const TrialRecord& record = records[cell_idx * per_cell + i];
      out << to_string(key.scheme) << ',' << key.nodes << ',' << format_double(key.delta0_deg)
          << ',' << format_double(key.c_stop) << ',' << i / static_cast<std::size_t>(n_sequences)
          << ',' << i % static_cast<std::size_t>(n_sequences) << ',' << record.transmissions
          << ',' << (record.converged ? 1 : 0) << '\n';
    }
  }
}

}  // namespace biorarsa
