// beamsim: Monte Carlo simulator for adaptive distributed beamforming under
// one-bit feedback. Each subcommand runs one experiment described by a JSON
// config and writes CSV or JSON result files.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "biorarsa/experiments.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::int64_t seed = -1;
  int threads = 0;
  bool full_scale = false;
  bool strict = false;
  std::string dump_trials;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration")->required();
  cmd->add_option("--out", opts.out_path, "output path, overrides the config");
  cmd->add_option("--format", opts.format, "csv or json, overrides the config")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opts.seed, "base seed, overrides the config")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", opts.threads, "worker threads, 0 = one per core");
  cmd->add_flag("--full-scale", opts.full_scale, "run 100 channels x 100 sequences");
  cmd->add_flag("--strict", opts.strict, "fail if any trial misses the target");
  cmd->add_option("--dump-trials", opts.dump_trials, "also write a per-trial CSV here");
}

biorarsa::RunConfig load_config(const CliOptions& opts) {
  biorarsa::RunConfig config = biorarsa::parse_config_file(opts.config_path);
  if (!opts.out_path.empty()) config.out_path = opts.out_path;
  if (!opts.format.empty()) {
    config.format =
        opts.format == "csv" ? biorarsa::OutputFormat::csv : biorarsa::OutputFormat::json;
  }
  if (opts.seed >= 0) config.base_seed = static_cast<std::uint64_t>(opts.seed);
  return config;
}

int run_experiment_command(biorarsa::ExperimentKind kind, const CliOptions& opts) {
  biorarsa::RunConfig config = load_config(opts);
  if (config.experiment != kind) {
    throw biorarsa::ConfigError("config describes experiment '" +
                                std::string(biorarsa::to_string(config.experiment)) +
                                "' but the subcommand is '" +
                                std::string(biorarsa::to_string(kind)) + "'");
  }
  biorarsa::RunOptions run_options;
  run_options.threads = opts.threads;
  run_options.strict = opts.strict;
  run_options.full_scale = opts.full_scale;
  run_options.trials_dump_path = opts.dump_trials;
  for (const std::string& path : biorarsa::run_experiment(config, run_options)) {
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int echo_config_command(const CliOptions& opts) {
  const biorarsa::RunConfig config = load_config(opts);
  const std::string text = biorarsa::emit_config(config).dump(2) + "\n";
  if (opts.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opts.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + opts.out_path + "'");
    out << text;
    std::cout << "wrote " << opts.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive distributed beamforming simulator"};
  app.require_subcommand(1);

  CliOptions opts;
  for (const biorarsa::ExperimentKind kind : biorarsa::all_experiments) {
    CLI::App* cmd = app.add_subcommand(std::string(biorarsa::to_string(kind)),
                                       "run the " + std::string(biorarsa::to_string(kind)) +
                                           " experiment");
    add_common_options(cmd, opts);
  }
  CLI::App* echo = app.add_subcommand("echo-config", "parse a config and print its normal form");
  add_common_options(echo, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (echo->parsed()) return echo_config_command(opts);
    for (const biorarsa::ExperimentKind kind : biorarsa::all_experiments) {
      if (app.get_subcommand(std::string(biorarsa::to_string(kind)))->parsed()) {
        return run_experiment_command(kind, opts);
      }
    }
    throw std::logic_error("no subcommand dispatched");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
