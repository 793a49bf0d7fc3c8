#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynperc/coalescent.hpp"
#include "dynperc/dynamics.hpp"

namespace dynperc {

struct ExperimentConfig {
  std::string command;
  std::uint32_t n = 1000;
  double lambda = 0.0;
  Mode mode = Mode::dynamical_percolation;
  std::optional<double> rate;       // overrides the critical rate
  std::optional<double> p_refresh;  // overrides p(lambda, n)
  double t_max = 1.0;
  std::vector<double> snapshots;  // empty: 11 evenly spaced times in [0, t_max]
  std::optional<std::size_t> replicas;  // unset: per-command default
  std::uint64_t seed = 1;
  std::string out;  // empty: stdout
  std::string format = "jsonl";
  bool record_edges = false;

  double s = 1.0;  // duality shift
  std::vector<std::uint32_t> n_list{500, 2000, 8000};
  std::vector<double> epsilons{0.2, 0.1};
  std::size_t k_samples = 10000;
  std::string lemma = "all";
  std::size_t instances = 500;
  std::size_t top = 10;
  std::string input;  // graph snapshot for structure
  std::string file_a, file_b;
  std::string ghp_mode = "auto";
  double tol = 1e-6;

  /// ConfigError on any inconsistency.
  void validate() const;
  std::vector<double> snapshot_grid() const;
  std::size_t replica_count(std::size_t fallback) const { return replicas.value_or(fallback); }
  nlohmann::ordered_json echo() const;
};

/// Git blob id: SHA-1 of "blob <size>\0" followed by the bytes, hex encoded.
std::string content_hash(std::string_view bytes);
/// Hash of the config echo plus any input file contents.
std::string input_hash(const ExperimentConfig& config);

struct CommandResult {
  int exit_code = 0;
  std::string output;  // printed when no --out was given
  std::vector<std::string> files;
};

CommandResult cmd_sample(const ExperimentConfig& config);
CommandResult cmd_simulate(const ExperimentConfig& config);
CommandResult cmd_structure(const ExperimentConfig& config);
CommandResult cmd_duality_test(const ExperimentConfig& config);
CommandResult cmd_mc_structure(const ExperimentConfig& config);
CommandResult cmd_lemma_check(const ExperimentConfig& config);
CommandResult cmd_ghp(const ExperimentConfig& config);
CommandResult cmd_convergence(const ExperimentConfig& config);

/// Dispatches on config.command after validation.
CommandResult run_command(const ExperimentConfig& config);

struct SnapshotAggregate {
  double t = 0.0;
  std::string statistic;
  double mean = 0.0;
  double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

/// Per snapshot time: largest rescaled size, largest surplus, largest diameter.
std::vector<SnapshotAggregate> aggregate(const std::vector<Trajectory>& trajectories);
std::string aggregate_csv(const std::vector<SnapshotAggregate>& rows, std::uint64_t seed, const std::string& hash);

struct McStructureResult {
  Thresholds thresholds;
  std::size_t replicas = 0;
  std::size_t failures = 0;
  std::array<std::size_t, 5> flag_counts{};  // a..e
  double fraction = 0.0;
  double sigma = 0.0;
  bool pass = false;
  nlohmann::ordered_json to_json() const;
};

/// Flag-failure frequency over [0, T] paths at thresholds built from x;
/// passes when it is at most epsilon + 3 sigma.
McStructureResult mc_structure(const MassVector& x, double epsilon, double T, std::size_t k_samples,
                               std::size_t replicas, std::uint64_t seed);

/// Rows for one lemma ("20", "23", "17", "pourSkorL2") on random instances.
std::vector<LemmaRow> lemma_rows(const std::string& lemma, std::size_t instances, std::size_t replicas,
                                 std::uint64_t seed);

struct ConvergencePoint {
  std::uint32_t n = 0;
  std::vector<double> largest_size, largest_surplus, largest_diameter;
  double mean_square_sizes = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  std::vector<KsResult> ks_size, ks_surplus, ks_diameter;  // consecutive n
  bool non_increasing = false;  // on ks_size statistics
  nlohmann::ordered_json to_json() const;
};

ConvergenceReport convergence(const std::vector<std::uint32_t>& n_list, double lambda, std::size_t replicas,
                              std::uint64_t seed);

}  // namespace dynperc
