#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynperc/connectivity.hpp"
#include "dynperc/graph_state.hpp"
#include "dynperc/random.hpp"
#include "dynperc/stats.hpp"

namespace dynperc {

enum class Mode { coalescence, fragmentation, dynamical_percolation };

std::string to_string(Mode mode);
/// Accepts "coal"/"coalescence", "frag"/"fragmentation", "dynperc"/"dynamical_percolation".
Mode parse_mode(const std::string& text);

/// What to run: `rate` is the per-pair clock intensity (gamma+ for
/// coalescence, gamma- for fragmentation, gamma for dynamical percolation,
/// where each ring resamples the pair as present with probability p_refresh).
struct ProcessSpec {
  Mode mode = Mode::dynamical_percolation;
  double rate = 0.0;
  double p_refresh = 0.0;
  double horizon = 0.0;
  std::vector<double> snapshot_times;
  bool record_edges = false;

  /// Rates of the critical scaling: n^{-4/3} for coalescence, n^{-1/3} for
  /// fragmentation, n^{-1/3} with p_refresh = p_critical(lambda, n) for
  /// dynamical percolation.
  static ProcessSpec critical(Mode mode, std::uint32_t n, double lambda, double horizon,
                              std::vector<double> snapshot_times = {});

  /// InvalidSpec on negative rates, bad p_refresh, or snapshot times outside
  /// [0, horizon] or unsorted.
  void validate() const;
};

/// Set of present pairs with O(1) insert, erase, membership and uniform draw.
class EdgeSet {
 public:
  explicit EdgeSet(std::uint32_t n = 0);

  std::uint64_t pair_count() const { return pairs_; }
  std::uint64_t size() const { return keys_.size(); }
  bool contains(std::uint64_t key) const;
  void insert(std::uint64_t key);
  void erase(std::uint64_t key);
  std::uint64_t at(std::size_t i) const { return keys_[i]; }

  std::uint64_t key(Vertex u, Vertex v) const { return u < v ? std::uint64_t(u) * n_ + v : std::uint64_t(v) * n_ + u; }
  Edge edge(std::uint64_t key) const {
    return {static_cast<Vertex>(key / n_), static_cast<Vertex>(key % n_)};
  }

 private:
  std::uint32_t n_ = 0;
  std::uint64_t pairs_ = 0;
  std::vector<std::uint64_t> keys_;
  std::vector<std::int32_t> dense_;  // used when n*n is small
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
};

/// Exact continuous-time simulation with class-aggregated clocks: additions
/// fire at rate (addition intensity) x (#absent pairs), deletions at rate
/// (deletion intensity) x (#present edges); the pair is then uniform within its
/// class. Refreshes that leave a pair unchanged are never materialized.
///
/// Event times and class choice come from the "times" stream, pair choice from
/// the "pairs" stream, so observing the state never perturbs the trajectory.
class Simulator {
 public:
  Simulator(const GraphState& initial, const ProcessSpec& spec, std::uint64_t seed);

  double time() const { return now_; }
  /// Applies every event with time <= t.
  void advance_to(double t);

  std::uint64_t event_count() const { return additions_ + deletions_; }
  std::uint64_t additions() const { return additions_; }
  std::uint64_t deletions() const { return deletions_; }
  std::uint64_t edge_count() const { return edges_.size(); }

  double addition_rate() const;
  double deletion_rate() const;

  /// Current graph, time-stamped.
  GraphState state() const;
  ConnectivityTracker& connectivity() { return tracker_; }

 private:
  void apply_next_event();

  GraphState initial_;
  ProcessSpec spec_;
  double add_intensity_ = 0.0;
  double del_intensity_ = 0.0;
  EdgeSet edges_;
  ConnectivityTracker tracker_;
  Engine times_;
  Engine pairs_;
  double now_ = 0.0;
  std::optional<double> pending_;
  std::uint64_t additions_ = 0;
  std::uint64_t deletions_ = 0;
};

struct Snapshot {
  double time = 0.0;
  std::vector<ComponentSummary> components;
  std::uint64_t edge_count = 0;
  std::uint32_t n = 0;
  std::optional<std::vector<Edge>> edges;

  /// Exact total rescaled mass of the components.
  double size_sum() const;
};

struct Trajectory {
  ProcessSpec spec;
  std::vector<Snapshot> snapshots;
  std::uint64_t event_count = 0;
  std::uint64_t seed = 0;
};

/// Simulates `spec` from `initial`, taking one snapshot per requested time
/// (state after every event at or before that time).
Trajectory run(const GraphState& initial, const ProcessSpec& spec, std::uint64_t seed,
               SummaryOptions summary_options = {});

/// One JSON object per snapshot:
/// {"t","components":[{"size","surplus","diameter","n_vertices"}],"edge_count"[,"edges"],"seed"}.
std::string snapshot_json_line(const Snapshot& s, std::uint64_t seed);
std::string to_jsonl(const Trajectory& trajectory);

struct DualityTimes {
  double t = 0.0;        // coalescence time
  double t_prime = 0.0;  // fragmentation time
};

/// Times making coalescence of G(n,p) at rate gamma_plus and fragmentation of
/// G(n,p') at rate gamma_minus have the same per-pair joint law.
/// DomainError unless 0 < p <= p' < 1 and both rates are positive.
DualityTimes duality_params(double p, double p_prime, double gamma_plus, double gamma_minus);

/// Joint law of one pair's (earlier state, later state); index 0 = absent.
struct EdgeJointLaw {
  double p00 = 0.0, p01 = 0.0, p10 = 0.0, p11 = 0.0;
  double sum() const { return p00 + p01 + p10 + p11; }
};

/// (state in G(n,p), state after coalescence at rate gamma for time t).
EdgeJointLaw edge_joint_law_coal(double p, double gamma, double t);
/// (state after fragmentation of G(n,p') at rate mu for time t', state in G(n,p')).
EdgeJointLaw edge_joint_law_frag(double p_prime, double mu, double t_prime);

struct DualityReport {
  std::uint32_t n = 0;
  double lambda = 0.0, s = 0.0;
  double p = 0.0, p_prime = 0.0;
  double gamma_plus = 0.0, gamma_minus = 0.0;
  DualityTimes times;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  bool coupled = false;  // the two constructions never share randomness
  EdgeJointLaw law;
  // Pooled per-pair cell counts over all pairs and replicas: 00, 01, 10, 11.
  std::array<std::uint64_t, 4> cells_coal{};
  std::array<std::uint64_t, 4> cells_frag{};
  std::uint64_t trials = 0;  // pairs x replicas
  std::vector<double> largest_before_coal, largest_after_coal;
  std::vector<double> largest_before_frag, largest_after_frag;
  KsResult ks_before, ks_after;

  /// |empirical - closed form| / sigma per cell, coalescence then fragmentation.
  std::array<double, 4> z_coal() const;
  std::array<double, 4> z_frag() const;
  std::string to_json() const;
};

/// Samples (G(n,p), coalescence at time t) and (fragmentation at time t',
/// G(n,p')) independently, with p = p(lambda,n), p' = p(lambda+s,n),
/// gamma_plus = n^{-4/3}, gamma_minus = n^{-1/3}.
DualityReport duality_experiment(std::uint32_t n, double lambda, double s, std::size_t replicas, std::uint64_t seed);

}  // namespace dynperc
