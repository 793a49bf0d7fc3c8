#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dynperc {

/// Finite non-increasing sequence of positive block masses.
class MassVector {
 public:
  MassVector() = default;
  /// Sorts non-increasing; DomainError on empty input or entries <= 0.
  explicit MassVector(std::vector<double> masses);

  std::size_t size() const { return static_cast<std::size_t>(x_.size()); }
  double operator[](std::size_t i) const { return x_[static_cast<Eigen::Index>(i)]; }
  const Eigen::VectorXd& values() const { return x_; }
  double sum() const { return x_.sum(); }
  double sum_of_squares() const { return x_.squaredNorm(); }

  /// S(x_{<=alpha}, 0).
  double tail_square_sum(double alpha) const;

 private:
  Eigen::VectorXd x_;
};

struct CoalEdge {
  double time = 0.0;
  std::uint32_t i = 0;  // i <= j; i == j is a loop
  std::uint32_t j = 0;
};

/// MG(x, s) for every s <= horizon: each edge carries the time it appears,
/// so MG(x, s) is the prefix of `edges` with time <= s.
struct CoalMultigraph {
  std::uint32_t block_count = 0;
  double horizon = 0.0;
  std::vector<CoalEdge> edges;  // sorted by time

  std::size_t edge_count(double s) const;
  std::size_t multiplicity(std::uint32_t i, std::uint32_t j, double s) const;
  /// Pair present in the simple-graph reduction W(x, s).
  bool simple_edge(std::uint32_t i, std::uint32_t j, double s) const { return i != j && multiplicity(i, j, s) > 0; }
};

/// Pair {i,j} gets Poisson(t x_i x_j) edges and block i gets Poisson(t x_i^2 / 2)
/// loops, all independent. Sampled as one Poisson stream of rate (sum x)^2 / 2
/// with ordered endpoints drawn independently proportional to x.
CoalMultigraph sample_mg(const MassVector& x, double t, std::uint64_t seed);

/// Component label (smallest block index) of each block in MG(x, s), keeping
/// only blocks with keep[i] (others get label -1).
std::vector<std::int64_t> mg_labels(const CoalMultigraph& g, double s, const std::vector<bool>& keep = {});

/// Sum over blocks of (sum of x in block)^2; BadPartition unless the sets
/// cover 0..x.size()-1 disjointly.
double s_statistic(const MassVector& x, const std::vector<std::vector<std::uint32_t>>& partition);
/// S of MG(x, s) restricted to blocks with keep[i].
double s_statistic(const MassVector& x, const CoalMultigraph& g, double s, const std::vector<bool>& keep = {});

struct Thresholds {
  double epsilon = 0.0;
  double T = 0.0;
  double K = 1.0;
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  double k_tail_frequency = 0.0;  // empirical P(S(x,T) >= K)
  std::size_t samples = 0;
};

double epsilon1_bound(double epsilon, double T, double K);
double epsilon2_bound(double epsilon, double T, double K, double epsilon1);

/// Dyadic grid search: K the smallest power of two >= 1 with empirical
/// P(S(x,T) >= K) <= epsilon/100, then the largest 2^-j below epsilon
/// (resp. epsilon1) meeting the tail bounds. Unsatisfiable if j would exceed 64.
Thresholds thresholds(const MassVector& x, double epsilon, double T, std::size_t samples, std::uint64_t seed);
/// Replays the three hypotheses (the K one against the recorded frequency).
bool thresholds_hold(const MassVector& x, const Thresholds& th);

struct SignificantComponent {
  std::vector<std::uint32_t> blocks;
  double mass = 0.0;
  std::vector<std::uint32_t> heart;
  std::vector<std::uint32_t> hanging;
  // hanging tree (smallest block) -> number of edges joining it to the heart
  std::map<std::uint32_t, std::uint32_t> attachments;
  double hanging_mass = 0.0;
};

struct StructureFlags {
  bool a = false;  // a significant component has no Large block
  bool b = false;  // MG(x_{<=eps1}) has a cycle
  bool c = false;  // two edges between a small-side and a large-side component
  bool d = false;  // S(x,t) - S(x_{>eps2},t) > 2 eps1^2
  bool e = false;  // a Large block's component mass moves by >= eps1
  bool any() const { return a || b || c || d || e; }
};

struct StructureReport {
  double t = 0.0;
  Thresholds thresholds;
  std::vector<SignificantComponent> components;
  StructureFlags flags;

  std::string to_json() const;
};

/// Heart and hanging trees of every significant component of MG(x, t), and
/// the violation flags, read off an already sampled multigraph.
StructureReport classify_structure(const MassVector& x, const CoalMultigraph& g, double t, const Thresholds& th);
StructureReport classify_structure(const MassVector& x, double t, const Thresholds& th, std::uint64_t seed);

/// Flags OR-ed over every t in [0, T] (checked at 0 and after each edge).
struct PathStructureResult {
  StructureFlags flags;
  std::size_t times_checked = 0;
};
PathStructureResult structure_path_check(const MassVector& x, const Thresholds& th, std::uint64_t seed);

struct LemmaRow {
  std::string instance;
  double statistic = 0.0;
  double bound = 0.0;
  bool pass = false;
};

std::string lemma_csv(const std::vector<LemmaRow>& rows);

/// Exact P(S(x,t) > s) for two blocks.
double s_tail_two_blocks(double a, double b, double t, double s);
/// t s S(x,0) / (s - S(x,0)); DomainError unless s > S(x,0).
double lemma20_bound(const MassVector& x, double t, double s);
/// Monte-Carlo P(S(x,t) > s) against the bound plus 3 sigma.
LemmaRow check_lemma20(const MassVector& x, double t, double s, std::size_t replicas, std::uint64_t seed);

/// Bipartite graph between z[0..m) and z[m..): Monte-Carlo
/// P(sum Z^2 >= alpha1 + epsilon) against (1 + t(alpha1+epsilon))^2 alpha2 / epsilon.
LemmaRow check_lemma23(const std::vector<double>& z, std::size_t m, double t, double epsilon, std::size_t replicas,
                       std::uint64_t seed);

struct WeightedEdge {
  std::uint32_t u = 0, v = 0;
};

/// Graph with weights; `reduced` holds the smaller weights x <= weights.
struct Lemma17Instance {
  std::uint32_t vertices = 0;
  std::vector<WeightedEdge> edges;
  std::vector<double> weights;
  std::vector<double> reduced;
};

/// Multigraph with weights and a vertex subset W.
struct SkorInstance {
  std::uint32_t vertices = 0;
  std::vector<WeightedEdge> edges;
  std::vector<double> weights;
  std::vector<bool> in_w;
};

/// Squared l2 distance of the sorted component sizes of a graph and a
/// subgraph is at most the drop in the sum of squares. Every pair (subgraph
/// of the instance, subgraph of that) is checked, with both weight vectors
/// for the smaller graph. The statistic is the largest ratio of the two sides.
/// InstanceTooLarge above 10 edges.
std::vector<LemmaRow> check_lemma17(const std::vector<Lemma17Instance>& instances);

/// Whether W meets the hypothesis: at most one edge between any component
/// of (W, E) and any component of (V \ W, E).
bool skor_hypothesis(const SkorInstance& inst);
/// Stronger condition: every component of (V \ W, E) has at most one edge
/// into W. Under it, paths between vertices of W never leave W, and the
/// inequality holds. The weaker hypothesis above admits counterexamples.
bool skor_single_edge(const SkorInstance& inst);
/// S(V,E) - S(W,E) >= S(V,E') - S(W,E') for every E' subset of E.
/// Instances failing the hypothesis are reported as vacuous passes.
/// InstanceTooLarge above 10 edges.
std::vector<LemmaRow> check_pour_skor(const std::vector<SkorInstance>& instances);

/// S(W, E') with edges selected by `mask` (bit k = edge k); W given by keep.
double subgraph_s(std::uint32_t vertices, const std::vector<WeightedEdge>& edges, std::uint64_t mask,
                  const std::vector<double>& weights, const std::vector<bool>& keep);

std::vector<Lemma17Instance> random_lemma17_instances(std::size_t count, std::uint32_t max_vertices,
                                                      std::uint32_t max_edges, std::uint64_t seed);
/// Random instances satisfying the hypothesis, or the single-edge condition
/// when `single_edge` (W resampled until it does).
std::vector<SkorInstance> random_skor_instances(std::size_t count, std::uint32_t max_vertices,
                                                std::uint32_t max_edges, std::uint64_t seed,
                                                bool single_edge = false);

}  // namespace dynperc
