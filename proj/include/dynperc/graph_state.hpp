#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dynperc {

using Vertex = std::uint32_t;

/// Unordered vertex pair stored with u < v (0-based ids).
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// n^{-2/3}, the mass carried by each vertex.
double mass_unit(std::uint64_t n);
/// n^{-1/3}, the length carried by each edge.
double length_unit(std::uint64_t n);

/// Edge probability n^{-1} + lambda n^{-4/3} of the critical window.
/// Clamped to [0,1] unless `strict`, in which case an out-of-range raw value
/// raises InvalidWindow.
double p_critical(double lambda, std::uint64_t n, bool strict = false);

/// Inverse of p_critical: the window parameter giving edge probability p.
double lambda_for(double p, std::uint64_t n);

/// Immutable discrete measured graph on vertices {0, ..., n-1}.
///
/// Edges are kept sorted lexicographically; adjacency is stored in CSR form
/// with each neighbour list ascending. Vertex mass is n^{-2/3} and edge length
/// n^{-1/3}; both are materialized only through mass_unit()/length_unit(), all
/// bookkeeping is done on integer counts.
class GraphState {
 public:
  GraphState() = default;
  GraphState(std::uint32_t n, std::vector<Edge> edges, double lambda = 0.0, std::uint64_t seed = 0,
             double time = 0.0);

  std::uint32_t n() const { return n_; }
  double lambda() const { return lambda_; }
  std::uint64_t seed() const { return seed_; }
  double time() const { return time_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  double mass_per_vertex() const { return mass_unit(n_); }
  double length_per_edge() const { return length_unit(n_); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::uint32_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex a, Vertex b) const;

 private:
  std::uint32_t n_ = 0;
  double lambda_ = 0.0;
  std::uint64_t seed_ = 0;
  double time_ = 0.0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Vertex> adj_;
};

/// Each of the C(n,2) pairs present independently with probability p.
/// Draws a Binomial(C(n,2), p) edge count then a uniform set of distinct pairs.
GraphState sample_gnp(std::uint32_t n, double p, std::uint64_t seed);

/// G(n, p_critical(lambda, n)).
GraphState sample_er(std::uint32_t n, double lambda, std::uint64_t seed, bool strict = false);

/// Connected components: `label[v]` is the canonical id (minimum vertex) of v's
/// component; `members` lists the components in ascending id order, each with
/// its vertices ascending.
struct Partition {
  std::vector<Vertex> label;
  std::vector<std::vector<Vertex>> members;
};

Partition component_partition(const GraphState& g);

struct ComponentSummary {
  Vertex id = 0;  // minimum vertex id
  std::uint32_t n_vertices = 0;
  std::uint64_t n_edges = 0;
  std::uint64_t surplus = 0;
  std::uint32_t diameter_hops = 0;
  std::uint32_t height_hops = 0;
  double mass_unit = 0.0;
  double length_unit = 0.0;

  double size() const { return n_vertices * mass_unit; }
  double diameter() const { return diameter_hops * length_unit; }
  double height() const { return height_hops * length_unit; }
};

struct SummaryOptions {
  bool diameter = true;
  bool height = true;
};

/// One summary per component, sorted by (size desc, id asc).
std::vector<ComponentSummary> components(const GraphState& g, SummaryOptions options = {});

/// Summary of the single component with the given id.
ComponentSummary component_summary(const GraphState& g, Vertex component_id, SummaryOptions options = {});

/// Non-increasing sequence of rescaled component masses, stored as vertex
/// counts times a common unit so that conservation checks stay exact.
class SizeSequence {
 public:
  SizeSequence() = default;
  SizeSequence(std::vector<std::uint64_t> counts, double unit);
  /// Plain reals; sorted non-increasing on construction.
  explicit SizeSequence(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  /// Exact total when built from counts: (sum of counts) * unit.
  double sum() const;
  double sum_of_squares() const;

 private:
  std::vector<double> values_;
  std::uint64_t total_count_ = 0;
  double unit_ = 0.0;
  bool counted_ = false;
};

SizeSequence sizes_rescaled(const GraphState& g);

/// Vertices of the component with canonical id `component_id`; UnknownComponent
/// if `component_id` is not the minimum vertex of a component.
std::vector<Vertex> component_vertices(const GraphState& g, Vertex component_id);

/// Exact diameter (all-source BFS), rescaled by n^{-1/3}.
double component_diameter(const GraphState& g, Vertex component_id);

/// Hop distances from `source`; -1 for unreachable vertices.
std::vector<std::int32_t> bfs_hops(const GraphState& g, Vertex source);

/// Maximum BFS hop distance over pairs of `members` (one component).
std::uint32_t diameter_hops_all_source(const GraphState& g, std::span<const Vertex> members);

/// Double-sweep BFS; exact on trees only.
std::uint32_t diameter_hops_two_sweep(const GraphState& g, std::span<const Vertex> members);

/// Depth-first exploration of the component containing `root`: the vertex
/// being explored pushes its unseen neighbours (smallest id explored first)
/// and becomes their parent. Returns (vertex, depth) pairs in exploration order.
std::vector<std::pair<Vertex, std::uint32_t>> explore_depth_first(const GraphState& g, Vertex root);

/// Snapshot JSON: {"n","lambda","seed","time","edges":[[u,v],...]} with 1-based
/// ids, u < v, edges sorted ascending.
std::string to_snapshot_json(const GraphState& g);
GraphState from_snapshot_json(std::string_view text);

}  // namespace dynperc
