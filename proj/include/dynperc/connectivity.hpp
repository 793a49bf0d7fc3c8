#pragma once

#include <cstdint>
#include <vector>

#include "dynperc/graph_state.hpp"

namespace dynperc {

/// Component labels under edge insertions and deletions.
///
/// Insertions merge the smaller member list into the larger one and relabel
/// it, so lookups are O(1). A deletion only marks its component dirty; dirty
/// components are split by BFS on the next query. At criticality components
/// have O(n^{2/3}) vertices, which bounds the cost of each rebuild.
class ConnectivityTracker {
 public:
  ConnectivityTracker() = default;
  explicit ConnectivityTracker(const GraphState& g);

  std::uint32_t n() const { return static_cast<std::uint32_t>(label_.size()); }

  void add_edge(Vertex u, Vertex v);
  void remove_edge(Vertex u, Vertex v);

  /// Representative of v's component (not necessarily the minimum vertex).
  Vertex find(Vertex v);
  bool connected(Vertex u, Vertex v) { return find(u) == find(v); }
  std::uint32_t component_size(Vertex v);
  std::uint32_t largest_component_size();
  std::size_t component_count();

  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }

 private:
  void refresh();
  void mark_dirty(Vertex root);

  std::vector<Vertex> label_;
  std::vector<std::vector<Vertex>> members_;  // non-empty only at representatives
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<char> dirty_;
  std::vector<Vertex> dirty_roots_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

}  // namespace dynperc
