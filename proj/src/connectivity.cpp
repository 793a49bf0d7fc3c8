#include "dynperc/connectivity.hpp"

#include <algorithm>

namespace dynperc {

ConnectivityTracker::ConnectivityTracker(const GraphState& g)
    : label_(g.n()), members_(g.n()), adjacency_(g.n()), dirty_(g.n(), 0), stamp_(g.n(), 0) {
  for (Vertex v = 0; v < g.n(); ++v) {
    label_[v] = v;
    members_[v] = {v};
  }
  for (const auto& e : g.edges()) add_edge(e.u, e.v);
}

void ConnectivityTracker::mark_dirty(Vertex root) {
  if (!dirty_[root]) {
    dirty_[root] = 1;
    dirty_roots_.push_back(root);
  }
}

void ConnectivityTracker::add_edge(Vertex u, Vertex v) {
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  Vertex ru = label_[u], rv = label_[v];
  if (ru == rv) return;
  if (members_[ru].size() < members_[rv].size()) std::swap(ru, rv);
  for (Vertex w : members_[rv]) label_[w] = ru;
  members_[ru].insert(members_[ru].end(), members_[rv].begin(), members_[rv].end());
  members_[rv].clear();
  members_[rv].shrink_to_fit();
  if (dirty_[rv]) {
    dirty_[rv] = 0;
    mark_dirty(ru);
  }
}

void ConnectivityTracker::remove_edge(Vertex u, Vertex v) {
  auto drop = [](std::vector<Vertex>& list, Vertex x) {
    auto it = std::find(list.begin(), list.end(), x);
    if (it != list.end()) {
      *it = list.back();
      list.pop_back();
    }
  };
  drop(adjacency_[u], v);
  drop(adjacency_[v], u);
  mark_dirty(label_[u]);
}

void ConnectivityTracker::refresh() {
  if (dirty_roots_.empty()) return;
  std::vector<Vertex> queue;
  for (Vertex root : dirty_roots_) {
    if (!dirty_[root]) continue;  // merged away into another dirty root
    dirty_[root] = 0;
    std::vector<Vertex> all = std::move(members_[root]);
    members_[root].clear();
    ++epoch_;
    for (Vertex s : all) {
      if (stamp_[s] == epoch_) continue;
      queue.clear();
      queue.push_back(s);
      stamp_[s] = epoch_;
      for (std::size_t head = 0; head < queue.size(); ++head)
        for (Vertex w : adjacency_[queue[head]])
          if (stamp_[w] != epoch_) {
            stamp_[w] = epoch_;
            queue.push_back(w);
          }
      for (Vertex w : queue) label_[w] = s;
      members_[s] = queue;
    }
  }
  dirty_roots_.clear();
}

Vertex ConnectivityTracker::find(Vertex v) {
  refresh();
  return label_[v];
}

std::uint32_t ConnectivityTracker::component_size(Vertex v) {
  refresh();
  return static_cast<std::uint32_t>(members_[label_[v]].size());
}

std::uint32_t ConnectivityTracker::largest_component_size() {
  refresh();
  std::size_t best = 0;
  for (const auto& m : members_) best = std::max(best, m.size());
  return static_cast<std::uint32_t>(best);
}

std::size_t ConnectivityTracker::component_count() {
  refresh();
  return static_cast<std::size_t>(std::count_if(members_.begin(), members_.end(), [](const auto& m) { return !m.empty(); }));
}

}  // namespace dynperc
