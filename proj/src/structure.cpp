#include "dynperc/structure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "dynperc/errors.hpp"

namespace dynperc {

namespace {

// Index of each member within the component, for dense per-component arrays.
struct LocalIndex {
  std::vector<Vertex> members;
  std::unordered_map<Vertex, std::uint32_t> index;

  explicit LocalIndex(std::vector<Vertex> m) : members(std::move(m)) {
    index.reserve(members.size() * 2);
    for (std::uint32_t i = 0; i < members.size(); ++i) index.emplace(members[i], i);
  }
  std::uint32_t operator()(Vertex v) const { return index.at(v); }
  std::size_t size() const { return members.size(); }
};

std::vector<char> core_mask(const GraphState& g, const LocalIndex& local) {
  const std::size_t k = local.size();
  std::vector<std::uint32_t> deg(k);
  std::vector<char> alive(k, 1);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t i = 0; i < k; ++i) {
    deg[i] = g.degree(local.members[i]);
    if (deg[i] <= 1) stack.push_back(i);
  }
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    if (!alive[i]) continue;
    alive[i] = 0;
    for (Vertex w : g.neighbors(local.members[i])) {
      auto j = local(w);
      if (alive[j] && --deg[j] == 1) stack.push_back(j);
    }
  }
  return alive;
}

}  // namespace

std::vector<Vertex> two_core(const GraphState& g, Vertex component_id) {
  LocalIndex local(component_vertices(g, component_id));
  auto alive = core_mask(g, local);
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < local.size(); ++i)
    if (alive[i]) out.push_back(local.members[i]);
  return out;
}

double KernelMultigraph::total_length() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.length;
  return s;
}

KernelMultigraph kernel(const GraphState& g, Vertex component_id) {
  const auto summary = component_summary(g, component_id, {.diameter = false, .height = false});
  if (summary.surplus < 2)
    throw NoKernel("component " + std::to_string(component_id) + " has surplus " + std::to_string(summary.surplus));

  LocalIndex local(component_vertices(g, component_id));
  const auto alive = core_mask(g, local);
  auto core_neighbors = [&](Vertex v) {
    std::vector<Vertex> out;
    for (Vertex w : g.neighbors(v))
      if (alive[local(w)]) out.push_back(w);
    return out;
  };

  KernelMultigraph k;
  std::unordered_set<Vertex> is_kernel;
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (!alive[i]) continue;
    Vertex v = local.members[i];
    if (core_neighbors(v).size() >= 3) {
      k.vertices.push_back(v);
      is_kernel.insert(v);
    }
  }

  const double unit = g.length_per_edge();
  std::unordered_set<std::uint64_t> used;  // directed first steps already walked
  auto key = [&](Vertex a, Vertex b) { return std::uint64_t(a) * g.n() + b; };
  for (Vertex start : k.vertices) {
    for (Vertex first : core_neighbors(start)) {
      if (used.count(key(start, first))) continue;
      used.insert(key(start, first));
      Vertex prev = start;
      Vertex cur = first;
      std::uint32_t hops = 1;
      while (!is_kernel.count(cur)) {
        auto nb = core_neighbors(cur);
        Vertex next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
        ++hops;
      }
      used.insert(key(cur, prev));
      KernelEdge e;
      e.u = std::min(start, cur);
      e.v = std::max(start, cur);
      e.loop = start == cur;
      e.hops = hops;
      e.length = hops * unit;
      k.edges.push_back(e);
    }
  }
  return k;
}

std::string to_json(const KernelMultigraph& k) {
  nlohmann::ordered_json j;
  auto vs = nlohmann::ordered_json::array();
  for (Vertex v : k.vertices) vs.push_back(v + 1);
  j["vertices"] = std::move(vs);
  auto es = nlohmann::ordered_json::array();
  for (const auto& e : k.edges) {
    nlohmann::ordered_json o;
    o["u"] = e.u + 1;
    o["v"] = e.v + 1;
    o["loop"] = e.loop;
    o["length"] = e.length;
    es.push_back(std::move(o));
  }
  j["edges"] = std::move(es);
  return j.dump();
}

namespace {

// Multi-source BFS from `sources` inside the component. parent[i] is the local
// index of the neighbour one step closer to the sources (self for sources).
struct Descent {
  std::vector<std::uint32_t> order;  // BFS order, sources first
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> hops;
  std::vector<std::uint32_t> origin;  // local index of the reached source
};

Descent descend(const GraphState& g, const LocalIndex& local, const std::vector<std::uint32_t>& sources) {
  const auto none = static_cast<std::uint32_t>(-1);
  Descent d;
  d.parent.assign(local.size(), none);
  d.hops.assign(local.size(), 0);
  d.origin.assign(local.size(), none);
  for (auto s : sources) {
    d.parent[s] = s;
    d.origin[s] = s;
    d.order.push_back(s);
  }
  for (std::size_t head = 0; head < d.order.size(); ++head) {
    auto i = d.order[head];
    for (Vertex w : g.neighbors(local.members[i])) {
      auto j = local(w);
      if (d.parent[j] != none) continue;
      d.parent[j] = i;
      d.hops[j] = d.hops[i] + 1;
      d.origin[j] = d.origin[i];
      d.order.push_back(j);
    }
  }
  return d;
}

}  // namespace

std::vector<Vertex> trim_hanging(const GraphState& g, Vertex component_id, double eta, std::optional<Vertex> root) {
  if (eta < 0.0) throw DomainError("trim_hanging: eta must be nonnegative");
  LocalIndex local(component_vertices(g, component_id));
  const auto alive = core_mask(g, local);

  std::vector<std::uint32_t> sources;
  for (std::uint32_t i = 0; i < local.size(); ++i)
    if (alive[i]) sources.push_back(i);
  if (sources.empty()) {
    if (!root) throw EmptyCore("trim_hanging: tree component needs a root");
    if (!local.index.count(*root)) throw UnknownComponent("trim_hanging: root not in component");
    sources.push_back(local(*root));
  }
  const Descent d = descend(g, local, sources);

  // Longest downward distance from each vertex into its hanging subtree.
  std::vector<std::uint32_t> below(local.size(), 0);
  for (auto it = d.order.rbegin(); it != d.order.rend(); ++it) {
    auto i = *it;
    if (d.parent[i] != i) below[d.parent[i]] = std::max(below[d.parent[i]], below[i] + 1);
  }

  const double eta_hops = eta / g.length_per_edge();
  std::vector<Vertex> out;
  for (std::uint32_t i = 0; i < local.size(); ++i) {
    const bool in_core = alive[i] != 0;
    if (in_core || below[i] >= eta_hops - 1e-9) out.push_back(local.members[i]);
  }
  return out;
}

std::vector<Projection> alpha_projection(const GraphState& g, Vertex component_id) {
  LocalIndex local(component_vertices(g, component_id));
  const auto alive = core_mask(g, local);
  std::vector<std::uint32_t> sources;
  for (std::uint32_t i = 0; i < local.size(); ++i)
    if (alive[i]) sources.push_back(i);
  if (sources.empty()) throw EmptyCore("alpha_projection: component " + std::to_string(component_id) + " is a tree");
  const Descent d = descend(g, local, sources);
  std::vector<Projection> out(local.size());
  for (std::uint32_t i = 0; i < local.size(); ++i) {
    out[i].vertex = local.members[i];
    out[i].core_vertex = local.members[d.origin[i]];
    out[i].hops = d.hops[i];
    out[i].distance = d.hops[i] * g.length_per_edge();
  }
  return out;
}

HeightProfile exploration_height(const GraphState& g) {
  HeightProfile profile;
  profile.index_step = g.mass_per_vertex();
  profile.heights.reserve(g.n());
  const double unit = g.length_per_edge();
  const Partition part = component_partition(g);
  for (const auto& members : part.members) {
    profile.boundaries.push_back(profile.heights.size());
    for (const auto& [v, depth] : explore_depth_first(g, members.front())) profile.heights.push_back(depth * unit);
  }
  return profile;
}

double oscillation(const HeightProfile& profile, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("oscillation: epsilon must be positive");
  const auto window = static_cast<std::size_t>(std::floor(epsilon / profile.index_step + 1e-9));
  if (window == 0) return 0.0;
  const auto& h = profile.heights;
  double best = 0.0;
  for (std::size_t b = 0; b < profile.boundaries.size(); ++b) {
    const std::size_t lo = profile.boundaries[b];
    const std::size_t hi = b + 1 < profile.boundaries.size() ? profile.boundaries[b + 1] : h.size();
    // Sliding window of window+1 consecutive indices; monotone deques give
    // the running max and min.
    std::deque<std::size_t> mx, mn;
    for (std::size_t i = lo; i < hi; ++i) {
      while (!mx.empty() && h[mx.back()] <= h[i]) mx.pop_back();
      while (!mn.empty() && h[mn.back()] >= h[i]) mn.pop_back();
      mx.push_back(i);
      mn.push_back(i);
      while (mx.front() + window < i) mx.pop_front();
      while (mn.front() + window < i) mn.pop_front();
      best = std::max(best, h[mx.front()] - h[mn.front()]);
    }
  }
  return best;
}

double suplength_bound(const ComponentSummary& summary) {
  return 2.0 * summary.height() * (1.0 + static_cast<double>(summary.surplus));
}

std::uint32_t longest_path_hops(const GraphState& g, Vertex component_id) {
  const auto summary = component_summary(g, component_id, {.diameter = true, .height = false});
  if (summary.surplus == 0) return summary.diameter_hops;
  if (summary.surplus > 1) throw DomainError("longest_path_hops: surplus >= 2 is not supported");

  LocalIndex local(component_vertices(g, component_id));
  const auto alive = core_mask(g, local);

  // Walk the cycle in order.
  std::vector<std::uint32_t> cycle;
  std::uint32_t start = 0;
  while (!alive[start]) ++start;
  std::uint32_t prev = start, cur = start;
  do {
    cycle.push_back(cur);
    std::uint32_t next = cur;
    for (Vertex w : g.neighbors(local.members[cur])) {
      auto j = local(w);
      if (alive[j] && j != prev) {
        next = j;
        break;
      }
    }
    prev = cur;
    cur = next;
  } while (cur != start);

  // BFS inside the tree hanging at cycle vertex c (other cycle vertices blocked).
  std::vector<std::int32_t> dist(local.size(), -1);
  auto tree_bfs = [&](std::uint32_t src, std::uint32_t anchor) {
    std::vector<std::uint32_t> queue{src};
    dist[src] = 0;
    std::uint32_t far = src;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto i = queue[head];
      if (dist[i] > dist[far]) far = i;
      for (Vertex w : g.neighbors(local.members[i])) {
        auto j = local(w);
        if (dist[j] >= 0 || (alive[j] && j != anchor)) continue;
        dist[j] = dist[i] + 1;
        queue.push_back(j);
      }
    }
    auto ecc = static_cast<std::uint32_t>(dist[far]);
    for (auto i : queue) dist[i] = -1;
    return std::pair{far, ecc};
  };

  const auto len = static_cast<std::uint32_t>(cycle.size());
  std::vector<std::uint32_t> depth(len);
  std::uint32_t best = 0;
  for (std::uint32_t i = 0; i < len; ++i) {
    auto [far, ecc] = tree_bfs(cycle[i], cycle[i]);
    depth[i] = ecc;
    best = std::max(best, tree_bfs(far, cycle[i]).second);
  }
  for (std::uint32_t i = 0; i < len; ++i)
    for (std::uint32_t j = i + 1; j < len; ++j) {
      const std::uint32_t gap = j - i;
      best = std::max(best, depth[i] + depth[j] + std::max(gap, len - gap));
    }
  return best;
}

SuplengthReport suplength(const GraphState& g, Vertex component_id) {
  const auto summary = component_summary(g, component_id);
  SuplengthReport r;
  r.bound = suplength_bound(summary);
  if (summary.surplus <= 1) r.exact = longest_path_hops(g, component_id) * g.length_per_edge();
  return r;
}

}  // namespace dynperc
