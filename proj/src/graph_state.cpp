#include "dynperc/graph_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "dynperc/errors.hpp"
#include "dynperc/random.hpp"

namespace dynperc {

double mass_unit(std::uint64_t n) {
  const double c = std::cbrt(static_cast<double>(n));
  return 1.0 / (c * c);
}

double length_unit(std::uint64_t n) { return 1.0 / std::cbrt(static_cast<double>(n)); }

double p_critical(double lambda, std::uint64_t n, bool strict) {
  if (n == 0) throw InvalidWindow("p_critical: n must be positive");
  const double nd = static_cast<double>(n);
  const double c = std::cbrt(nd);
  // n^{-4/3} = 1 / (n * n^{1/3})
  const double raw = 1.0 / nd + lambda / (nd * c);
  if (raw < 0.0 || raw > 1.0 || std::isnan(raw)) {
    if (strict) throw InvalidWindow("p_critical: raw probability " + std::to_string(raw) + " outside [0,1]");
    if (std::isnan(raw)) throw InvalidWindow("p_critical: lambda is NaN");
    return std::clamp(raw, 0.0, 1.0);
  }
  return raw;
}

double lambda_for(double p, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return (p - 1.0 / nd) * nd * std::cbrt(nd);
}

GraphState::GraphState(std::uint32_t n, std::vector<Edge> edges, double lambda, std::uint64_t seed, double time)
    : n_(n), lambda_(lambda), seed_(seed), time_(time), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u == e.v) throw FormatError("GraphState: self-loop on vertex " + std::to_string(e.u));
    if (e.u >= n_ || e.v >= n_) throw FormatError("GraphState: edge endpoint out of range");
    e = make_edge(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw FormatError("GraphState: duplicate edge");

  offsets_.assign(std::size_t(n_) + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adj_.resize(edges_.size() * 2);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adj_[fill[e.u]++] = e.v;
    adj_[fill[e.v]++] = e.u;
  }
  for (Vertex v = 0; v < n_; ++v) std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1]);
}

bool GraphState::has_edge(Vertex a, Vertex b) const {
  if (a >= n_ || b >= n_ || a == b) return false;
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

namespace {

std::uint64_t pair_count(std::uint64_t n) { return n * (n - 1) / 2; }

std::uint64_t pair_key(Vertex u, Vertex v, std::uint64_t n) { return std::uint64_t(u) * n + v; }

// Uniform set of `count` distinct unordered pairs out of C(n,2).
std::vector<Edge> draw_distinct_pairs(std::uint32_t n, std::uint64_t count, Engine& rng) {
  std::uniform_int_distribution<Vertex> first(0, n - 1);
  std::uniform_int_distribution<Vertex> second(0, n - 2);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  std::vector<Edge> out;
  out.reserve(count);
  while (out.size() < count) {
    Vertex a = first(rng);
    Vertex b = second(rng);
    if (b >= a) ++b;
    Edge e = make_edge(a, b);
    if (seen.insert(pair_key(e.u, e.v, n)).second) out.push_back(e);
  }
  return out;
}

}  // namespace

GraphState sample_gnp(std::uint32_t n, double p, std::uint64_t seed) {
  if (n < 2) throw InvalidWindow("sample_gnp: n must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidWindow("sample_gnp: p outside [0,1]");
  auto rng = make_stream(seed, "edges");
  const std::uint64_t total = pair_count(n);
  std::binomial_distribution<std::uint64_t> binom(total, p);
  const std::uint64_t count = binom(rng);

  std::vector<Edge> edges;
  if (count <= total / 2) {
    edges = draw_distinct_pairs(n, count, rng);
  } else {
    auto absent = draw_distinct_pairs(n, total - count, rng);
    std::sort(absent.begin(), absent.end());
    edges.reserve(count);
    auto it = absent.begin();
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) {
        Edge e{u, v};
        if (it != absent.end() && *it == e) {
          ++it;
          continue;
        }
        edges.push_back(e);
      }
  }
  return GraphState(n, std::move(edges), lambda_for(p, n), seed);
}

GraphState sample_er(std::uint32_t n, double lambda, std::uint64_t seed, bool strict) {
  GraphState g = sample_gnp(n, p_critical(lambda, n, strict), seed);
  return GraphState(n, g.edges(), lambda, seed);
}

Partition component_partition(const GraphState& g) {
  const Vertex n = g.n();
  Partition out;
  out.label.assign(n, std::numeric_limits<Vertex>::max());
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    if (out.label[s] != std::numeric_limits<Vertex>::max()) continue;
    queue.clear();
    queue.push_back(s);
    out.label[s] = s;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (Vertex w : g.neighbors(queue[head]))
        if (out.label[w] != s) {
          out.label[w] = s;
          queue.push_back(w);
        }
    std::sort(queue.begin(), queue.end());
    out.members.push_back(queue);
  }
  return out;
}

std::vector<std::int32_t> bfs_hops(const GraphState& g, Vertex source) {
  std::vector<std::int32_t> dist(g.n(), -1);
  std::vector<Vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    for (Vertex w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

namespace {

// BFS restricted to the component of `source`, reusing `dist` (must be -1 on
// the component on entry; restored on exit). Returns (farthest vertex, ecc).
std::pair<Vertex, std::uint32_t> eccentricity(const GraphState& g, Vertex source, std::vector<std::int32_t>& dist,
                                              std::vector<Vertex>& queue) {
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  Vertex far = source;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    if (dist[v] > dist[far]) far = v;
    for (Vertex w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  const auto ecc = static_cast<std::uint32_t>(dist[far]);
  for (Vertex v : queue) dist[v] = -1;
  return {far, ecc};
}

}  // namespace

std::uint32_t diameter_hops_all_source(const GraphState& g, std::span<const Vertex> members) {
  std::vector<std::int32_t> dist(g.n(), -1);
  std::vector<Vertex> queue;
  queue.reserve(members.size());
  std::uint32_t best = 0;
  for (Vertex s : members) best = std::max(best, eccentricity(g, s, dist, queue).second);
  return best;
}

std::uint32_t diameter_hops_two_sweep(const GraphState& g, std::span<const Vertex> members) {
  if (members.empty()) return 0;
  std::vector<std::int32_t> dist(g.n(), -1);
  std::vector<Vertex> queue;
  auto [far, ecc0] = eccentricity(g, members.front(), dist, queue);
  return eccentricity(g, far, dist, queue).second;
}

std::vector<std::pair<Vertex, std::uint32_t>> explore_depth_first(const GraphState& g, Vertex root) {
  std::vector<std::pair<Vertex, std::uint32_t>> order;
  std::unordered_set<Vertex> seen{root};
  std::vector<std::pair<Vertex, std::uint32_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [v, depth] = stack.back();
    stack.pop_back();
    order.emplace_back(v, depth);
    auto nb = g.neighbors(v);
    for (auto it = nb.rbegin(); it != nb.rend(); ++it)
      if (seen.insert(*it).second) stack.emplace_back(*it, depth + 1);
  }
  return order;
}

namespace {

ComponentSummary summarize(const GraphState& g, const std::vector<Vertex>& members, SummaryOptions options,
                           std::vector<std::int32_t>& dist, std::vector<Vertex>& queue) {
  ComponentSummary s;
  s.id = members.front();
  s.n_vertices = static_cast<std::uint32_t>(members.size());
  std::uint64_t degree_sum = 0;
  for (Vertex v : members) degree_sum += g.degree(v);
  s.n_edges = degree_sum / 2;
  s.surplus = s.n_edges + 1 - s.n_vertices;
  s.mass_unit = g.mass_per_vertex();
  s.length_unit = g.length_per_edge();
  if (options.diameter && members.size() > 1) {
    if (s.surplus == 0) {
      auto [far, ecc0] = eccentricity(g, s.id, dist, queue);
      s.diameter_hops = eccentricity(g, far, dist, queue).second;
    } else {
      for (Vertex v : members) s.diameter_hops = std::max(s.diameter_hops, eccentricity(g, v, dist, queue).second);
    }
  }
  if (options.height && members.size() > 1) {
    for (const auto& [v, depth] : explore_depth_first(g, s.id)) s.height_hops = std::max(s.height_hops, depth);
  }
  return s;
}

void sort_summaries(std::vector<ComponentSummary>& out) {
  std::sort(out.begin(), out.end(), [](const ComponentSummary& a, const ComponentSummary& b) {
    if (a.n_vertices != b.n_vertices) return a.n_vertices > b.n_vertices;
    return a.id < b.id;
  });
}

}  // namespace

std::vector<ComponentSummary> components(const GraphState& g, SummaryOptions options) {
  const Partition part = component_partition(g);
  std::vector<std::int32_t> dist(g.n(), -1);
  std::vector<Vertex> queue;
  std::vector<ComponentSummary> out;
  out.reserve(part.members.size());
  for (const auto& m : part.members) out.push_back(summarize(g, m, options, dist, queue));
  sort_summaries(out);
  return out;
}

std::vector<Vertex> component_vertices(const GraphState& g, Vertex component_id) {
  if (component_id >= g.n()) throw UnknownComponent("no vertex " + std::to_string(component_id));
  auto dist = bfs_hops(g, component_id);
  std::vector<Vertex> members;
  for (Vertex v = 0; v < g.n(); ++v)
    if (dist[v] >= 0) members.push_back(v);
  if (members.front() != component_id)
    throw UnknownComponent("vertex " + std::to_string(component_id) + " is not a canonical component id");
  return members;
}

ComponentSummary component_summary(const GraphState& g, Vertex component_id, SummaryOptions options) {
  auto members = component_vertices(g, component_id);
  std::vector<std::int32_t> dist(g.n(), -1);
  std::vector<Vertex> queue;
  return summarize(g, members, options, dist, queue);
}

double component_diameter(const GraphState& g, Vertex component_id) {
  auto members = component_vertices(g, component_id);
  return diameter_hops_all_source(g, members) * g.length_per_edge();
}

SizeSequence::SizeSequence(std::vector<std::uint64_t> counts, double unit) : unit_(unit), counted_(true) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  values_.reserve(counts.size());
  for (auto c : counts) {
    values_.push_back(static_cast<double>(c) * unit);
    total_count_ += c;
  }
}

SizeSequence::SizeSequence(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!(v >= 0.0)) throw DomainError("SizeSequence: negative or NaN entry");
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

double SizeSequence::sum() const {
  if (counted_) return static_cast<double>(total_count_) * unit_;
  // ascending order keeps the rounding error small
  double s = 0.0;
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) s += *it;
  return s;
}

double SizeSequence::sum_of_squares() const {
  double s = 0.0;
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) s += *it * *it;
  return s;
}

SizeSequence sizes_rescaled(const GraphState& g) {
  const Partition part = component_partition(g);
  std::vector<std::uint64_t> counts;
  counts.reserve(part.members.size());
  for (const auto& m : part.members) counts.push_back(m.size());
  return SizeSequence(std::move(counts), g.mass_per_vertex());
}

std::string to_snapshot_json(const GraphState& g) {
  nlohmann::ordered_json j;
  j["n"] = g.n();
  j["lambda"] = g.lambda();
  j["seed"] = g.seed();
  j["time"] = g.time();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1});
  j["edges"] = std::move(edges);
  return j.dump();
}

GraphState from_snapshot_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("snapshot: ") + e.what());
  }
  try {
    const auto n = j.at("n").get<std::uint32_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      const auto u = e.at(0).get<std::uint32_t>();
      const auto v = e.at(1).get<std::uint32_t>();
      if (u < 1 || v < 1 || u > n || v > n || u >= v) throw FormatError("snapshot: edge must satisfy 1 <= u < v <= n");
      edges.push_back({u - 1, v - 1});
    }
    return GraphState(n, std::move(edges), j.at("lambda").get<double>(), j.at("seed").get<std::uint64_t>(),
                      j.at("time").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("snapshot: ") + e.what());
  }
}

}  // namespace dynperc
