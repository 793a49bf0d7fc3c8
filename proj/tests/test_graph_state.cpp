#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "dynperc/errors.hpp"
#include "dynperc/graph_state.hpp"

using namespace dynperc;

namespace {

GraphState random_graph(std::uint32_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  return GraphState(n, edges);
}

// Cycle detection by plain DFS with parent tracking.
bool has_cycle(const GraphState& g, const std::vector<Vertex>& members) {
  std::vector<int> seen(g.n(), 0);
  std::function<bool(Vertex, Vertex)> dfs = [&](Vertex v, Vertex parent) {
    seen[v] = 1;
    bool skipped_parent = false;
    for (Vertex w : g.neighbors(v)) {
      if (w == parent && !skipped_parent) {
        skipped_parent = true;
        continue;
      }
      if (seen[w] || dfs(w, v)) return true;
    }
    return false;
  };
  return dfs(members.front(), members.front());
}

}  // namespace

TEST_CASE("p_critical values") {
  CHECK(p_critical(0.0, 1000) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK(p_critical(2.0, 4096) == 0.000274658203125);
  CHECK(p_critical(-2.0, 8) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p_critical(1e6, 10) == 1.0);
  CHECK_THROWS_AS(p_critical(1e6, 10, true), InvalidWindow);
  CHECK(lambda_for(p_critical(1.5, 5000), 5000) == doctest::Approx(1.5));
}

TEST_CASE("sample_er extremes") {
  auto full = sample_er(2, 1e6, 3);
  REQUIRE(full.edge_count() == 1);
  CHECK(full.edges()[0] == Edge{0, 1});
  auto empty = sample_gnp(5, 0.0, 3);
  CHECK(empty.edge_count() == 0);
}

TEST_CASE("sample_er edge count moments over 200 seeds") {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) total += static_cast<double>(sample_er(1000, 0.0, seed).edge_count());
  const double avg = total / 200.0;
  const double sigma = std::sqrt(499500.0 * 0.001 * 0.999) / std::sqrt(200.0);
  CHECK(std::abs(avg - 499.5) < 3.0 * sigma);
}

TEST_CASE("sampling matches Bernoulli pair frequencies at small n") {
  const std::uint32_t n = 5;
  const double p = 0.3;
  const int reps = 20000;
  std::vector<int> hits(n * n, 0);
  for (int r = 0; r < reps; ++r) {
    const auto g = sample_gnp(n, p, static_cast<std::uint64_t>(r));
    for (auto e : g.edges()) ++hits[e.u * n + e.v];
  }
  const double sigma = std::sqrt(p * (1 - p) / reps);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) CHECK(std::abs(hits[u * n + v] / double(reps) - p) < 4.0 * sigma);
}

TEST_CASE("determinism of sampling") {
  auto a = sample_er(3000, 1.0, 42);
  auto b = sample_er(3000, 1.0, 42);
  CHECK(a.edges() == b.edges());
  CHECK(to_snapshot_json(a) == to_snapshot_json(b));
}

TEST_CASE("component summaries on hand graphs") {
  SUBCASE("empty graph") {
    GraphState g(3, {});
    auto cs = components(g);
    REQUIRE(cs.size() == 3);
    for (auto& c : cs) CHECK(c.size() == doctest::Approx(std::pow(3.0, -2.0 / 3.0)));
  }
  SUBCASE("triangle") {
    GraphState g(3, {{0, 1}, {1, 2}, {0, 2}});
    auto cs = components(g);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].surplus == 1);
    CHECK(cs[0].diameter_hops == 1);
  }
  SUBCASE("path plus isolated vertex") {
    GraphState g(4, {{0, 1}, {1, 2}});
    auto cs = components(g);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].size() == doctest::Approx(3.0 * std::pow(4.0, -2.0 / 3.0)));
    CHECK(cs[1].size() == doctest::Approx(std::pow(4.0, -2.0 / 3.0)));
    CHECK(cs[0].surplus == 0);
    CHECK(cs[1].surplus == 0);
    CHECK(cs[0].id == 0);
    CHECK(cs[1].id == 3);
  }
  CHECK_THROWS_AS(component_vertices(GraphState(4, {{0, 1}}), 1), UnknownComponent);
}

TEST_CASE("sizes_rescaled") {
  GraphState g(8, {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}});
  auto s = sizes_rescaled(g);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(0.75));
  CHECK(s[2] == doctest::Approx(0.25));
  auto e = sizes_rescaled(GraphState(27, {}));
  CHECK(e.size() == 27);
  CHECK(e.sum() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("diameters") {
  GraphState path(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(component_diameter(path, 0) == doctest::Approx(4 * 0.5));
  GraphState tri(8, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(component_diameter(tri, 0) == doctest::Approx(0.5));

  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = sample_gnp(300, 1.0 / 300, rng());
    for (const auto& members : component_partition(g).members) {
      auto cs = component_summary(g, members.front());
      if (cs.surplus != 0) continue;
      CHECK(diameter_hops_two_sweep(g, members) == diameter_hops_all_source(g, members));
    }
  }
}

TEST_CASE("conservation of total mass") {
  for (std::uint32_t n : {10u, 1000u, 4096u}) {
    auto g = sample_er(n, 0.5, n);
    CHECK(std::abs(sizes_rescaled(g).sum() - std::cbrt(double(n))) < 1e-12);
  }
}

TEST_CASE("surplus is zero exactly for acyclic components") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 300; ++rep) {
    auto g = random_graph(12, 0.15, rng);
    for (const auto& members : component_partition(g).members) {
      auto cs = component_summary(g, members.front());
      CHECK((cs.surplus == 0) == !has_cycle(g, members));
    }
  }
}

TEST_CASE("adding an edge never increases distances") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = random_graph(10, 0.2, rng);
    std::vector<Edge> edges = g.edges();
    std::uniform_int_distribution<Vertex> pick(0, 9);
    Vertex a = pick(rng), b = pick(rng);
    if (a == b || g.has_edge(a, b)) continue;
    edges.push_back(make_edge(a, b));
    GraphState h(10, edges);
    for (Vertex s = 0; s < 10; ++s) {
      auto before = bfs_hops(g, s), after = bfs_hops(h, s);
      for (Vertex v = 0; v < 10; ++v)
        if (before[v] >= 0) CHECK(after[v] <= before[v]);
    }
  }
}

TEST_CASE("snapshot json round trip uses 1-based ids") {
  GraphState g(5, {{0, 4}, {1, 2}}, 0.5, 9, 1.25);
  auto text = to_snapshot_json(g);
  CHECK(text.find("[1,5]") != std::string::npos);
  auto back = from_snapshot_json(text);
  CHECK(back.n() == 5);
  CHECK(back.edges() == g.edges());
  CHECK(back.time() == 1.25);
}
