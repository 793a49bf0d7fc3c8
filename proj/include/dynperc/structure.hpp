#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynperc/graph_state.hpp"

namespace dynperc {

/// Iteratively strips vertices of degree <= 1 from the component; returns the
/// surviving vertices ascending (empty for trees).
std::vector<Vertex> two_core(const GraphState& g, Vertex component_id);

struct KernelEdge {
  Vertex u = 0;
  Vertex v = 0;  // == u for loops
  bool loop = false;
  std::uint32_t hops = 0;
  double length = 0.0;
};

/// Degree-2 chains of the 2-core contracted into single edges. Loops and
/// parallel edges are kept.
struct KernelMultigraph {
  std::vector<Vertex> vertices;
  std::vector<KernelEdge> edges;

  std::int64_t surplus() const {
    return static_cast<std::int64_t>(edges.size()) - static_cast<std::int64_t>(vertices.size()) + 1;
  }
  double total_length() const;
};

/// Kernel of a component with surplus >= 2; NoKernel otherwise.
KernelMultigraph kernel(const GraphState& g, Vertex component_id);

/// {"vertices":[...],"edges":[{"u","v","loop","length"}]}, 1-based ids.
std::string to_json(const KernelMultigraph& k);

/// Core plus every vertex x on a path from some y towards the core with
/// d(y, x) >= eta. Tree components need `root`, which then plays the role of
/// the core (EmptyCore without it).
std::vector<Vertex> trim_hanging(const GraphState& g, Vertex component_id, double eta,
                                 std::optional<Vertex> root = std::nullopt);

struct Projection {
  Vertex vertex = 0;
  Vertex core_vertex = 0;
  std::uint32_t hops = 0;
  double distance = 0.0;
};

/// Nearest 2-core vertex of every vertex of the component (unique since the
/// parts hanging off the core are trees). EmptyCore for trees.
std::vector<Projection> alpha_projection(const GraphState& g, Vertex component_id);

/// Depth-first height process over the whole graph.
struct HeightProfile {
  std::vector<double> heights;
  std::vector<std::size_t> boundaries;  // start index of each excursion
  double index_step = 1.0;              // rescaled time per exploration step
};

/// Components in ascending id order, each explored from its smallest vertex;
/// heights are tree depths times n^{-1/3}, steps are n^{-2/3} apart.
HeightProfile exploration_height(const GraphState& g);

/// Largest |h(x) - h(y)| over pairs in the same excursion at rescaled index
/// distance <= epsilon.
double oscillation(const HeightProfile& profile, double epsilon);

/// 2 * height * (1 + surplus).
double suplength_bound(const ComponentSummary& summary);

struct SuplengthReport {
  double bound = 0.0;
  std::optional<double> exact;  // only for surplus <= 1
};

/// Bound plus, for surplus <= 1, the exact longest simple path.
SuplengthReport suplength(const GraphState& g, Vertex component_id);

/// Longest simple path (in hops) of a component with surplus <= 1.
std::uint32_t longest_path_hops(const GraphState& g, Vertex component_id);

}  // namespace dynperc
