#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dynperc/graph_state.hpp"

namespace dynperc {

/// Finite metric space with a measure (and optionally a surplus annotation).
struct FiniteMeasuredSpace {
  Eigen::MatrixXd dist;
  Eigen::VectorXd mass;
  std::optional<std::int64_t> surplus;

  std::size_t size() const { return static_cast<std::size_t>(mass.size()); }
  double total_mass() const { return mass.sum(); }
  double diameter() const { return dist.size() ? dist.maxCoeff() : 0.0; }
  /// InvalidSpace unless square, symmetric, zero diagonal, nonnegative,
  /// triangle inequality within 1e-9, nonnegative masses, nonempty.
  void validate() const;

  static FiniteMeasuredSpace point(double mass, std::optional<std::int64_t> surplus = std::nullopt);
};

using Collection = std::vector<FiniteMeasuredSpace>;

/// Rescaled component: hop distances times n^{-1/3}, mass n^{-2/3} per vertex,
/// surplus annotated. TooLarge above `cap` vertices.
FiniteMeasuredSpace from_component(const GraphState& g, Vertex component_id, std::size_t cap = 4096);

using Correspondence = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// NotACorrespondence unless R covers both index sets.
double distortion(const Correspondence& r, const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b);

/// Best coupling term for a fixed correspondence:
/// max(|M - M'|, (M + M' - 2F) / 3) with F the largest mass of a sub-coupling
/// (marginals below mu, mu') supported on R.
double coupling_term(const Correspondence& r, const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b);

/// Exact value by enumerating correspondences; TooLargeForExact when
/// size(A) * size(B) > 20.
double dghp_exact(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b);

struct DghpBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = max(|M - M'|, |diam A - diam B| / 2); upper = best value found over
/// the full correspondence and greedy profile matchings refined by local moves.
DghpBounds dghp_bounds(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b);

enum class DghpMode { exact, bounds };

struct DghpValue {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  double value() const { return upper; }
};

DghpValue dghp(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b, DghpMode mode);
/// Exact when the cap allows, bounds otherwise.
DghpValue dghp_auto(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b);

/// Largest total flow from sources (capacity `supply`) to sinks (capacity
/// `demand`) along the allowed pairs.
double bipartite_max_flow(const std::vector<double>& supply, const std::vector<double>& demand,
                          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& allowed);

/// Levy-Prokhorov distance between two atomic measures whose atoms are at
/// the given cross distances: min over thresholds D of max(D, max(total) - F(D)).
double rho_lp_atomic(const std::vector<double>& w, const std::vector<double>& w_prime, const Eigen::MatrixXd& cross);

/// 1 above 1/k, linear on [1/(k+1), 1/k), 0 below.
double f_k(double mass, int k);

struct RhoResult {
  double value = 0.0;
  bool exact = true;  // false when some pairwise distance was an upper bound
};

/// Atoms are the spaces, weighted by f_k(total mass) when k is given (else 1),
/// at pairwise d_GHP (exact when the cap allows, upper bound otherwise).
RhoResult rho_lp(const Collection& a, const Collection& b, std::optional<int> k = std::nullopt);

/// Pairwise d_GHP matrix (rows: a, columns: b), computed in parallel.
Eigen::MatrixXd dghp_matrix(const Collection& a, const Collection& b, bool* all_exact = nullptr);

struct LghpResult {
  double value = 0.0;
  double tail_bound = 0.0;  // sum of the omitted terms is below this
  int terms = 0;
  bool exact = true;
};

LghpResult l_ghp(const Collection& a, const Collection& b, double tol = 1e-6);

/// max(L_GHP, l^p distance of the zero-padded sorted size sequences); p in {1, 2}.
double lp_ghp(const Collection& a, const Collection& b, int p, double tol = 1e-6);
double size_distance(const Collection& a, const Collection& b, int p);

/// max(exact d_GHP, |surplus difference|); MissingSurplus without annotations.
double dghp_surplus(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b);

/// {"dist":[[...]],"mass":[...],"surplus":int|null}
std::string to_json(const FiniteMeasuredSpace& s);
std::string to_json(const Collection& c);
FiniteMeasuredSpace space_from_json(std::string_view text);
/// Accepts a single space object or an array of them.
Collection collection_from_json(std::string_view text);

}  // namespace dynperc
