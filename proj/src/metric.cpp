#include "dynperc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "dynperc/errors.hpp"
#include "dynperc/parallel.hpp"

namespace dynperc {

void FiniteMeasuredSpace::validate() const {
  const auto k = mass.size();
  if (k == 0) throw InvalidSpace("space must have at least one point");
  if (dist.rows() != k || dist.cols() != k) throw InvalidSpace("distance matrix must be k x k with k = mass length");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(mass[i] >= 0.0) || !std::isfinite(mass[i])) throw InvalidSpace("masses must be finite and nonnegative");
    if (dist(i, i) != 0.0) throw InvalidSpace("nonzero diagonal entry");
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!(dist(i, j) >= 0.0) || !std::isfinite(dist(i, j))) throw InvalidSpace("distances must be finite and nonnegative");
      if (dist(i, j) != dist(j, i)) throw InvalidSpace("distance matrix is not symmetric");
    }
  }
  for (Eigen::Index m = 0; m < k; ++m)
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        if (dist(i, j) > dist(i, m) + dist(m, j) + 1e-9) throw InvalidSpace("triangle inequality fails");
  if (surplus && *surplus < 0) throw InvalidSpace("surplus must be nonnegative");
}

FiniteMeasuredSpace FiniteMeasuredSpace::point(double mass, std::optional<std::int64_t> surplus) {
  FiniteMeasuredSpace s;
  s.dist = Eigen::MatrixXd::Zero(1, 1);
  s.mass = Eigen::VectorXd::Constant(1, mass);
  s.surplus = surplus;
  return s;
}

FiniteMeasuredSpace from_component(const GraphState& g, Vertex component_id, std::size_t cap) {
  const auto members = component_vertices(g, component_id);
  if (members.size() > cap)
    throw TooLarge("component has " + std::to_string(members.size()) + " vertices, cap is " + std::to_string(cap));
  const auto k = static_cast<Eigen::Index>(members.size());
  FiniteMeasuredSpace s;
  s.dist.resize(k, k);
  s.mass = Eigen::VectorXd::Constant(k, g.mass_per_vertex());
  std::vector<std::int32_t> local(g.n(), -1);
  for (Eigen::Index i = 0; i < k; ++i) local[members[i]] = static_cast<std::int32_t>(i);
  std::vector<std::int32_t> hops(members.size());
  std::vector<Vertex> queue;
  queue.reserve(members.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    std::fill(hops.begin(), hops.end(), -1);
    queue.assign(1, members[i]);
    hops[i] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (Vertex w : g.neighbors(v))
        if (hops[local[w]] < 0) {
          hops[local[w]] = hops[local[v]] + 1;
          queue.push_back(w);
        }
    }
    for (Eigen::Index j = 0; j < k; ++j) s.dist(i, j) = hops[j] * g.length_per_edge();
  }
  std::uint64_t degree_sum = 0;
  for (Vertex v : members) degree_sum += g.degree(v);
  s.surplus = static_cast<std::int64_t>(degree_sum / 2) + 1 - static_cast<std::int64_t>(members.size());
  return s;
}

namespace {

void require_correspondence(const Correspondence& r, std::size_t ka, std::size_t kb) {
  std::vector<bool> ca(ka, false), cb(kb, false);
  for (auto [i, j] : r) {
    if (i >= ka || j >= kb) throw NotACorrespondence("pair index out of range");
    ca[i] = true;
    cb[j] = true;
  }
  if (std::find(ca.begin(), ca.end(), false) != ca.end() || std::find(cb.begin(), cb.end(), false) != cb.end())
    throw NotACorrespondence("relation does not cover both spaces");
}

double raw_distortion(const Correspondence& r, const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  double d = 0.0;
  for (std::size_t p = 0; p < r.size(); ++p)
    for (std::size_t q = p + 1; q < r.size(); ++q)
      d = std::max(d, std::abs(a.dist(r[p].first, r[q].first) - b.dist(r[p].second, r[q].second)));
  return d;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

double distortion(const Correspondence& r, const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  require_correspondence(r, a.size(), b.size());
  return raw_distortion(r, a, b);
}

double bipartite_max_flow(const std::vector<double>& supply, const std::vector<double>& demand,
                          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& allowed) {
  // Dinic on source, supply nodes, demand nodes, sink.
  const std::size_t na = supply.size(), nb = demand.size();
  const std::size_t source = na + nb, sink = source + 1, nodes = sink + 1;
  struct Arc {
    std::size_t to;
    double cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> out(nodes);
  auto add = [&](std::size_t u, std::size_t v, double c) {
    out[u].push_back(arcs.size());
    arcs.push_back({v, c});
    out[v].push_back(arcs.size());
    arcs.push_back({u, 0.0});
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    add(source, i, supply[i]);
    scale += supply[i];
  }
  for (std::size_t j = 0; j < nb; ++j) add(na + j, sink, demand[j]);
  const double inf = std::numeric_limits<double>::infinity();
  for (auto [i, j] : allowed) add(i, na + j, inf);
  const double tiny = 1e-15 * std::max(1.0, scale);

  std::vector<int> level(nodes);
  std::vector<std::size_t> next(nodes);
  auto bfs = [&] {
    std::fill(level.begin(), level.end(), -1);
    std::vector<std::size_t> queue{source};
    level[source] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (std::size_t id : out[queue[h]])
        if (arcs[id].cap > tiny && level[arcs[id].to] < 0) {
          level[arcs[id].to] = level[queue[h]] + 1;
          queue.push_back(arcs[id].to);
        }
    return level[sink] >= 0;
  };
  auto dfs = [&](auto&& self, std::size_t v, double f) -> double {
    if (v == sink) return f;
    for (; next[v] < out[v].size(); ++next[v]) {
      const std::size_t id = out[v][next[v]];
      Arc& arc = arcs[id];
      if (arc.cap <= tiny || level[arc.to] != level[v] + 1) continue;
      const double pushed = self(self, arc.to, std::min(f, arc.cap));
      if (pushed > tiny) {
        arc.cap -= pushed;
        arcs[id ^ 1].cap += pushed;
        return pushed;
      }
    }
    return 0.0;
  };
  double flow = 0.0;
  while (bfs()) {
    std::fill(next.begin(), next.end(), 0);
    while (true) {
      const double f = dfs(dfs, source, inf);
      if (f <= tiny) break;
      flow += f;
    }
  }
  return flow;
}

double coupling_term(const Correspondence& r, const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  const double m = a.total_mass(), mp = b.total_mass();
  const double f = bipartite_max_flow(to_vector(a.mass), to_vector(b.mass), r);
  return std::max(std::abs(m - mp), (m + mp - 2.0 * f) / 3.0);
}

namespace {

double lower_bound(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  return std::max(std::abs(a.total_mass() - b.total_mass()), std::abs(a.diameter() - b.diameter()) / 2.0);
}

double correspondence_value(const Correspondence& r, const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  return std::max(raw_distortion(r, a, b) / 2.0, coupling_term(r, a, b));
}

bool covers(const Correspondence& r, std::size_t ka, std::size_t kb) {
  std::vector<bool> ca(ka, false), cb(kb, false);
  for (auto [i, j] : r) ca[i] = cb[j] = true;
  return std::find(ca.begin(), ca.end(), false) == ca.end() && std::find(cb.begin(), cb.end(), false) == cb.end();
}

bool identical(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  return a.size() == b.size() && a.dist == b.dist && a.mass == b.mass;
}

}  // namespace

double dghp_exact(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  const std::size_t ka = a.size(), kb = b.size();
  if (ka * kb > 20) throw TooLargeForExact("size product " + std::to_string(ka * kb) + " exceeds 20");
  if (ka == 0 || kb == 0) throw InvalidSpace("empty space");
  Correspondence pairs;
  for (std::uint32_t i = 0; i < ka; ++i)
    for (std::uint32_t j = 0; j < kb; ++j) pairs.emplace_back(i, j);
  const std::size_t P = pairs.size();
  // gap[p][q]: distortion contributed by having both pairs
  std::vector<double> gap(P * P);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < P; ++q)
      gap[p * P + q] = std::abs(a.dist(pairs[p].first, pairs[q].first) - b.dist(pairs[p].second, pairs[q].second));

  const double floor = std::abs(a.total_mass() - b.total_mass());
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> chosen;
  std::vector<char> in(P, 0);

  auto evaluate = [&](double dis) {
    for (std::size_t q = 0; q < P; ++q) {
      if (in[q]) continue;
      double add = 0.0;
      for (std::size_t p : chosen) add = std::max(add, gap[p * P + q]);
      if (add <= dis) return;  // a larger relation with the same distortion dominates
    }
    Correspondence r;
    for (std::size_t p : chosen) r.push_back(pairs[p]);
    if (!covers(r, ka, kb)) return;
    best = std::min(best, std::max(dis / 2.0, coupling_term(r, a, b)));
  };

  auto dfs = [&](auto&& self, std::size_t idx, double dis) -> void {
    if (dis / 2.0 >= best || best <= floor) return;
    // every row block left behind must be covered
    if (idx > 0 && idx % kb == 0) {
      const std::size_t row = idx / kb - 1;
      bool covered = false;
      for (std::size_t p : chosen) covered |= pairs[p].first == row;
      if (!covered) return;
    }
    if (idx == P) {
      evaluate(dis);
      return;
    }
    double with = dis;
    for (std::size_t p : chosen) with = std::max(with, gap[p * P + idx]);
    chosen.push_back(idx);
    in[idx] = 1;
    self(self, idx + 1, with);
    chosen.pop_back();
    in[idx] = 0;
    self(self, idx + 1, dis);
  };
  dfs(dfs, 0, 0.0);
  return best;
}

DghpBounds dghp_bounds(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  const std::size_t ka = a.size(), kb = b.size();
  DghpBounds out;
  out.lower = lower_bound(a, b);
  if (identical(a, b)) {
    out.upper = 0.0;
    return out;
  }
  // full relation: distortion max(diam), coupling min(M, M')
  out.upper = std::max(std::max(a.diameter(), b.diameter()) / 2.0, std::abs(a.total_mass() - b.total_mass()));
  if (out.upper <= out.lower) return out;

  auto ecc = [](const FiniteMeasuredSpace& s) {
    std::vector<double> e(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) e[i] = s.dist.row(static_cast<Eigen::Index>(i)).maxCoeff();
    return e;
  };
  const auto ea = ecc(a), eb = ecc(b);
  auto nearest = [](double v, const std::vector<double>& pool) {
    std::uint32_t best = 0;
    for (std::uint32_t j = 1; j < pool.size(); ++j)
      if (std::abs(pool[j] - v) < std::abs(pool[best] - v)) best = j;
    return best;
  };
  std::vector<Correspondence> candidates;
  {
    Correspondence r;
    for (std::uint32_t i = 0; i < ka; ++i) r.emplace_back(i, nearest(ea[i], eb));
    for (std::uint32_t j = 0; j < kb; ++j) r.emplace_back(nearest(eb[j], ea), j);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    candidates.push_back(std::move(r));
  }
  if (ka == kb) {
    Correspondence r;
    for (std::uint32_t i = 0; i < ka; ++i) r.emplace_back(i, i);
    candidates.push_back(std::move(r));
  }

  const bool descend = ka * kb <= 400;
  for (auto r : candidates) {
    double value = correspondence_value(r, a, b);
    while (descend) {
      bool improved = false;
      for (std::size_t p = 0; p < r.size() && !improved; ++p) {
        Correspondence s = r;
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(p));
        if (!covers(s, ka, kb)) continue;
        const double v = correspondence_value(s, a, b);
        if (v < value - 1e-15) {
          r = std::move(s);
          value = v;
          improved = true;
        }
      }
      for (std::uint32_t i = 0; i < ka && !improved; ++i)
        for (std::uint32_t j = 0; j < kb && !improved; ++j) {
          if (std::find(r.begin(), r.end(), std::make_pair(i, j)) != r.end()) continue;
          Correspondence s = r;
          s.emplace_back(i, j);
          const double v = correspondence_value(s, a, b);
          if (v < value - 1e-15) {
            r = std::move(s);
            value = v;
            improved = true;
          }
        }
      if (!improved) break;
    }
    out.upper = std::min(out.upper, value);
  }
  out.upper = std::max(out.upper, out.lower);
  return out;
}

DghpValue dghp(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b, DghpMode mode) {
  DghpValue v;
  if (mode == DghpMode::exact) {
    v.lower = v.upper = dghp_exact(a, b);
    v.exact = true;
  } else {
    const auto bounds = dghp_bounds(a, b);
    v.lower = bounds.lower;
    v.upper = bounds.upper;
    v.exact = bounds.lower == bounds.upper;
  }
  return v;
}

DghpValue dghp_auto(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  return dghp(a, b, a.size() * b.size() <= 20 ? DghpMode::exact : DghpMode::bounds);
}

double rho_lp_atomic(const std::vector<double>& w, const std::vector<double>& w_prime, const Eigen::MatrixXd& cross) {
  if (cross.rows() != static_cast<Eigen::Index>(w.size()) || cross.cols() != static_cast<Eigen::Index>(w_prime.size()))
    throw DomainError("rho_lp_atomic: distance matrix shape mismatch");
  const double total = std::max(std::accumulate(w.begin(), w.end(), 0.0),
                                std::accumulate(w_prime.begin(), w_prime.end(), 0.0));
  std::vector<double> levels{0.0};
  for (Eigen::Index i = 0; i < cross.rows(); ++i)
    for (Eigen::Index j = 0; j < cross.cols(); ++j)
      if (w[i] > 0.0 && w_prime[j] > 0.0) levels.push_back(cross(i, j));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double best = total;
  for (double level : levels) {
    if (level >= best) break;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> allowed;
    for (Eigen::Index i = 0; i < cross.rows(); ++i)
      for (Eigen::Index j = 0; j < cross.cols(); ++j)
        if (w[i] > 0.0 && w_prime[j] > 0.0 && cross(i, j) <= level)
          allowed.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    const double f = bipartite_max_flow(w, w_prime, allowed);
    best = std::min(best, std::max(level, total - f));
  }
  return std::max(best, 0.0);
}

double f_k(double mass, int k) {
  if (k < 1) throw DomainError("f_k: k must be positive");
  if (!(mass >= 0.0)) throw DomainError("f_k: mass must be nonnegative");
  const double kd = k;
  if (mass >= 1.0 / kd) return 1.0;
  if (mass >= 1.0 / (kd + 1.0)) return std::min(1.0, kd * (kd + 1.0) * (mass - 1.0 / (kd + 1.0)));
  return 0.0;
}

namespace {

Eigen::MatrixXd pairwise(const Collection& a, const Collection& b, const std::vector<bool>& use_a,
                         const std::vector<bool>& use_b, bool* all_exact) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  std::vector<char> exact(a.size() * b.size(), 1);
  parallel_for(a.size() * b.size(), [&](std::size_t idx) {
    const std::size_t i = idx / b.size(), j = idx % b.size();
    if (!use_a[i] || !use_b[j]) return;
    const auto v = dghp_auto(a[i], b[j]);
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.value();
    exact[idx] = v.exact;
  });
  if (all_exact) *all_exact = std::all_of(exact.begin(), exact.end(), [](char c) { return c != 0; });
  return d;
}

std::vector<double> weights(const Collection& c, std::optional<int> k) {
  std::vector<double> w;
  for (const auto& s : c) w.push_back(k ? f_k(s.total_mass(), *k) : 1.0);
  return w;
}

}  // namespace

Eigen::MatrixXd dghp_matrix(const Collection& a, const Collection& b, bool* all_exact) {
  return pairwise(a, b, std::vector<bool>(a.size(), true), std::vector<bool>(b.size(), true), all_exact);
}

RhoResult rho_lp(const Collection& a, const Collection& b, std::optional<int> k) {
  const auto wa = weights(a, k), wb = weights(b, k);
  std::vector<bool> ua, ub;
  for (double w : wa) ua.push_back(w > 0.0);
  for (double w : wb) ub.push_back(w > 0.0);
  RhoResult r;
  const auto d = pairwise(a, b, ua, ub, &r.exact);
  r.value = rho_lp_atomic(wa, wb, d);
  return r;
}

LghpResult l_ghp(const Collection& a, const Collection& b, double tol) {
  if (!(tol > 0.0)) throw DomainError("l_ghp: tol must be positive");
  LghpResult res;
  int K = 1;
  while (std::ldexp(1.0, -K) >= tol) ++K;
  res.terms = K;
  res.tail_bound = std::ldexp(1.0, -K);
  const double floor = 1.0 / (K + 1.0);
  std::vector<bool> ua, ub;
  for (const auto& s : a) ua.push_back(s.total_mass() >= floor);
  for (const auto& s : b) ub.push_back(s.total_mass() >= floor);
  const auto d = pairwise(a, b, ua, ub, &res.exact);
  for (int k = 1; k <= K; ++k) {
    const double rho = rho_lp_atomic(weights(a, k), weights(b, k), d);
    res.value += std::ldexp(1.0, -k) * std::min(1.0, rho);
  }
  return res;
}

double size_distance(const Collection& a, const Collection& b, int p) {
  if (p != 1 && p != 2) throw DomainError("size_distance: p must be 1 or 2");
  std::vector<double> sa, sb;
  for (const auto& s : a) sa.push_back(s.total_mass());
  for (const auto& s : b) sb.push_back(s.total_mass());
  std::sort(sa.begin(), sa.end(), std::greater<>());
  std::sort(sb.begin(), sb.end(), std::greater<>());
  double acc = 0.0;
  for (std::size_t i = 0; i < std::max(sa.size(), sb.size()); ++i) {
    const double d = std::abs((i < sa.size() ? sa[i] : 0.0) - (i < sb.size() ? sb[i] : 0.0));
    acc += p == 1 ? d : d * d;
  }
  return p == 1 ? acc : std::sqrt(acc);
}

double lp_ghp(const Collection& a, const Collection& b, int p, double tol) {
  const double sizes = size_distance(a, b, p);
  return std::max(l_ghp(a, b, tol).value, sizes);
}

double dghp_surplus(const FiniteMeasuredSpace& a, const FiniteMeasuredSpace& b) {
  if (!a.surplus || !b.surplus) throw MissingSurplus("surplus annotation missing");
  return std::max(dghp_exact(a, b), static_cast<double>(std::abs(*a.surplus - *b.surplus)));
}

namespace {

nlohmann::ordered_json space_json(const FiniteMeasuredSpace& s) {
  nlohmann::ordered_json j;
  auto dist = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < s.dist.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < s.dist.cols(); ++c) row.push_back(s.dist(i, c));
    dist.push_back(std::move(row));
  }
  j["dist"] = std::move(dist);
  j["mass"] = to_vector(s.mass);
  j["surplus"] = s.surplus ? nlohmann::ordered_json(*s.surplus) : nlohmann::ordered_json(nullptr);
  return j;
}

FiniteMeasuredSpace space_parse(const nlohmann::json& j) {
  FiniteMeasuredSpace s;
  try {
    const auto mass = j.at("mass").get<std::vector<double>>();
    const auto dist = j.at("dist").get<std::vector<std::vector<double>>>();
    const auto k = static_cast<Eigen::Index>(mass.size());
    if (static_cast<Eigen::Index>(dist.size()) != k) throw InvalidSpace("distance matrix row count differs from mass length");
    s.mass = Eigen::Map<const Eigen::VectorXd>(mass.data(), k);
    s.dist.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (static_cast<Eigen::Index>(dist[i].size()) != k) throw InvalidSpace("distance matrix is not square");
      for (Eigen::Index c = 0; c < k; ++c) s.dist(i, c) = dist[i][c];
    }
    if (j.contains("surplus") && !j.at("surplus").is_null()) s.surplus = j.at("surplus").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("space: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json parse(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("json: ") + e.what());
  }
}

}  // namespace

std::string to_json(const FiniteMeasuredSpace& s) { return space_json(s).dump(); }

std::string to_json(const Collection& c) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : c) arr.push_back(space_json(s));
  return arr.dump();
}

FiniteMeasuredSpace space_from_json(std::string_view text) { return space_parse(parse(text)); }

Collection collection_from_json(std::string_view text) {
  const auto j = parse(text);
  Collection c;
  if (j.is_array()) {
    for (const auto& s : j) c.push_back(space_parse(s));
  } else {
    c.push_back(space_parse(j));
  }
  return c;
}

}  // namespace dynperc
