#include "dynperc/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dynperc/errors.hpp"
#include "dynperc/parallel.hpp"
#include "dynperc/random.hpp"
#include "dynperc/stats.hpp"

namespace dynperc {

namespace {

struct Dsu {
  std::vector<std::uint32_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

bool kept(const std::vector<bool>& keep, std::size_t i) { return keep.empty() || keep[i]; }

}  // namespace

MassVector::MassVector(std::vector<double> masses) {
  if (masses.empty()) throw DomainError("MassVector: empty");
  for (double m : masses)
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("MassVector: entries must be finite and positive");
  std::sort(masses.begin(), masses.end(), std::greater<>());
  x_ = Eigen::Map<Eigen::VectorXd>(masses.data(), static_cast<Eigen::Index>(masses.size()));
}

double MassVector::tail_square_sum(double alpha) const {
  double s = 0.0;
  for (Eigen::Index i = x_.size() - 1; i >= 0 && x_[i] <= alpha; --i) s += x_[i] * x_[i];
  return s;
}

std::size_t CoalMultigraph::edge_count(double s) const {
  auto it = std::upper_bound(edges.begin(), edges.end(), s, [](double v, const CoalEdge& e) { return v < e.time; });
  return static_cast<std::size_t>(it - edges.begin());
}

std::size_t CoalMultigraph::multiplicity(std::uint32_t i, std::uint32_t j, double s) const {
  if (i > j) std::swap(i, j);
  std::size_t count = 0;
  const std::size_t end = edge_count(s);
  for (std::size_t k = 0; k < end; ++k)
    if (edges[k].i == i && edges[k].j == j) ++count;
  return count;
}

CoalMultigraph sample_mg(const MassVector& x, double t, std::uint64_t seed) {
  if (!(t >= 0.0)) throw DomainError("sample_mg: t must be nonnegative");
  CoalMultigraph g;
  g.block_count = static_cast<std::uint32_t>(x.size());
  g.horizon = t;
  const double total = x.sum();
  const double rate = total * total / 2.0;
  if (t == 0.0 || rate == 0.0) return g;
  auto rng = make_stream(seed, "clocks");
  std::exponential_distribution<double> wait(rate);
  std::discrete_distribution<std::uint32_t> pick(x.values().data(), x.values().data() + x.size());
  double now = wait(rng);
  while (now <= t) {
    std::uint32_t a = pick(rng);
    std::uint32_t b = pick(rng);
    if (a > b) std::swap(a, b);
    g.edges.push_back({now, a, b});
    now += wait(rng);
  }
  return g;
}

std::vector<std::int64_t> mg_labels(const CoalMultigraph& g, double s, const std::vector<bool>& keep) {
  Dsu dsu(g.block_count);
  const std::size_t end = g.edge_count(s);
  for (std::size_t k = 0; k < end; ++k) {
    const auto& e = g.edges[k];
    if (kept(keep, e.i) && kept(keep, e.j)) dsu.unite(e.i, e.j);
  }
  std::vector<std::int64_t> label(g.block_count, -1);
  for (std::uint32_t i = 0; i < g.block_count; ++i)
    if (kept(keep, i)) label[i] = dsu.find(i);
  return label;
}

double s_statistic(const MassVector& x, const std::vector<std::vector<std::uint32_t>>& partition) {
  std::vector<bool> seen(x.size(), false);
  double s = 0.0;
  for (const auto& block : partition) {
    double m = 0.0;
    for (auto i : block) {
      if (i >= x.size()) throw BadPartition("index " + std::to_string(i) + " out of range");
      if (seen[i]) throw BadPartition("index " + std::to_string(i) + " appears twice");
      seen[i] = true;
      m += x[i];
    }
    s += m * m;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw BadPartition("partition does not cover every index");
  return s;
}

namespace {

std::vector<double> component_masses(const MassVector& x, const std::vector<std::int64_t>& label) {
  std::vector<double> mass(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (label[i] >= 0) mass[label[i]] += x[i];
  return mass;
}

double square_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double m : v) s += m * m;
  return s;
}

}  // namespace

double s_statistic(const MassVector& x, const CoalMultigraph& g, double s, const std::vector<bool>& keep) {
  return square_sum(component_masses(x, mg_labels(g, s, keep)));
}

double epsilon1_bound(double epsilon, double T, double K) {
  return epsilon * epsilon / (100.0 * (1.0 + T + K * T * T));
}

double epsilon2_bound(double epsilon, double T, double K, double epsilon1) {
  const double d = 1.0 + T * (K + 2.0);
  return 2.0 * epsilon1 * epsilon1 * epsilon * epsilon / (100.0 * d * d);
}

Thresholds thresholds(const MassVector& x, double epsilon, double T, std::size_t samples, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("thresholds: epsilon must lie in (0,1)");
  if (!(T >= 0.0)) throw DomainError("thresholds: T must be nonnegative");
  if (samples == 0) throw DomainError("thresholds: need at least one sample");
  Thresholds th;
  th.epsilon = epsilon;
  th.T = T;
  th.samples = samples;

  std::vector<double> s(samples);
  const std::uint64_t master = stream_seed(seed, "k-quantile");
  parallel_for(samples, [&](std::size_t i) { s[i] = s_statistic(x, sample_mg(x, T, replica_seed(master, i)), T); });
  std::sort(s.begin(), s.end());
  for (double K = 1.0;; K *= 2.0) {
    const auto above = s.end() - std::lower_bound(s.begin(), s.end(), K);
    const double freq = static_cast<double>(above) / static_cast<double>(samples);
    if (freq <= epsilon / 100.0) {
      th.K = K;
      th.k_tail_frequency = freq;
      break;
    }
  }

  auto search = [&](double below, double bound) {
    for (int j = 1; j <= 64; ++j) {
      const double v = std::ldexp(1.0, -j);
      if (v < below && x.tail_square_sum(v) <= bound) return v;
    }
    throw Unsatisfiable("thresholds: no dyadic value meets the tail bound");
  };
  th.epsilon1 = search(epsilon, epsilon1_bound(epsilon, T, th.K));
  th.epsilon2 = search(th.epsilon1, epsilon2_bound(epsilon, T, th.K, th.epsilon1));
  return th;
}

bool thresholds_hold(const MassVector& x, const Thresholds& th) {
  return th.K >= 1.0 && th.k_tail_frequency <= th.epsilon / 100.0 && th.epsilon2 > 0.0 &&
         th.epsilon2 < th.epsilon1 && th.epsilon1 < th.epsilon &&
         x.tail_square_sum(th.epsilon1) <= epsilon1_bound(th.epsilon, th.T, th.K) &&
         x.tail_square_sum(th.epsilon2) <= epsilon2_bound(th.epsilon, th.T, th.K, th.epsilon1);
}

namespace {

struct Sides {
  std::vector<bool> large;   // x > eps1
  std::vector<bool> small;   // x <= eps1
  std::vector<bool> above2;  // x > eps2
};

Sides make_sides(const MassVector& x, const Thresholds& th) {
  Sides sd;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sd.large.push_back(x[i] > th.epsilon1);
    sd.small.push_back(!(x[i] > th.epsilon1));
    sd.above2.push_back(x[i] > th.epsilon2);
  }
  return sd;
}

StructureFlags flags_at(const MassVector& x, const CoalMultigraph& g, double t, const Thresholds& th,
                        const Sides& sd) {
  StructureFlags f;
  const std::size_t B = x.size();
  const auto full = mg_labels(g, t);
  const auto full_mass = component_masses(x, full);

  std::vector<bool> has_large(B, false);
  for (std::size_t i = 0; i < B; ++i)
    if (sd.large[i]) has_large[full[i]] = true;
  for (std::size_t r = 0; r < B; ++r)
    if (full_mass[r] > th.epsilon && !has_large[r]) f.a = true;

  const std::size_t end = g.edge_count(t);
  Dsu small(B);
  for (std::size_t k = 0; k < end && !f.b; ++k) {
    const auto& e = g.edges[k];
    if (sd.small[e.i] && sd.small[e.j] && !small.unite(e.i, e.j)) f.b = true;
  }

  const auto ls = mg_labels(g, t, sd.small);
  const auto ll = mg_labels(g, t, sd.large);
  std::map<std::pair<std::int64_t, std::int64_t>, int> crossing;
  for (std::size_t k = 0; k < end && !f.c; ++k) {
    const auto& e = g.edges[k];
    if (sd.small[e.i] == sd.small[e.j]) continue;
    const std::uint32_t s = sd.small[e.i] ? e.i : e.j;
    const std::uint32_t l = sd.small[e.i] ? e.j : e.i;
    if (++crossing[{ls[s], ll[l]}] > 1) f.c = true;
  }

  const auto l2 = mg_labels(g, t, sd.above2);
  const auto mass2 = component_masses(x, l2);
  if (square_sum(full_mass) - square_sum(mass2) > 2.0 * th.epsilon1 * th.epsilon1) f.d = true;

  for (std::size_t i = 0; i < B; ++i)
    if (sd.large[i] && full_mass[full[i]] - mass2[l2[i]] >= th.epsilon1) f.e = true;
  return f;
}

}  // namespace

StructureReport classify_structure(const MassVector& x, const CoalMultigraph& g, double t, const Thresholds& th) {
  StructureReport rep;
  rep.t = t;
  rep.thresholds = th;
  const Sides sd = make_sides(x, th);
  rep.flags = flags_at(x, g, t, th, sd);

  const std::size_t B = x.size();
  const auto full = mg_labels(g, t);
  const auto full_mass = component_masses(x, full);
  const auto l2 = mg_labels(g, t, sd.above2);

  std::vector<bool> heart_root(B, false);  // l2 labels reached from a Large block
  for (std::size_t i = 0; i < B; ++i)
    if (sd.large[i]) heart_root[l2[i]] = true;
  std::vector<bool> in_heart(B, false), hanging(B, false);
  for (std::size_t i = 0; i < B; ++i) {
    if (!(full_mass[full[i]] > th.epsilon)) continue;
    if (l2[i] >= 0 && heart_root[l2[i]])
      in_heart[i] = true;
    else
      hanging[i] = true;
  }
  const auto trees = mg_labels(g, t, hanging);

  std::map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < B; ++i) {
    if (!(full_mass[full[i]] > th.epsilon)) continue;
    auto [it, fresh] = index.emplace(full[i], rep.components.size());
    if (fresh) {
      rep.components.emplace_back();
      rep.components.back().mass = full_mass[full[i]];
    }
    auto& c = rep.components[it->second];
    const auto id = static_cast<std::uint32_t>(i);
    c.blocks.push_back(id);
    if (in_heart[i]) {
      c.heart.push_back(id);
    } else {
      c.hanging.push_back(id);
      c.hanging_mass += x[i];
      c.attachments.emplace(static_cast<std::uint32_t>(trees[i]), 0);
    }
  }
  const std::size_t end = g.edge_count(t);
  for (std::size_t k = 0; k < end; ++k) {
    const auto& e = g.edges[k];
    if (in_heart[e.i] == in_heart[e.j] || !(hanging[e.i] || hanging[e.j])) continue;
    const std::uint32_t h = hanging[e.i] ? e.i : e.j;
    auto& c = rep.components[index.at(full[h])];
    ++c.attachments[static_cast<std::uint32_t>(trees[h])];
  }
  return rep;
}

StructureReport classify_structure(const MassVector& x, double t, const Thresholds& th, std::uint64_t seed) {
  return classify_structure(x, sample_mg(x, t, seed), t, th);
}

PathStructureResult structure_path_check(const MassVector& x, const Thresholds& th, std::uint64_t seed) {
  const CoalMultigraph g = sample_mg(x, th.T, seed);
  const Sides sd = make_sides(x, th);
  PathStructureResult res;
  auto merge = [&](double t) {
    const StructureFlags f = flags_at(x, g, t, th, sd);
    res.flags.a |= f.a;
    res.flags.b |= f.b;
    res.flags.c |= f.c;
    res.flags.d |= f.d;
    res.flags.e |= f.e;
    ++res.times_checked;
  };
  merge(0.0);
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (k + 1 == g.edges.size() || g.edges[k + 1].time != g.edges[k].time) merge(g.edges[k].time);
  return res;
}

std::string StructureReport::to_json() const {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["epsilon"] = thresholds.epsilon;
  j["epsilon1"] = thresholds.epsilon1;
  j["epsilon2"] = thresholds.epsilon2;
  j["K"] = thresholds.K;
  j["T"] = thresholds.T;
  j["flags"] = {{"a", flags.a}, {"b", flags.b}, {"c", flags.c}, {"d", flags.d}, {"e", flags.e}};
  auto one_based = [](const std::vector<std::uint32_t>& v) {
    auto a = nlohmann::ordered_json::array();
    for (auto i : v) a.push_back(i + 1);
    return a;
  };
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : components) {
    nlohmann::ordered_json o;
    o["mass"] = c.mass;
    o["heart"] = one_based(c.heart);
    o["hanging"] = one_based(c.hanging);
    auto att = nlohmann::ordered_json::array();
    for (const auto& [tree, count] : c.attachments) att.push_back({{"tree", tree + 1}, {"edges", count}});
    o["attachments"] = std::move(att);
    o["hanging_mass"] = c.hanging_mass;
    comps.push_back(std::move(o));
  }
  j["components"] = std::move(comps);
  return j.dump();
}

std::string lemma_csv(const std::vector<LemmaRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "instance,statistic,bound,pass\n";
  for (const auto& r : rows) out << r.instance << ',' << r.statistic << ',' << r.bound << ',' << (r.pass ? "true" : "false") << '\n';
  return out.str();
}

double s_tail_two_blocks(double a, double b, double t, double s) {
  const double apart = a * a + b * b;
  const double joined = (a + b) * (a + b);
  const double p_join = 1.0 - std::exp(-t * a * b);
  return (apart > s ? 1.0 - p_join : 0.0) + (joined > s ? p_join : 0.0);
}

double lemma20_bound(const MassVector& x, double t, double s) {
  const double s0 = x.sum_of_squares();
  if (!(s > s0)) throw DomainError("lemma20_bound: need s > S(x,0)");
  return t * s * s0 / (s - s0);
}

LemmaRow check_lemma20(const MassVector& x, double t, double s, std::size_t replicas, std::uint64_t seed) {
  LemmaRow row;
  row.bound = lemma20_bound(x, t, s);
  std::vector<char> hit(replicas, 0);
  const std::uint64_t master = stream_seed(seed, "lemma20");
  parallel_for(replicas, [&](std::size_t i) {
    hit[i] = s_statistic(x, sample_mg(x, t, replica_seed(master, i)), t) > s;
  });
  row.statistic = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(replicas);
  row.pass = row.statistic <= row.bound + 3.0 * binomial_sigma(std::min(row.bound, 1.0), static_cast<double>(replicas));
  return row;
}

LemmaRow check_lemma23(const std::vector<double>& z, std::size_t m, double t, double epsilon, std::size_t replicas,
                       std::uint64_t seed) {
  const std::size_t n = z.size();
  if (!(m >= 1 && m < n)) throw DomainError("check_lemma23: need 1 <= m < n");
  if (!(epsilon > 0.0)) throw DomainError("check_lemma23: epsilon must be positive");
  for (double v : z)
    if (!(v > 0.0)) throw DomainError("check_lemma23: weights must be positive");
  double a1 = 0.0, a2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) (i < m ? a1 : a2) += z[i] * z[i];
  LemmaRow row;
  const double g = 1.0 + t * (a1 + epsilon);
  row.bound = g * g * a2 / epsilon;
  std::vector<char> hit(replicas, 0);
  const std::uint64_t master = stream_seed(seed, "lemma23");
  parallel_for(replicas, [&](std::size_t r) {
    auto rng = make_stream(replica_seed(master, r), "bipartite");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Dsu dsu(n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = m; j < n; ++j)
        if (unit(rng) < 1.0 - std::exp(-t * z[i] * z[j]))
          dsu.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    std::vector<double> mass(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) mass[dsu.find(static_cast<std::uint32_t>(i))] += z[i];
    hit[r] = square_sum(mass) >= a1 + epsilon;
  });
  row.statistic = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(replicas);
  row.pass = row.statistic <= row.bound + 3.0 * binomial_sigma(std::min(row.bound, 1.0), static_cast<double>(replicas));
  return row;
}

namespace {

std::vector<double> sorted_sizes(std::uint32_t vertices, const std::vector<WeightedEdge>& edges, std::uint64_t mask,
                                 const std::vector<double>& weights, const std::vector<bool>& keep) {
  Dsu dsu(vertices);
  for (std::size_t k = 0; k < edges.size(); ++k)
    if ((mask >> k) & 1u) {
      const auto& e = edges[k];
      if (kept(keep, e.u) && kept(keep, e.v)) dsu.unite(e.u, e.v);
    }
  std::vector<double> mass(vertices, 0.0);
  for (std::uint32_t v = 0; v < vertices; ++v)
    if (kept(keep, v)) mass[dsu.find(v)] += weights[v];
  std::vector<double> out;
  for (std::uint32_t v = 0; v < vertices; ++v)
    if (kept(keep, v) && dsu.find(v) == v) out.push_back(mass[v]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

void check_edges(std::uint32_t vertices, const std::vector<WeightedEdge>& edges, std::size_t weights) {
  if (edges.size() > 10) throw InstanceTooLarge("more than 10 edges: " + std::to_string(edges.size()));
  if (weights != vertices) throw DomainError("weight vector length differs from vertex count");
  for (const auto& e : edges)
    if (e.u >= vertices || e.v >= vertices) throw DomainError("edge endpoint out of range");
}

}  // namespace

double subgraph_s(std::uint32_t vertices, const std::vector<WeightedEdge>& edges, std::uint64_t mask,
                  const std::vector<double>& weights, const std::vector<bool>& keep) {
  return square_sum(sorted_sizes(vertices, edges, mask, weights, keep));
}

std::vector<LemmaRow> check_lemma17(const std::vector<Lemma17Instance>& instances) {
  std::vector<LemmaRow> rows(instances.size());
  for (const auto& inst : instances) {
    check_edges(inst.vertices, inst.edges, inst.weights.size());
    if (inst.reduced.size() != inst.weights.size()) throw DomainError("reduced weights have the wrong length");
    for (std::size_t i = 0; i < inst.weights.size(); ++i)
      if (!(inst.reduced[i] >= 0.0 && inst.reduced[i] <= inst.weights[i]))
        throw DomainError("reduced weights must lie in [0, weight]");
  }
  parallel_for(instances.size(), [&](std::size_t idx) {
    const auto& inst = instances[idx];
    const std::uint64_t subsets = std::uint64_t(1) << inst.edges.size();
    std::vector<std::vector<double>> big(subsets), small(subsets);
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      big[mask] = sorted_sizes(inst.vertices, inst.edges, mask, inst.weights, {});
      small[mask] = sorted_sizes(inst.vertices, inst.edges, mask, inst.reduced, {});
    }
    double worst = -std::numeric_limits<double>::infinity();
    double scale = 0.0, ratio = 0.0;
    for (std::uint64_t outer = 0; outer < subsets; ++outer) {
      const double big_sq = square_sum(big[outer]);
      scale = std::max(scale, big_sq);
      for (std::uint64_t inner = outer;; inner = (inner - 1) & outer) {
        for (const auto* sizes : {&big[inner], &small[inner]}) {
          const auto& a = *sizes;
          const auto& at = big[outer];
          double lhs = 0.0;
          for (std::size_t i = 0; i < std::max(a.size(), at.size()); ++i) {
            const double d = (i < at.size() ? at[i] : 0.0) - (i < a.size() ? a[i] : 0.0);
            lhs += d * d;
          }
          const double rhs = big_sq - square_sum(a);
          worst = std::max(worst, lhs - rhs);
          if (rhs > 1e-12) ratio = std::max(ratio, lhs / rhs);
        }
        if (inner == 0) break;
      }
    }
    LemmaRow& row = rows[idx];
    row.instance = "lemma17-" + std::to_string(idx);
    row.statistic = ratio;
    row.bound = 1.0;
    row.pass = worst <= 1e-12 * std::max(1.0, scale);
  });
  return rows;
}

bool skor_hypothesis(const SkorInstance& inst) {
  std::vector<bool> out(inst.vertices);
  for (std::uint32_t v = 0; v < inst.vertices; ++v) out[v] = !inst.in_w[v];
  Dsu in_dsu(inst.vertices), out_dsu(inst.vertices);
  for (const auto& e : inst.edges) {
    if (inst.in_w[e.u] && inst.in_w[e.v]) in_dsu.unite(e.u, e.v);
    if (out[e.u] && out[e.v]) out_dsu.unite(e.u, e.v);
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> crossing;
  for (const auto& e : inst.edges) {
    if (inst.in_w[e.u] == inst.in_w[e.v]) continue;
    const std::uint32_t w = inst.in_w[e.u] ? e.u : e.v;
    const std::uint32_t o = inst.in_w[e.u] ? e.v : e.u;
    if (++crossing[{in_dsu.find(w), out_dsu.find(o)}] > 1) return false;
  }
  return true;
}

bool skor_single_edge(const SkorInstance& inst) {
  Dsu out_dsu(inst.vertices);
  for (const auto& e : inst.edges)
    if (!inst.in_w[e.u] && !inst.in_w[e.v]) out_dsu.unite(e.u, e.v);
  std::map<std::uint32_t, int> crossing;
  for (const auto& e : inst.edges) {
    if (inst.in_w[e.u] == inst.in_w[e.v]) continue;
    if (++crossing[out_dsu.find(inst.in_w[e.u] ? e.v : e.u)] > 1) return false;
  }
  return true;
}

std::vector<LemmaRow> check_pour_skor(const std::vector<SkorInstance>& instances) {
  std::vector<LemmaRow> rows(instances.size());
  for (const auto& inst : instances) {
    check_edges(inst.vertices, inst.edges, inst.weights.size());
    if (inst.in_w.size() != inst.vertices) throw DomainError("W mask has the wrong length");
  }
  parallel_for(instances.size(), [&](std::size_t idx) {
    const auto& inst = instances[idx];
    LemmaRow& row = rows[idx];
    row.instance = "pourskor-" + std::to_string(idx);
    const std::uint64_t subsets = std::uint64_t(1) << inst.edges.size();
    const std::uint64_t all = subsets - 1;
    auto gap = [&](std::uint64_t mask) {
      return subgraph_s(inst.vertices, inst.edges, mask, inst.weights, {}) -
             subgraph_s(inst.vertices, inst.edges, mask, inst.weights, inst.in_w);
    };
    row.bound = gap(all);
    if (!skor_hypothesis(inst)) {
      row.instance += "-vacuous";
      row.statistic = row.bound;
      row.pass = true;
      return;
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) worst = std::max(worst, gap(mask));
    row.statistic = worst;
    row.pass = worst <= row.bound + 1e-12 * std::max(1.0, std::abs(row.bound));
  });
  return rows;
}

std::vector<Lemma17Instance> random_lemma17_instances(std::size_t count, std::uint32_t max_vertices,
                                                      std::uint32_t max_edges, std::uint64_t seed) {
  if (max_vertices < 2) throw DomainError("need at least two vertices");
  std::vector<Lemma17Instance> out(count);
  const std::uint64_t master = stream_seed(seed, "lemma17");
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = make_stream(replica_seed(master, k), "instance");
    auto& inst = out[k];
    inst.vertices = std::uniform_int_distribution<std::uint32_t>(2, max_vertices)(rng);
    const std::uint32_t pairs = inst.vertices * (inst.vertices - 1) / 2;
    const std::uint32_t m = std::uniform_int_distribution<std::uint32_t>(0, std::min(max_edges, pairs))(rng);
    std::vector<WeightedEdge> all;
    for (std::uint32_t u = 0; u < inst.vertices; ++u)
      for (std::uint32_t v = u + 1; v < inst.vertices; ++v) all.push_back({u, v});
    std::shuffle(all.begin(), all.end(), rng);
    inst.edges.assign(all.begin(), all.begin() + m);
    std::uniform_real_distribution<double> weight(0.05, 2.0), shrink(0.0, 1.0);
    for (std::uint32_t v = 0; v < inst.vertices; ++v) {
      inst.weights.push_back(weight(rng));
      inst.reduced.push_back(inst.weights.back() * shrink(rng));
    }
  }
  return out;
}

std::vector<SkorInstance> random_skor_instances(std::size_t count, std::uint32_t max_vertices,
                                                std::uint32_t max_edges, std::uint64_t seed, bool single_edge) {
  if (max_vertices < 2) throw DomainError("need at least two vertices");
  std::vector<SkorInstance> out(count);
  const std::uint64_t master = stream_seed(seed, "pourskor");
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = make_stream(replica_seed(master, k), "instance");
    auto& inst = out[k];
    inst.vertices = std::uniform_int_distribution<std::uint32_t>(2, max_vertices)(rng);
    const std::uint32_t m = std::uniform_int_distribution<std::uint32_t>(0, max_edges)(rng);
    std::uniform_int_distribution<std::uint32_t> vertex(0, inst.vertices - 1);
    for (std::uint32_t e = 0; e < m; ++e) {
      std::uint32_t u = vertex(rng), v = vertex(rng);
      while (v == u) v = vertex(rng);
      inst.edges.push_back({std::min(u, v), std::max(u, v)});
    }
    std::uniform_real_distribution<double> weight(0.05, 2.0);
    for (std::uint32_t v = 0; v < inst.vertices; ++v) inst.weights.push_back(weight(rng));
    std::bernoulli_distribution coin(0.5);
    inst.in_w.assign(inst.vertices, true);
    for (int attempt = 0; attempt < 200; ++attempt) {
      for (std::uint32_t v = 0; v < inst.vertices; ++v) inst.in_w[v] = coin(rng);
      if (single_edge ? skor_single_edge(inst) : skor_hypothesis(inst)) break;
      inst.in_w.assign(inst.vertices, true);
    }
  }
  return out;
}

}  // namespace dynperc
