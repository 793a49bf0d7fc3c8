#include "dynperc/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dynperc/errors.hpp"
#include "dynperc/parallel.hpp"

namespace dynperc {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::coalescence: return "coalescence";
    case Mode::fragmentation: return "fragmentation";
    case Mode::dynamical_percolation: return "dynamical_percolation";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "coal" || text == "coalescence") return Mode::coalescence;
  if (text == "frag" || text == "fragmentation") return Mode::fragmentation;
  if (text == "dynperc" || text == "dynamical_percolation") return Mode::dynamical_percolation;
  throw InvalidSpec("unknown mode '" + text + "'");
}

ProcessSpec ProcessSpec::critical(Mode mode, std::uint32_t n, double lambda, double horizon,
                                  std::vector<double> snapshot_times) {
  ProcessSpec spec;
  spec.mode = mode;
  spec.horizon = horizon;
  spec.snapshot_times = std::move(snapshot_times);
  const double nd = static_cast<double>(n);
  switch (mode) {
    case Mode::coalescence: spec.rate = 1.0 / (nd * std::cbrt(nd)); break;
    case Mode::fragmentation: spec.rate = 1.0 / std::cbrt(nd); break;
    case Mode::dynamical_percolation:
      spec.rate = 1.0 / std::cbrt(nd);
      spec.p_refresh = p_critical(lambda, n);
      break;
  }
  return spec;
}

void ProcessSpec::validate() const {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidSpec("rate must be a finite nonnegative number");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InvalidSpec("horizon must be a finite nonnegative number");
  if (mode == Mode::dynamical_percolation && !(p_refresh >= 0.0 && p_refresh <= 1.0))
    throw InvalidSpec("p_refresh must lie in [0,1]");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw InvalidSpec("snapshot times must be sorted");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= horizon)) throw InvalidSpec("snapshot time outside [0, horizon]");
}

EdgeSet::EdgeSet(std::uint32_t n) : n_(n), pairs_(std::uint64_t(n) * (n > 0 ? n - 1 : 0) / 2) {
  if (std::uint64_t(n) * n <= (std::uint64_t(1) << 24)) dense_.assign(std::uint64_t(n) * n, -1);
}

bool EdgeSet::contains(std::uint64_t key) const {
  if (!dense_.empty()) return dense_[key] >= 0;
  return sparse_.count(key) != 0;
}

void EdgeSet::insert(std::uint64_t key) {
  if (contains(key)) return;
  const auto idx = static_cast<std::uint32_t>(keys_.size());
  keys_.push_back(key);
  if (!dense_.empty())
    dense_[key] = static_cast<std::int32_t>(idx);
  else
    sparse_.emplace(key, idx);
}

void EdgeSet::erase(std::uint64_t key) {
  std::uint32_t idx;
  if (!dense_.empty()) {
    if (dense_[key] < 0) return;
    idx = static_cast<std::uint32_t>(dense_[key]);
    dense_[key] = -1;
  } else {
    auto it = sparse_.find(key);
    if (it == sparse_.end()) return;
    idx = it->second;
    sparse_.erase(it);
  }
  const std::uint64_t last = keys_.back();
  keys_.pop_back();
  if (idx < keys_.size()) {
    keys_[idx] = last;
    if (!dense_.empty())
      dense_[last] = static_cast<std::int32_t>(idx);
    else
      sparse_[last] = idx;
  }
}

Simulator::Simulator(const GraphState& initial, const ProcessSpec& spec, std::uint64_t seed)
    : initial_(initial),
      spec_(spec),
      edges_(initial.n()),
      tracker_(initial),
      times_(make_stream(seed, "times")),
      pairs_(make_stream(seed, "pairs")) {
  spec_.validate();
  switch (spec_.mode) {
    case Mode::coalescence: add_intensity_ = spec_.rate; break;
    case Mode::fragmentation: del_intensity_ = spec_.rate; break;
    case Mode::dynamical_percolation:
      add_intensity_ = spec_.rate * spec_.p_refresh;
      del_intensity_ = spec_.rate * (1.0 - spec_.p_refresh);
      break;
  }
  for (const auto& e : initial.edges()) edges_.insert(edges_.key(e.u, e.v));
}

double Simulator::addition_rate() const {
  return add_intensity_ * static_cast<double>(edges_.pair_count() - edges_.size());
}

double Simulator::deletion_rate() const { return del_intensity_ * static_cast<double>(edges_.size()); }

void Simulator::advance_to(double t) {
  while (true) {
    if (!pending_) {
      const double total = addition_rate() + deletion_rate();
      if (total > 0.0) {
        std::exponential_distribution<double> wait(total);
        pending_ = now_ + wait(times_);
      } else {
        pending_ = std::numeric_limits<double>::infinity();
      }
    }
    if (*pending_ > t) {
      now_ = std::max(now_, t);
      return;
    }
    now_ = *pending_;
    apply_next_event();
    pending_.reset();
  }
}

void Simulator::apply_next_event() {
  const double add = addition_rate();
  const double total = add + deletion_rate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool addition = unit(times_) * total < add;
  const Vertex n = initial_.n();
  if (addition) {
    std::uniform_int_distribution<Vertex> first(0, n - 1);
    std::uniform_int_distribution<Vertex> second(0, n - 2);
    std::uint64_t key;
    Vertex a, b;
    do {
      a = first(pairs_);
      b = second(pairs_);
      if (b >= a) ++b;
      key = edges_.key(a, b);
    } while (edges_.contains(key));
    edges_.insert(key);
    tracker_.add_edge(a, b);
    ++additions_;
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, edges_.size() - 1);
    const std::uint64_t key = edges_.at(pick(pairs_));
    const Edge e = edges_.edge(key);
    edges_.erase(key);
    tracker_.remove_edge(e.u, e.v);
    ++deletions_;
  }
}

GraphState Simulator::state() const {
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) edges.push_back(edges_.edge(edges_.at(i)));
  return GraphState(initial_.n(), std::move(edges), initial_.lambda(), initial_.seed(), now_);
}

double Snapshot::size_sum() const {
  std::uint64_t count = 0;
  for (const auto& c : components) count += c.n_vertices;
  return static_cast<double>(count) * mass_unit(n);
}

Trajectory run(const GraphState& initial, const ProcessSpec& spec, std::uint64_t seed,
               SummaryOptions summary_options) {
  Simulator sim(initial, spec, seed);
  Trajectory traj;
  traj.spec = spec;
  traj.seed = seed;
  for (double t : spec.snapshot_times) {
    sim.advance_to(t);
    const GraphState g = sim.state();
    Snapshot snap;
    snap.time = t;
    snap.n = g.n();
    snap.edge_count = g.edge_count();
    snap.components = components(g, summary_options);
    if (spec.record_edges) snap.edges = g.edges();
    traj.snapshots.push_back(std::move(snap));
  }
  sim.advance_to(spec.horizon);
  traj.event_count = sim.event_count();
  return traj;
}

std::string snapshot_json_line(const Snapshot& s, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["t"] = s.time;
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : s.components) {
    nlohmann::ordered_json o;
    o["size"] = c.size();
    o["surplus"] = c.surplus;
    o["diameter"] = c.diameter();
    o["n_vertices"] = c.n_vertices;
    comps.push_back(std::move(o));
  }
  j["components"] = std::move(comps);
  j["edge_count"] = s.edge_count;
  if (s.edges) {
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : *s.edges) edges.push_back({e.u + 1, e.v + 1});
    j["edges"] = std::move(edges);
  }
  j["seed"] = seed;
  return j.dump();
}

std::string to_jsonl(const Trajectory& trajectory) {
  std::string out;
  for (const auto& s : trajectory.snapshots) {
    out += snapshot_json_line(s, trajectory.seed);
    out += '\n';
  }
  return out;
}

DualityTimes duality_params(double p, double p_prime, double gamma_plus, double gamma_minus) {
  if (!(p > 0.0 && p_prime < 1.0)) throw DomainError("duality_params: need 0 < p and p' < 1");
  if (p > p_prime) throw DomainError("duality_params: p > p' gives negative times");
  if (!(gamma_plus > 0.0 && gamma_minus > 0.0)) throw DomainError("duality_params: rates must be positive");
  return {std::log((1.0 - p) / (1.0 - p_prime)) / gamma_plus, std::log(p_prime / p) / gamma_minus};
}

EdgeJointLaw edge_joint_law_coal(double p, double gamma, double t) {
  const double stay = std::exp(-gamma * t);
  return {(1.0 - p) * stay, (1.0 - p) * (1.0 - stay), 0.0, p};
}

EdgeJointLaw edge_joint_law_frag(double p_prime, double mu, double t_prime) {
  const double keep = std::exp(-mu * t_prime);
  return {1.0 - p_prime, p_prime * (1.0 - keep), 0.0, p_prime * keep};
}

namespace {

std::array<double, 4> z_scores(const std::array<std::uint64_t, 4>& cells, std::uint64_t trials,
                               const EdgeJointLaw& law) {
  const std::array<double, 4> q{law.p00, law.p01, law.p10, law.p11};
  std::array<double, 4> z{};
  for (int i = 0; i < 4; ++i) {
    const double freq = static_cast<double>(cells[i]) / static_cast<double>(trials);
    const double sigma = binomial_sigma(q[i], static_cast<double>(trials));
    const double diff = std::abs(freq - q[i]);
    z[i] = sigma > 0.0 ? diff / sigma : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  }
  return z;
}

}  // namespace

std::array<double, 4> DualityReport::z_coal() const { return z_scores(cells_coal, trials, law); }
std::array<double, 4> DualityReport::z_frag() const { return z_scores(cells_frag, trials, law); }

std::string DualityReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["lambda"] = lambda;
  j["s"] = s;
  j["p"] = p;
  j["p_prime"] = p_prime;
  j["gamma_plus"] = gamma_plus;
  j["gamma_minus"] = gamma_minus;
  j["t"] = times.t;
  j["t_prime"] = times.t_prime;
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["coupled"] = coupled;
  j["closed_form"] = {{"p00", law.p00}, {"p01", law.p01}, {"p10", law.p10}, {"p11", law.p11}};
  auto cells = [&](const std::array<std::uint64_t, 4>& c, const std::array<double, 4>& z) {
    nlohmann::ordered_json o;
    const char* names[4] = {"00", "01", "10", "11"};
    for (int i = 0; i < 4; ++i)
      o[names[i]] = {{"count", c[i]}, {"freq", double(c[i]) / double(trials)}, {"z", z[i]}};
    return o;
  };
  j["trials"] = trials;
  j["cells_coalescence"] = cells(cells_coal, z_coal());
  j["cells_fragmentation"] = cells(cells_frag, z_frag());
  j["ks_largest_before"] = {{"statistic", ks_before.statistic}, {"p_value", ks_before.p_value}};
  j["ks_largest_after"] = {{"statistic", ks_after.statistic}, {"p_value", ks_after.p_value}};
  auto joint = [](const std::vector<double>& a, const std::vector<double>& b) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < a.size(); ++i) arr.push_back({a[i], b[i]});
    return arr;
  };
  j["joint_largest_coalescence"] = joint(largest_before_coal, largest_after_coal);
  j["joint_largest_fragmentation"] = joint(largest_before_frag, largest_after_frag);
  return j.dump();
}

DualityReport duality_experiment(std::uint32_t n, double lambda, double s, std::size_t replicas, std::uint64_t seed) {
  if (replicas < 2) throw DomainError("duality_experiment: need at least 2 replicas");
  DualityReport r;
  r.n = n;
  r.lambda = lambda;
  r.s = s;
  r.replicas = replicas;
  r.seed = seed;
  r.p = p_critical(lambda, n);
  r.p_prime = p_critical(lambda + s, n);
  const double nd = static_cast<double>(n);
  r.gamma_plus = 1.0 / (nd * std::cbrt(nd));
  r.gamma_minus = 1.0 / std::cbrt(nd);
  r.times = duality_params(r.p, r.p_prime, r.gamma_plus, r.gamma_minus);
  r.law = edge_joint_law_coal(r.p, r.gamma_plus, r.times.t);

  const std::uint64_t pairs = std::uint64_t(n) * (n - 1) / 2;
  r.trials = pairs * replicas;
  const double unit = mass_unit(n);

  struct Replica {
    std::array<std::uint64_t, 4> coal{}, frag{};
    double before_coal = 0, after_coal = 0, before_frag = 0, after_frag = 0;
  };
  std::vector<Replica> out(replicas);
  const std::uint64_t coal_master = stream_seed(seed, "duality-coalescence");
  const std::uint64_t frag_master = stream_seed(seed, "duality-fragmentation");

  parallel_for(replicas, [&](std::size_t i) {
    Replica& rep = out[i];
    {
      const std::uint64_t rs = replica_seed(coal_master, i);
      ProcessSpec spec{Mode::coalescence, r.gamma_plus, 0.0, r.times.t, {}, false};
      Simulator sim(sample_gnp(n, r.p, rs), spec, rs);
      const std::uint64_t e0 = sim.edge_count();
      rep.before_coal = sim.connectivity().largest_component_size() * unit;
      sim.advance_to(r.times.t);
      const std::uint64_t e1 = sim.edge_count();
      rep.after_coal = sim.connectivity().largest_component_size() * unit;
      rep.coal = {pairs - e1, e1 - e0, 0, e0};
    }
    {
      const std::uint64_t rs = replica_seed(frag_master, i);
      ProcessSpec spec{Mode::fragmentation, r.gamma_minus, 0.0, r.times.t_prime, {}, false};
      Simulator sim(sample_gnp(n, r.p_prime, rs), spec, rs);
      const std::uint64_t e1 = sim.edge_count();
      rep.after_frag = sim.connectivity().largest_component_size() * unit;
      sim.advance_to(r.times.t_prime);
      const std::uint64_t e0 = sim.edge_count();
      rep.before_frag = sim.connectivity().largest_component_size() * unit;
      rep.frag = {pairs - e1, e1 - e0, 0, e0};
    }
  });

  for (const auto& rep : out) {
    for (int c = 0; c < 4; ++c) {
      r.cells_coal[c] += rep.coal[c];
      r.cells_frag[c] += rep.frag[c];
    }
    r.largest_before_coal.push_back(rep.before_coal);
    r.largest_after_coal.push_back(rep.after_coal);
    r.largest_before_frag.push_back(rep.before_frag);
    r.largest_after_frag.push_back(rep.after_frag);
  }
  r.ks_before = ks_two_sample(r.largest_before_coal, r.largest_before_frag);
  r.ks_after = ks_two_sample(r.largest_after_coal, r.largest_after_frag);
  return r;
}

}  // namespace dynperc
