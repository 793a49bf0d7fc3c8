#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dynperc/errors.hpp"
#include "dynperc/metric.hpp"

using namespace dynperc;

namespace {

// Random metric from shortest paths over random positive weights.
FiniteMeasuredSpace random_space(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  FiniteMeasuredSpace s;
  const auto n = static_cast<Eigen::Index>(k);
  s.dist = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) s.dist(i, j) = s.dist(j, i) = u(rng);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) s.dist(i, j) = std::min(s.dist(i, j), s.dist(i, m) + s.dist(m, j));
  s.mass.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) s.mass[i] = 0.5 * u(rng);
  return s;
}

FiniteMeasuredSpace two_point(double gap, double m0, double m1) {
  FiniteMeasuredSpace s;
  s.dist.resize(2, 2);
  s.dist << 0, gap, gap, 0;
  s.mass.resize(2);
  s.mass << m0, m1;
  return s;
}

}  // namespace

TEST_CASE("space validation") {
  auto s = two_point(1.0, 0.5, 0.5);
  CHECK_NOTHROW(s.validate());
  auto asym = s;
  asym.dist(0, 1) = 2.0;
  CHECK_THROWS_AS(asym.validate(), InvalidSpace);
  FiniteMeasuredSpace tri;
  tri.dist.resize(3, 3);
  tri.dist << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  tri.mass = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(tri.validate(), InvalidSpace);
  auto neg = s;
  neg.mass[0] = -1.0;
  CHECK_THROWS_AS(neg.validate(), InvalidSpace);
}

TEST_CASE("from_component") {
  GraphState one(8, {});
  auto p = from_component(one, 3);
  CHECK(p.size() == 1);
  CHECK(p.dist(0, 0) == 0.0);
  CHECK(p.mass[0] == doctest::Approx(0.25));

  GraphState edge(8, {{0, 1}});
  auto e = from_component(edge, 0);
  REQUIRE(e.size() == 2);
  CHECK(e.dist(0, 1) == doctest::Approx(0.5));
  CHECK(e.mass[0] == doctest::Approx(0.25));
  CHECK(e.mass[1] == doctest::Approx(0.25));
  CHECK(*e.surplus == 0);

  GraphState tri(8, {{0, 1}, {1, 2}, {0, 2}});
  auto t = from_component(tri, 0);
  CHECK(t.dist(0, 1) == t.dist(0, 2));
  CHECK(t.dist(1, 2) == t.dist(0, 2));
  CHECK(*t.surplus == 1);
  CHECK_THROWS_AS(from_component(tri, 0, 2), TooLarge);
}

TEST_CASE("distortion") {
  auto a = two_point(1.0, 1, 1), b = two_point(3.0, 1, 1);
  CHECK(distortion({{0, 0}, {1, 1}}, a, a) == 0.0);
  CHECK(distortion({{0, 0}}, FiniteMeasuredSpace::point(1), FiniteMeasuredSpace::point(2)) == 0.0);
  CHECK(distortion({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, a, b) == doctest::Approx(3.0));
  CHECK(distortion({{0, 0}, {1, 1}}, a, b) == doctest::Approx(2.0));
  CHECK_THROWS_AS(distortion({{0, 0}}, a, b), NotACorrespondence);
}

TEST_CASE("exact d_GHP examples") {
  auto a = two_point(1.0, 0.3, 0.7);
  CHECK(dghp_exact(a, a) == 0.0);
  CHECK(dghp_exact(FiniteMeasuredSpace::point(1.0), FiniteMeasuredSpace::point(3.0)) == doctest::Approx(2.0));
  CHECK(dghp_exact(FiniteMeasuredSpace::point(0.4), FiniteMeasuredSpace::point(0.4)) == 0.0);
  // pure metric gap: identical masses, gaps 1 and 3
  CHECK(dghp_exact(two_point(1.0, 1, 1), two_point(3.0, 1, 1)) == doctest::Approx(1.0));
  FiniteMeasuredSpace big;
  big.dist = Eigen::MatrixXd::Zero(5, 5);
  big.mass = Eigen::VectorXd::Ones(5);
  CHECK_THROWS_AS(dghp_exact(big, big), TooLargeForExact);
  CHECK(dghp_auto(big, big).value() == 0.0);
}

TEST_CASE("exact d_GHP: symmetry, scaling, bounds sandwich") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  for (int rep = 0; rep < 80; ++rep) {
    auto a = random_space(size(rng), rng), b = random_space(size(rng), rng);
    const double d = dghp_exact(a, b);
    CHECK(d == doctest::Approx(dghp_exact(b, a)).epsilon(1e-12));
    auto bd = dghp_bounds(a, b);
    CHECK(bd.lower <= d + 1e-12);
    CHECK(d <= bd.upper + 1e-12);
    for (double c : {0.5, 2.0}) {
      auto ca = a, cb = b;
      ca.dist *= c;
      ca.mass *= c;
      cb.dist *= c;
      cb.mass *= c;
      CHECK(dghp_exact(ca, cb) == doctest::Approx(c * d).epsilon(1e-10));
    }
  }
}

TEST_CASE("coupling term and max flow") {
  CHECK(bipartite_max_flow({1, 1}, {1, 1}, {{0, 0}, {1, 1}}) == doctest::Approx(2.0));
  CHECK(bipartite_max_flow({1, 1}, {2}, {{0, 0}}) == doctest::Approx(1.0));
  CHECK(bipartite_max_flow({0.5, 0.7}, {0.4, 0.9}, {{0, 0}, {0, 1}, {1, 1}}) == doctest::Approx(1.2));
  auto p1 = FiniteMeasuredSpace::point(1.0), p3 = FiniteMeasuredSpace::point(3.0);
  CHECK(coupling_term({{0, 0}}, p1, p3) == doctest::Approx(2.0));
}

TEST_CASE("f_k") {
  CHECK(f_k(0.6, 2) == 1.0);
  CHECK(f_k(0.4, 2) == doctest::Approx(0.4));
  CHECK(f_k(0.2, 2) == 0.0);
  CHECK(f_k(1.0 / 3.0, 2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(f_k(0.5, 0), DomainError);
}

TEST_CASE("rho_lp") {
  std::mt19937_64 rng(2);
  Collection a{random_space(2, rng), random_space(3, rng)};
  CHECK(rho_lp(a, a).value == 0.0);
  auto far = FiniteMeasuredSpace::point(1000.0);
  Collection b = a;
  b.push_back(far);
  CHECK(rho_lp(a, b).value == doctest::Approx(1.0));
  CHECK(rho_lp(b, a).value == doctest::Approx(1.0));

  Collection c{random_space(2, rng)};
  const double base = rho_lp(a, c).value;
  auto extra = random_space(2, rng);
  Collection a2 = a, c2 = c;
  a2.push_back(extra);
  c2.push_back(extra);
  CHECK(rho_lp(a2, c2).value <= base + 1e-12);
}

TEST_CASE("L_GHP") {
  std::mt19937_64 rng(4);
  Collection a{random_space(2, rng), random_space(3, rng), FiniteMeasuredSpace::point(0.05)};
  auto same = l_ghp(a, a);
  CHECK(same.value == 0.0);
  CHECK(same.tail_bound < 1e-6);

  Collection micro;
  for (int i = 0; i < 20; ++i) {
    auto s = random_space(3, rng);
    s.mass *= 0.1 / s.total_mass();
    s.dist *= 1000.0;
    micro.push_back(s);
  }
  CHECK(l_ghp(micro, {}).value <= std::ldexp(1.0, -8) * 4 + 1e-15);

  for (int rep = 0; rep < 20; ++rep) {
    Collection c{random_space(1 + rep % 3, rng), random_space(2, rng)};
    double top = 0.0;
    for (auto& s : c) top = std::max(top, s.total_mass());
    CHECK(l_ghp(c, {}).value <= std::pow(2.0, 2.0 - 1.0 / top) + 1e-12);
  }
}

TEST_CASE("L_GHP against matched d_GHP") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> jitter(0.0, 0.02);
  for (int rep = 0; rep < 20; ++rep) {
    Collection a, b;
    for (int i = 0; i < 3; ++i) {
      auto s = random_space(2, rng);
      auto t = s;
      t.mass[0] = std::max(0.0, t.mass[0] + jitter(rng));
      const double g = std::abs(jitter(rng));
      t.dist(0, 1) += g;
      t.dist(1, 0) += g;
      a.push_back(s);
      b.push_back(t);
    }
    double sup = 0.0;
    for (int i = 0; i < 3; ++i) sup = std::max(sup, dghp_exact(a[i], b[i]));
    CHECK(l_ghp(a, b).value <= sup * (1 + 8 * 3) + 1e-12);
  }
}

TEST_CASE("size distances and lp_ghp") {
  Collection a{FiniteMeasuredSpace::point(0.6)};
  Collection b{FiniteMeasuredSpace::point(0.6), FiniteMeasuredSpace::point(0.2)};
  CHECK(size_distance(a, b, 2) == doctest::Approx(0.2));
  CHECK(size_distance(a, b, 1) == doctest::Approx(0.2));
  CHECK(lp_ghp(a, a, 2) == 0.0);
  CHECK(lp_ghp(a, b, 1) >= 0.2);
  CHECK_THROWS_AS(size_distance(a, b, 3), DomainError);
}

TEST_CASE("surplus-augmented distance") {
  auto a = FiniteMeasuredSpace::point(1.0, 2), b = FiniteMeasuredSpace::point(1.2, 0);
  CHECK(dghp_surplus(a, b) == doctest::Approx(2.0));
  CHECK(dghp_surplus(a, a) == 0.0);
  CHECK_THROWS_AS(dghp_surplus(a, FiniteMeasuredSpace::point(1.0)), MissingSurplus);
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(1);
  auto s = random_space(3, rng);
  s.surplus = 1;
  auto back = space_from_json(to_json(s));
  CHECK((back.dist - s.dist).cwiseAbs().maxCoeff() == 0.0);
  CHECK(*back.surplus == 1);
  Collection c{s, FiniteMeasuredSpace::point(0.3)};
  auto cb = collection_from_json(to_json(c));
  CHECK(cb.size() == 2);
  CHECK(collection_from_json(to_json(s)).size() == 1);
  CHECK_THROWS_AS(space_from_json("{\"dist\":[[0,1],[2,0]],\"mass\":[1,1]}"), InvalidSpace);
  CHECK_THROWS_AS(space_from_json("not json"), FormatError);
}
