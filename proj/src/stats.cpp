#include "dynperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynperc/errors.hpp"

namespace dynperc {

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series converges too slowly; the value is 1 - O(1e-20)
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double root = std::sqrt(ne);
  return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d)};
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw DomainError("quantile: empty sample");
  std::sort(xs.begin(), xs.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double binomial_sigma(double p, double trials) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / trials); }

}  // namespace dynperc
