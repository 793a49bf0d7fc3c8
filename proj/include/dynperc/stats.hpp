#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dynperc {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value
/// (conservative for discrete data).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
/// Linear-interpolated quantile, q in [0,1].
double quantile(std::vector<double> xs, double q);

/// Standard error of a Bernoulli frequency estimate.
double binomial_sigma(double p, double trials);

}  // namespace dynperc
