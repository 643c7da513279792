#pragma once

#include <cstddef>
#include <span>

namespace tailwalk {

/// Hill estimate of the tail index from the top-k order statistics:
/// k / sum_{i=1}^{k} log(X_(n-i+1) / X_(n-k)). Returns 0 for a degenerate
/// sample whose top order statistics are all equal. Throws DomainError on
/// nonpositive entries or k outside [1, n-1].
double hill_estimator(std::span<const double> sample, std::size_t k);

struct KsResult {
  double statistic = 0.0;    // sup |F1 - F2|
  double threshold = 0.0;    // rejection threshold at the fixed level
  bool reject = false;       // statistic > threshold
};

/// Two-sample Kolmogorov-Smirnov test at the 95% level, using the
/// asymptotic threshold c(0.05) * sqrt((n+m)/(n m)) with c(0.05) = 1.3581.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

MeanWithError sample_mean(std::span<const double> values);

/// Standard error of a binomial proportion p estimated from n trials.
double binomial_std_error(double p_hat, std::size_t n);

}  // namespace tailwalk
