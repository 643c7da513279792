#include "tailwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tailwalk/errors.hpp"

namespace tailwalk {

double hill_estimator(std::span<const double> sample, std::size_t k) {
  const std::size_t n = sample.size();
  if (k < 1 || k >= n) {
    throw DomainError("hill_estimator requires 1 <= k < n");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  for (double x : sorted) {
    if (!(x > 0.0)) throw DomainError("hill_estimator requires positive entries");
  }
  std::sort(sorted.begin(), sorted.end());
  const double pivot = sorted[n - k - 1];
  double log_sum = 0.0;
  for (std::size_t i = n - k; i < n; ++i) {
    log_sum += std::log(sorted[i] / pivot);
  }
  if (log_sum == 0.0) return 0.0;  // degenerate: top order statistics equal
  return static_cast<double>(k) / log_sum;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw DomainError("ks_two_sample requires nonempty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double max_gap = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    max_gap = std::max(max_gap, std::abs(i / na - j / nb));
  }

  KsResult result;
  result.statistic = max_gap;
  // c(alpha) = sqrt(-ln(alpha/2)/2) at alpha = 0.05.
  result.threshold = 1.3581015157406195 * std::sqrt((na + nb) / (na * nb));
  result.reject = result.statistic > result.threshold;
  return result;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("linear_fit requires two equally sized samples, n >= 2");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("linear_fit: x values are constant");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

MeanWithError sample_mean(std::span<const double> values) {
  MeanWithError out;
  out.n = values.size();
  if (out.n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - out.mean;
      ss += d * d;
    }
    out.std_error = std::sqrt(ss / (static_cast<double>(out.n) - 1.0) /
                              static_cast<double>(out.n));
  }
  return out;
}

double binomial_std_error(double p_hat, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(n));
}

}  // namespace tailwalk
