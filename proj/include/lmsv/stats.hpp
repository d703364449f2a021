#pragma once

// Small sample-statistics helpers used by the Monte Carlo harness and tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lmsv/kernels.hpp"

namespace lmsv::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean: empty sample");
  return kernels::sum(x) / static_cast<double>(x.size());
}

// Unbiased sample variance.
inline double variance(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("variance: need at least 2 values");
  const double m = mean(x);
  std::vector<double> c(x.begin(), x.end());
  for (double& v : c) v -= m;
  return kernels::dot(c, c) / static_cast<double>(n - 1);
}

inline double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

inline double se_of_mean(std::span<const double> x) {
  return sd(x) / std::sqrt(static_cast<double>(x.size()));
}

inline double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("covariance: bad sizes");
  const double mx = mean(x), my = mean(y);
  std::vector<double> cx(x.begin(), x.end()), cy(y.begin(), y.end());
  for (double& v : cx) v -= mx;
  for (double& v : cy) v -= my;
  return kernels::dot(cx, cy) / static_cast<double>(x.size() - 1);
}

inline double correlation(std::span<const double> x, std::span<const double> y) {
  return covariance(x, y) / (sd(x) * sd(y));
}

inline double median(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("median: empty sample");
  std::vector<double> c(x.begin(), x.end());
  const std::size_t mid = c.size() / 2;
  std::nth_element(c.begin(), c.begin() + mid, c.end());
  double hi = c[mid];
  if (c.size() % 2 == 1) return hi;
  std::nth_element(c.begin(), c.begin() + mid - 1, c.begin() + mid);
  return 0.5 * (c[mid - 1] + hi);
}

// Autocovariance of a known-zero-mean series, normalized by (n - lag) so the
// estimator is exactly unbiased; no mean subtraction (under long memory the
// sample mean would bias every lag by var(mean), which is O(n^{2H-2})).
inline double autocov_zero_mean(std::span<const double> x, std::size_t lag) {
  if (lag >= x.size()) throw std::invalid_argument("autocov: lag >= n");
  return kernels::lagged_dot(x, lag) / static_cast<double>(x.size() - lag);
}

// Standard error of the unbiased sample variance via the fourth central
// moment: se^2 = (m4 - s^4 (n-3)/(n-1)) / n.
inline double se_of_variance(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) throw std::invalid_argument("se_of_variance: need at least 4 values");
  const double m = mean(x);
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - m, d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  const double s2 = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
  const double var_of_var =
      (m4 - s2 * s2 * static_cast<double>(n - 3) / static_cast<double>(n - 1)) /
      static_cast<double>(n);
  return std::sqrt(std::max(0.0, var_of_var));
}

// Standard error of the sample covariance: se^2 = (m22 - cov^2)/n.
inline double se_of_covariance(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 4) throw std::invalid_argument("se_of_covariance: bad sizes");
  const double mx = mean(x), my = mean(y);
  double c = 0, m22 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (x[i] - mx) * (y[i] - my);
    c += p;
    m22 += p * p;
  }
  c /= static_cast<double>(n);
  m22 /= static_cast<double>(n);
  return std::sqrt(std::max(0.0, (m22 - c * c) / static_cast<double>(n)));
}

}  // namespace lmsv::stats
