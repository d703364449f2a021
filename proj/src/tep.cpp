#include "lmsv/tep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmsv {

namespace {

// Exceedance counts #{y > threshold} for every grid point from one sort.
std::vector<std::size_t> exceed_counts(const std::vector<double>& y, double base,
                                       const TailGrid& grid) {
  std::vector<double> sorted(y);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> counts(grid.s.size());
  for (std::size_t i = 0; i < grid.s.size(); ++i) {
    const double threshold = base * (1.0 + grid.s[i]);
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), threshold);
    counts[i] = static_cast<std::size_t>(sorted.end() - it);
  }
  return counts;
}

// Y_{n-k:n}: the (n-k)-th increasing order statistic.
double order_stat_n_minus_k(const Sample& sample, long k) {
  const long n = static_cast<long>(sample.size());
  if (k < 1 || k >= n) throw std::invalid_argument("order statistic: need 1 <= k < n");
  std::vector<double> sorted(sample.y);
  std::nth_element(sorted.begin(), sorted.begin() + (n - k - 1), sorted.end());
  return sorted[static_cast<std::size_t>(n - k - 1)];
}

}  // namespace

bool Sample::reconstructs(double tol) const {
  if (!latent_x || !latent_z || !meta) return false;
  if (latent_x->size() != y.size() || latent_z->size() != y.size()) return false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double expect = meta->vol.sigma((*latent_x)[i]) * (*latent_z)[i];
    if (std::abs(expect - y[i]) > tol * std::max(1.0, std::abs(y[i]))) return false;
  }
  return true;
}

TepCurve tail_empirical(const Sample& sample, double u_n, double fbar_un, const TailGrid& grid,
                        const TailModel& model) {
  if (!(u_n > 0)) throw std::invalid_argument("tail_empirical: u_n must be > 0");
  if (!(fbar_un > 0 && fbar_un <= 1))
    throw std::invalid_argument("tail_empirical: fbar_un must lie in (0,1]");
  const double n = static_cast<double>(sample.size());
  const double denom_y = model.survival_y(u_n);
  TepCurve curve;
  curve.grid = grid;
  curve.level = DeterministicLevel{u_n, fbar_un};
  const auto counts = exceed_counts(sample.y, u_n, grid);
  curve.tilde_t.resize(counts.size());
  curve.centered.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    curve.tilde_t[i] = static_cast<double>(counts[i]) / (n * fbar_un);
    const double t_n = model.survival_y(u_n * (1.0 + grid.s[i])) / denom_y;
    curve.centered[i] = curve.tilde_t[i] - t_n;
  }
  return curve;
}

TepCurve random_level_tep(const Sample& sample, long k, const TailGrid& grid, double alpha) {
  const double level = order_stat_n_minus_k(sample, k);
  if (!(level > 0))
    throw std::invalid_argument("random_level_tep: order statistic must be positive");
  TepCurve curve;
  curve.grid = grid;
  curve.level = RandomLevel{k, level};
  const auto counts = exceed_counts(sample.y, level, grid);
  curve.tilde_t.resize(counts.size());
  curve.centered.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    curve.tilde_t[i] = static_cast<double>(counts[i]) / static_cast<double>(k);
    curve.centered[i] = curve.tilde_t[i] - limit_tail(alpha, grid.s[i]);
  }
  return curve;
}

double hill(const Sample& sample, long k) {
  const long n = static_cast<long>(sample.size());
  if (k < 1 || k >= n) throw std::invalid_argument("hill: need 1 <= k < n");
  std::vector<double> sorted(sample.y);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const double base = sorted[static_cast<std::size_t>(k)];  // Y_{n-k:n}
  if (!(base > 0))
    throw quad::NumericError("hill: order statistic Y_{n-k:n} is not positive");
  double acc = 0.0;
  for (long i = 0; i < k; ++i) acc += std::log(sorted[static_cast<std::size_t>(i)] / base);
  return acc / static_cast<double>(k);
}

double intermediate_quantile_stat(const Sample& sample, long k, double u_n) {
  if (!(u_n > 0)) throw std::invalid_argument("intermediate_quantile_stat: u_n must be > 0");
  return (order_stat_n_minus_k(sample, k) - u_n) / u_n;
}

Decomposition decompose(const Sample& sample, double u_n, double fbar_un, const TailGrid& grid,
                        const TailModel& model) {
  if (!sample.latent_x)
    throw std::invalid_argument("decompose: latent Gaussian path required");
  if (!(u_n > 0) || !(fbar_un > 0))
    throw std::invalid_argument("decompose: u_n > 0 and fbar_un > 0 required");
  const std::vector<double>& x = *sample.latent_x;
  const double n = static_cast<double>(sample.size());
  const auto counts = exceed_counts(sample.y, u_n, grid);
  Decomposition d;
  d.grid = grid;
  d.r_n.resize(grid.s.size());
  d.s_n.resize(grid.s.size());
  for (std::size_t i = 0; i < grid.s.size(); ++i) {
    const double t = u_n * (1.0 + grid.s[i]);
    double cond_sum = 0.0;  // sum_j P(Y_j > t | X_j)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double sig = model.vol().sigma(x[j]);
      cond_sum += sig > 0.0 ? survival_z(model.noise(), t / sig) : 0.0;
    }
    const double norm = n * fbar_un;
    d.r_n[i] = (static_cast<double>(counts[i]) - cond_sum) / norm;
    d.s_n[i] = (cond_sum - n * model.survival_y(t)) / norm;
  }
  return d;
}

}  // namespace lmsv
