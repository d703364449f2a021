#include "lmsv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace lmsv::quad {

extern "C" void dstev_(const char* jobz, const int* n, double* d, double* e, double* z,
                       const int* ldz, double* work, int* info);

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// orthonormal Hermite recurrence (weight exp(-x^2): zero diagonal,
// off-diagonal sqrt(j/2)), weights sqrt(pi) times the squared first
// eigenvector components.  Extreme-node weights underflow to zero cleanly.
GaussHermiteRule compute_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(std::max(0, n - 1));
  for (int j = 1; j < n; ++j) off[j - 1] = std::sqrt(0.5 * j);
  std::vector<double> vec(static_cast<std::size_t>(n) * n);
  std::vector<double> work(std::max(1, 2 * n - 2));
  int info = 0;
  const char jobz = 'V';
  dstev_(&jobz, &n, diag.data(), off.data(), vec.data(), &n, work.data(), &info);
  if (info != 0)
    throw NumericError("gauss_hermite: dstev failed with info = " + std::to_string(info));
  GaussHermiteRule rule;
  rule.nodes = std::move(diag);  // ascending eigenvalues
  rule.weights.resize(n);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    const double v0 = vec[static_cast<std::size_t>(i) * n];
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
  static std::map<int, GaussHermiteRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double expect_fixed(const std::function<double(double)>& f, int n) {
  const GaussHermiteRule& r = gauss_hermite(n);
  const double sqrt2 = std::numbers::sqrt2;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.weights[i] * f(sqrt2 * r.nodes[i]);
  return s / std::sqrt(std::numbers::pi);
}

QuadResult expect_adaptive(const std::function<double(double)>& f, const QuadPolicy& policy) {
  QuadResult res;
  double prev = expect_fixed(f, policy.start_nodes);
  int n = policy.start_nodes;
  res.value = prev;
  res.nodes = n;
  res.rel_change = std::numeric_limits<double>::infinity();
  while (n < policy.max_nodes) {
    n *= 2;
    const double cur = expect_fixed(f, n);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    res.rel_change = std::abs(cur - prev) / scale;
    res.value = cur;
    res.nodes = n;
    prev = cur;
    if (res.rel_change < policy.rel_tol) {
      res.converged = true;
      return res;
    }
  }
  res.converged = res.rel_change < policy.rel_tol;
  if (!res.converged && policy.require_convergence)
    throw NumericError("quadrature did not converge: relative change " +
                       std::to_string(res.rel_change) + " at " + std::to_string(res.nodes) +
                       " nodes");
  return res;
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

std::vector<double> hermite_exp_integrals(double b, double cut, int max_order) {
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  const double eb = std::exp(0.5 * b * b);
  const double boundary = eb * normal_pdf(cut - b);  // e^{b cut} phi(cut), stable form
  out[0] = eb * normal_cdf(cut - b);
  double he_prev = 1.0, he = cut;  // He_0, He_1 at cut
  for (int m = 1; m <= max_order; ++m) {
    out[m] = b * out[m - 1] - he_prev * boundary;
    const double he_next = cut * he - static_cast<double>(m) * he_prev;
    he_prev = he;
    he = he_next;
  }
  return out;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                 int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw NumericError("find_root: endpoints do not bracket a root");
  int side = 0;  // endpoint retained on the previous iteration (Illinois halving)
  for (int it = 0; it < max_iter; ++it) {
    double mid = (flo * hi - fhi * lo) / (flo - fhi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0) == (flo > 0)) {
      lo = mid;
      flo = fmid;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      fhi = fmid;
      if (side == +1) flo *= 0.5;
      side = +1;
    }
    if (hi - lo <= rel_tol * std::max(1e-300, std::max(std::abs(lo), std::abs(hi))))
      return 0.5 * (lo + hi);
  }
  throw NumericError("find_root: no convergence after " + std::to_string(max_iter) +
                     " iterations (bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "])");
}

}  // namespace lmsv::quad
