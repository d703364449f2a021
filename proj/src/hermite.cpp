#include "lmsv/hermite.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lmsv {

double hermite_poly(int m, double x) {
  if (m < 0) throw std::invalid_argument("hermite_poly: m must be >= 0");
  if (m == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < m; ++k) {
    const double next = x * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

void detect_rank(HermiteExpansion& e, double rank_tol) {
  double norm_sq = 0.0;
  for (double c : e.coeffs) norm_sq += c * c;
  e.tol_used = rank_tol * std::max(1.0, std::sqrt(norm_sq));
  e.rank_found = false;
  e.rank = 0;
  for (int m = 1; m <= e.max_order; ++m) {
    if (std::abs(e.coeffs[static_cast<std::size_t>(m)]) > e.tol_used) {
      e.rank = m;
      e.rank_found = true;
      break;
    }
  }
}

// All coefficients on one fixed rule; He values by recurrence per node.
std::vector<double> coeffs_fixed(const std::function<double(double)>& g, int max_order,
                                 int nodes, double* g_sq) {
  const quad::GaussHermiteRule& r = quad::gauss_hermite(nodes);
  std::vector<double> c(static_cast<std::size_t>(max_order) + 1, 0.0);
  double gsq = 0.0;
  const double sqrt2 = std::numbers::sqrt2;
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < nodes; ++i) {
    const double x = sqrt2 * r.nodes[i];
    const double w = r.weights[i];
    const double gv = g(x);
    gsq += w * gv * gv;
    double prev = 1.0, cur = x;
    c[0] += w * gv;
    if (max_order >= 1) c[1] += w * gv * x;
    for (int m = 2; m <= max_order; ++m) {
      const double next = x * cur - static_cast<double>(m - 1) * prev;
      prev = cur;
      cur = next;
      c[static_cast<std::size_t>(m)] += w * gv * cur;
    }
  }
  for (double& v : c) v *= inv_sqrt_pi;
  if (g_sq) *g_sq = gsq * inv_sqrt_pi;
  return c;
}

}  // namespace

HermiteExpansion expand(const std::function<double(double)>& g, int max_order,
                        const quad::QuadPolicy& policy, double rank_tol) {
  if (max_order < 1) throw std::invalid_argument("expand: max_order must be >= 1");
  HermiteExpansion e;
  e.max_order = max_order;
  double gsq_prev = 0.0;
  std::vector<double> prev = coeffs_fixed(g, max_order, policy.start_nodes, &gsq_prev);
  int n = policy.start_nodes;
  double rel = std::numeric_limits<double>::infinity();
  while (n < policy.max_nodes) {
    n *= 2;
    double gsq = 0.0;
    std::vector<double> cur = coeffs_fixed(g, max_order, n, &gsq);
    rel = std::abs(gsq - gsq_prev) / std::max(1.0, std::abs(gsq));
    for (int m = 0; m <= max_order; ++m) {
      const std::size_t i = static_cast<std::size_t>(m);
      rel = std::max(rel, std::abs(cur[i] - prev[i]) / std::max(1.0, std::abs(cur[i])));
    }
    prev = std::move(cur);
    gsq_prev = gsq;
    if (rel < policy.rel_tol) break;
  }
  e.quad_converged = rel < policy.rel_tol;
  if (!e.quad_converged && policy.require_convergence)
    throw quad::NumericError("expand: Hermite coefficients did not converge (rel change " +
                             std::to_string(rel) + ")");
  e.coeffs = std::move(prev);
  e.g_sq_mean = gsq_prev;
  detect_rank(e, rank_tol);
  return e;
}

int rank_of(const HermiteExpansion& exp) {
  if (!exp.rank_found)
    throw std::domain_error("rank undetected up to M = " + std::to_string(exp.max_order));
  return exp.rank;
}

HermiteExpansion expand_gn(const VolatilitySpec& vol, const NoiseSpec& noise, double u_n,
                           double s, int max_order, const quad::QuadPolicy& policy,
                           double rank_tol) {
  if (!(u_n > 0) || s < 0) throw std::invalid_argument("expand_gn: u_n > 0, s >= 0 required");
  if (max_order < 1) throw std::invalid_argument("expand_gn: max_order must be >= 1");
  const double fz_un = survival_z(noise, u_n);
  const double w = (1.0 + s) * u_n;

  if (vol.family == VolatilitySpec::Family::exp_scaled) {
    const double tau = vol.tau;
    HermiteExpansion e;
    e.max_order = max_order;
    e.coeffs.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
    if (tau == 0.0) {
      // G_n constant in x: J_n(0,s) = survival ratio, higher coefficients 0.
      e.coeffs[0] = survival_z(noise, w) / fz_un;
      e.g_sq_mean = e.coeffs[0] * e.coeffs[0];
      detect_rank(e, rank_tol);
      return e;
    }
    // Split at the clamp x* = log(w/s0)/tau.  Above x* the integrand is
    // He_m(x) phi(x), integrating to He_{m-1}(x*) phi(x*) (and SF(x*) for
    // m = 0); below, each smooth-tail power term contributes coef * w^{-e}
    // times the Gaussian-moment integral I_m(tau e, x*).
    const double s0 = noise.support_lower;
    const double xstar = std::log(w / s0) / tau;
    const double phi_star = quad::normal_pdf(xstar);
    const SmoothTail st = smooth_tail(noise);
    std::vector<double> total(static_cast<std::size_t>(max_order) + 1, 0.0);
    total[0] = quad::normal_sf(xstar);
    for (int m = 1; m <= max_order; ++m)
      total[static_cast<std::size_t>(m)] = hermite_poly(m - 1, xstar) * phi_star;
    for (const auto& t : st.power_terms) {
      const auto I = quad::hermite_exp_integrals(tau * t.expo, xstar, max_order);
      const double scale = t.coef * std::pow(w, -t.expo);
      for (int m = 0; m <= max_order; ++m)
        total[static_cast<std::size_t>(m)] += scale * I[static_cast<std::size_t>(m)];
    }
    if (st.has_log) {
      const auto I = quad::hermite_exp_integrals(tau * st.log_expo, xstar, max_order + 1);
      const double scale = st.log_coef * std::pow(w, -st.log_expo);
      const double logw = std::log(w);
      for (int m = 0; m <= max_order; ++m) {
        // x He_m = He_{m+1} + m He_{m-1}
        const double xi = I[static_cast<std::size_t>(m) + 1] +
                          (m > 0 ? static_cast<double>(m) * I[static_cast<std::size_t>(m) - 1]
                                 : 0.0);
        total[static_cast<std::size_t>(m)] +=
            scale * (logw * I[static_cast<std::size_t>(m)] - tau * xi);
      }
    }
    for (int m = 0; m <= max_order; ++m)
      e.coeffs[static_cast<std::size_t>(m)] = total[static_cast<std::size_t>(m)] / fz_un;
    // E[G_n^2] has the same clamp kink; adaptive quadrature, reported only.
    quad::QuadPolicy p = policy;
    p.require_convergence = false;
    const quad::QuadResult gsq = quad::expect_adaptive(
        [&](double x) {
          const double g = survival_z(noise, w / vol.sigma(x)) / fz_un;
          return g * g;
        },
        p);
    e.g_sq_mean = gsq.value;
    e.quad_converged = true;
    detect_rank(e, rank_tol);
    return e;
  }

  // tabulated volatility: generic quadrature route
  quad::QuadPolicy p = policy;
  p.require_convergence = false;
  HermiteExpansion e = expand(
      [&](double x) {
        const double sig = vol.sigma(x);
        if (sig <= 0.0) return 0.0;
        return survival_z(noise, w / sig) / fz_un;
      },
      max_order, p, rank_tol);
  return e;
}

double variance_sum_prediction(const LrdSpec& lrd, double j_q, int q, long n) {
  if (q < 1 || n < 1) throw std::invalid_argument("variance_sum_prediction: q >= 1, n >= 1");
  const double h = lrd.hurst;
  const double q1h = static_cast<double>(q) * (1.0 - h);
  if (!(q1h < 0.5))
    throw std::domain_error(
        "variance_sum_prediction: short-memory/borderline regime (q(1-H) = " +
        std::to_string(q1h) +
        " >= 1/2); partial sums are asymptotically N(0, Sigma_0^2) at rate sqrt(n)");
  const double rho_n = autocov_asymptotic(lrd, n);
  double q_fact = 1.0;
  for (int j = 2; j <= q; ++j) q_fact *= j;
  const double nn = static_cast<double>(n);
  return (j_q * j_q / q_fact) * nn * nn * std::pow(rho_n, q) /
         ((1.0 - q1h) * (1.0 - 2.0 * q1h));
}

RozanovResult rozanov_cov(const HermiteExpansion& exp, double rho_k, double warn_tol) {
  if (!(std::abs(rho_k) <= 1.0))
    throw std::invalid_argument("rozanov_cov: |rho_k| must be <= 1");
  RozanovResult r;
  double fact = 1.0;
  double rho_pow = 1.0;
  double partial_sq = exp.coeffs[0] * exp.coeffs[0];
  for (int m = 1; m <= exp.max_order; ++m) {
    fact *= m;
    rho_pow *= rho_k;
    const double c = exp.coeffs[static_cast<std::size_t>(m)];
    r.value += c * c / fact * rho_pow;
    partial_sq += c * c / fact;
  }
  const double resid = std::max(0.0, exp.g_sq_mean - partial_sq);
  r.tail_bound = std::pow(std::abs(rho_k), exp.max_order + 1) * resid;
  r.tail_warning = r.tail_bound > warn_tol * std::max(1.0, std::abs(r.value));
  return r;
}

double sigma0_sq(const HermiteExpansion& exp, const LrdSpec& lrd, long max_lag) {
  double total = rozanov_cov(exp, 1.0).value;  // var(G(X_0))
  const double scale = std::max(total, 1e-300);
  for (long k = 1; k <= max_lag; ++k) {
    const double term = 2.0 * rozanov_cov(exp, autocov(lrd, k)).value;
    total += term;
    if (std::abs(term) < 1e-12 * scale) break;
  }
  return total;
}

}  // namespace lmsv
