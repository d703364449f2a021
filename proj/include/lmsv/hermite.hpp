#pragma once

// Probabilists' Hermite polynomials, Hermite coefficients of G(x) = sigma^alpha(x)
// and of the conditional-tail ratio G_n(x,s), rank detection, and
// subordinated-sum variance predictions.

#include <functional>
#include <vector>

#include "lmsv/gauss_lrd.hpp"
#include "lmsv/quadrature.hpp"
#include "lmsv/tails.hpp"

namespace lmsv {

// He_m(x): He_0 = 1, He_1 = x, He_{m+1} = x He_m - m He_{m-1};
// cov(He_j(X), He_k(X)) = delta_{jk} k!.
double hermite_poly(int m, double x);

struct HermiteExpansion {
  std::vector<double> coeffs;   // c_0..c_M, c_m = E[G(X) He_m(X)]
  int max_order = 0;
  int rank = 0;                 // smallest m >= 1 with |c_m| > tol * max(1, ||c||_2)
  bool rank_found = false;
  double tol_used = 0.0;
  double g_sq_mean = 0.0;       // E[G^2(X)], for Parseval checks and tail bounds
  bool quad_converged = true;

  double coeff(int m) const { return coeffs.at(static_cast<std::size_t>(m)); }
};

// Coefficients of a generic G by adaptive Gauss-Hermite (all orders evaluated
// on the same doubling node sequence).  Default rank tolerance 1e-8.
HermiteExpansion expand(const std::function<double(double)>& g, int max_order,
                        const quad::QuadPolicy& policy = {}, double rank_tol = 1e-8);

// Rank accessor; throws std::domain_error when no coefficient exceeded the
// tolerance ("rank undetected up to M").
int rank_of(const HermiteExpansion& exp);

// Hermite coefficients J_n(m, s) of x -> P(sigma(x) Z > (1+s) u_n) / P(Z > u_n).
// exp_scaled volatility with the analytic noise families evaluates in closed
// form (Gaussian-moment recurrences split at the survival clamp); tabulated
// volatility falls back to adaptive quadrature.
HermiteExpansion expand_gn(const VolatilitySpec& vol, const NoiseSpec& noise, double u_n,
                           double s, int max_order, const quad::QuadPolicy& policy = {},
                           double rank_tol = 1e-8);

// Asymptotic variance of sum_{j<=n} G(X_j) for G of Hermite rank q with
// coefficient J_q, valid when q(1-H) < 1/2:
//   (J_q^2 / q!) n^2 rho_n^q / ((1 - q(1-H)) (1 - 2q(1-H))),
// rho_n = autocov_asymptotic(lrd, n).  For the fGn family with q = 1 this
// equals n^{2H} exactly, matching var(B_H(n)).  Throws std::domain_error in
// the short-memory/borderline regime q(1-H) >= 1/2 (there partial sums are
// asymptotically N(0, Sigma_0^2) at rate sqrt(n)).
double variance_sum_prediction(const LrdSpec& lrd, double j_q, int q, long n);

struct RozanovResult {
  double value = 0.0;       // sum_{m>=1} (c_m^2 / m!) rho^m, truncated at M
  double tail_bound = 0.0;  // |rho|^{M+1} * (E[G^2] - sum_{m<=M} c_m^2/m!)
  bool tail_warning = false;
};

// cov(G(X_0), G(X_k)) from the expansion and rho_k = cov(X_0, X_k).
RozanovResult rozanov_cov(const HermiteExpansion& exp, double rho_k,
                          double warn_tol = 1e-8);

// Sigma_0^2 = var(G(X_0)) + 2 sum_{j>=1} cov(G(X_0), G(X_j)) for weakly
// dependent subordinated sums; sums the Rozanov series over exact lags.
double sigma0_sq(const HermiteExpansion& exp, const LrdSpec& lrd, long max_lag = 100000);

}  // namespace lmsv
