#pragma once

// Heavy-tailed noise laws with first- and second-order regular variation
// structure, volatility functions, Breiman constants, conditional tails T_n,
// the limit tail T, the quantile function U, and rate functions eta*.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lmsv/quadrature.hpp"
#include "lmsv/rng.hpp"

namespace lmsv {

// ---------------------------------------------------------------------------
// Noise laws.  All families are proper distributions with survival = 1 at
// support_lower.  Implemented tails (documented exact forms):
//   pareto:              F(z)    = c z^{-a},                      z >= s0 = c^{1/a}
//   pareto_second_order: F(z)    = c z^{-a} (1 + z^{-ab}) / (1 + s0^{-ab}),
//                        s0 = c^{1/a}   (second-order index -ab)
//   log_perturbed:       F(z)    = (z^{-a} log z) / (s0^{-a} log s0),
//                        s0 = e^{max(1, 1/a)}   (slowly varying perturbation,
//                        the beta = 0 extreme case)
struct NoiseSpec {
  enum class Family { pareto, pareto_second_order, log_perturbed };

  Family family = Family::pareto;
  double alpha = 1.0;
  double c = 1.0;      // scale in the implemented tail
  double beta = 0.0;   // second-order exponent (pareto_second_order only)
  double support_lower = 1.0;

  static NoiseSpec pareto(double alpha, double c = 1.0);
  static NoiseSpec pareto_second_order(double alpha, double beta, double c = 1.0);
  static NoiseSpec log_perturbed(double alpha);
};

// P(Z > z); equals 1 for z <= support_lower.
double survival_z(const NoiseSpec& noise, double z);

// Inverse of survival_z: the z with P(Z > z) = p, p in (0, 1]; analytic for
// pareto, monotone root-finding otherwise.
double quantile_z(const NoiseSpec& noise, double p);

// i.i.d. draws by inverse transform, deterministic per stream.
std::vector<double> sample_z(const NoiseSpec& noise, std::size_t n, RngStream& stream);

// T(s) = (1+s)^{-alpha}.
double limit_tail(double alpha, double s);

// Smooth part of the survival function above support, as a sum of power
// terms plus an optional z^{-expo} log z term; shared with the Hermite
// coefficient machinery.
struct SmoothTail {
  struct Term {
    double coef;
    double expo;
  };
  std::vector<Term> power_terms;
  double log_coef = 0.0;
  double log_expo = 0.0;
  bool has_log = false;
};
SmoothTail smooth_tail(const NoiseSpec& noise);

// ---------------------------------------------------------------------------
// Volatility functions sigma(x) >= 0.
struct VolatilitySpec {
  enum class Family { exp_scaled, tabulated };

  Family family = Family::exp_scaled;
  double tau = 0.0;                                   // sigma(x) = exp(tau x)
  std::vector<std::pair<double, double>> table;       // (x, sigma(x)), x increasing

  double sigma(double x) const;

  static VolatilitySpec exp_scaled(double tau);
  // Values outside the table clamp to the endpoints.
  static VolatilitySpec tabulated(std::vector<std::pair<double, double>> points);
};

// ---------------------------------------------------------------------------
// Rate functions eta* for the second-order condition: bounded, nonincreasing,
// tending to 0, regularly varying with index -alpha*beta.
struct RateFunction {
  enum class Form { power, inverse_log };

  Form form = Form::power;
  double alpha_beta = 1.0;  // decay exponent for the power form
  double constant = 1.0;

  static RateFunction power(double alpha_beta, double constant = 1.0);
  static RateFunction inverse_log();
};

// power: C min(1, t^{-alpha_beta}); inverse_log: 1/log t, domain t >= e.
double eta_star(const RateFunction& rate, double t);

// ---------------------------------------------------------------------------
// Evaluation grids with s_0 = 0, strictly increasing.
struct TailGrid {
  enum class Layout { linear, log_spaced };

  std::vector<double> s;
  Layout layout = Layout::linear;

  static TailGrid linear(double s_max, std::size_t count);
  // 0 followed by count-1 log-spaced points on [s_min, s_max].
  static TailGrid log_spaced(double s_min, double s_max, std::size_t count);
  static TailGrid from_points(std::vector<double> points);
  // Documented default for sup norms: 512 log-spaced points with
  // T(s_max) < 1e-6, i.e. s_max = 10^{6/alpha} - 1.
  static TailGrid default_for_alpha(double alpha);
};

// ---------------------------------------------------------------------------
// The stochastic volatility tail model Y = sigma(X) Z, X ~ N(0,1).
class TailModel {
 public:
  TailModel(VolatilitySpec vol, NoiseSpec noise, quad::QuadPolicy policy = {});

  const VolatilitySpec& vol() const { return vol_; }
  const NoiseSpec& noise() const { return noise_; }
  double alpha() const { return noise_.alpha; }

  // P(Y > y) = E[F_Z(y / sigma(X))].  For exp_scaled volatility with the
  // analytic noise families the Gaussian mixture splits exactly at the
  // survival clamp: P(Y > y) = SF(x*) + closed Gaussian-moment terms,
  // x* = log(y / s0) / tau; the split avoids quadrature error from the kink
  // at F_Z = 1.  Tabulated volatility integrates by adaptive Gauss-Hermite.
  double survival_y(double y) const;

  // Generic Gauss-Hermite node-doubling route (also used as a cross-check
  // of the split evaluation in the tests).
  quad::QuadResult survival_y_quad(double y) const;

  // E[sigma^alpha(X)] by adaptive Gauss-Hermite.
  double breiman_constant() const;

  // U(t) = F^{<-}(1 - 1/t), t >= 1, by monotone root finding on survival_y;
  // satisfies survival_y(U(t)) = 1/t to 1e-10 relative.
  double quantile_u(double t) const;

  // T_n(s) = survival_y(u_n (1+s)) / survival_y(u_n).
  double conditional_tail(double u_n, double s) const;

  // max over the grid of |T_n(s) - T(s)|.
  double sup_norm_tn_minus_t(double u_n, const TailGrid& grid) const;

 private:
  VolatilitySpec vol_;
  NoiseSpec noise_;
  quad::QuadPolicy policy_;
};

// Free-function forms mirroring the model surface.
double survival_y(const VolatilitySpec& vol, const NoiseSpec& noise, double y);
double breiman_constant(const VolatilitySpec& vol, double alpha);
double quantile_u(const VolatilitySpec& vol, const NoiseSpec& noise, double t);
double conditional_tail_tn(const VolatilitySpec& vol, const NoiseSpec& noise, double u_n,
                           double s);
double sup_norm_tn_minus_t(const VolatilitySpec& vol, const NoiseSpec& noise, double u_n,
                           const TailGrid& grid);

}  // namespace lmsv
