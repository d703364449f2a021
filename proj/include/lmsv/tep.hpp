#pragma once

// Tail empirical distribution/process at deterministic and random levels,
// the R_n + S_n decomposition, the Hill estimator, and intermediate-quantile
// statistics.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "lmsv/gauss_lrd.hpp"
#include "lmsv/tails.hpp"

namespace lmsv {

struct SampleMeta {
  LrdSpec lrd;
  NoiseSpec noise;
  VolatilitySpec vol;
  std::uint64_t seed = 0;
};

struct Sample {
  std::vector<double> y;
  std::optional<std::vector<double>> latent_x;
  std::optional<std::vector<double>> latent_z;
  std::optional<SampleMeta> meta;

  std::size_t size() const { return y.size(); }
  // Checks y_i = sigma(x_i) z_i when the latent paths are present.
  bool reconstructs(double tol = 1e-12) const;
};

struct DeterministicLevel {
  double u_n = 0.0;
  double fbar_un = 0.0;
};
struct RandomLevel {
  long k = 0;
  double y_order_stat = 0.0;  // Y_{n-k:n}
};

struct TepCurve {
  TailGrid grid;
  std::vector<double> tilde_t;   // empirical tail values
  std::vector<double> centered;  // e_n (deterministic level) or e^*_n (random)
  std::variant<DeterministicLevel, RandomLevel> level;
  double scaling_hint = 0.0;  // w_n when a regime report attached one
};

struct Decomposition {
  TailGrid grid;
  std::vector<double> r_n;  // conditionally-centered i.i.d. part
  std::vector<double> s_n;  // subordinated (LRD) part
};

// Deterministic-level curve: tilde_T(s) = #{Y_j > u_n(1+s)} / (n fbar_un),
// centered at T_n from the model: e_n(s) = tilde_T(s) - T_n(s).
// Exceedance counts use one sort plus a binary search per grid point.
TepCurve tail_empirical(const Sample& sample, double u_n, double fbar_un, const TailGrid& grid,
                        const TailModel& model);

// Random-level curve: hat_T(s) = (1/k) #{Y_j > Y_{n-k:n}(1+s)}, centered at
// the limit tail: e^*(s) = hat_T(s) - (1+s)^{-alpha}.
TepCurve random_level_tep(const Sample& sample, long k, const TailGrid& grid, double alpha);

// Hill estimator: (1/k) sum_{i=1..k} log(Y_{n-i+1:n} / Y_{n-k:n}).
double hill(const Sample& sample, long k);

// xi_n = (Y_{n-k:n} - u_n) / u_n.
double intermediate_quantile_stat(const Sample& sample, long k, double u_n);

// R_n(s) = (n fbar)^{-1} sum_j [ 1{Y_j > (1+s)u_n} - P(Y_j > (1+s)u_n | X_j) ],
// S_n(s) = (n fbar)^{-1} sum_j [ P(Y_j > (1+s)u_n | X_j) - survival_y((1+s)u_n) ],
// with P(Y_j > t | X_j) = F_Z(t / sigma(X_j)).  With fbar_un = survival_y(u_n)
// the identity r_n + s_n = e_n holds pointwise at machine precision.
Decomposition decompose(const Sample& sample, double u_n, double fbar_un, const TailGrid& grid,
                        const TailModel& model);

}  // namespace lmsv
