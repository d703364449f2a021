#pragma once

// Exact simulation of stationary unit-variance Gaussian sequences whose
// autocovariance decays like k^{2H-2} (fractional Gaussian noise, or
// ARFIMA(0,d,0) normalized to unit variance), plus autocovariance evaluation.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lmsv/rng.hpp"

namespace lmsv {

enum class LrdGenerator { fgn, arfima, iid };

struct LrdSpec {
  double hurst = 0.5;                 // H in (0,1); long memory needs H > 1/2
  LrdGenerator generator = LrdGenerator::fgn;
  // Constant slowly-varying factor used by autocov_asymptotic.  Unset means
  // "the constant the chosen family induces": H(2H-1) for fGn,
  // Gamma(1-d)/Gamma(d) for ARFIMA.  Simulation always uses the exact family
  // law and ignores this field.
  std::optional<double> ell0;

  double memory_d() const { return hurst - 0.5; }

  static LrdSpec fgn(double hurst);
  static LrdSpec arfima(double d);
  static LrdSpec iid();
};

struct GaussianPath {
  std::vector<double> values;
  std::uint64_t seed = 0;
  LrdSpec spec;
};

// Exact autocovariance gamma(lag) of the family; gamma(0) = 1.
double autocov(const LrdSpec& spec, long lag);

// ell0(k) * k^{2H-2} with the module's ell0 convention; requires H > 1/2.
double autocov_asymptotic(const LrdSpec& spec, long lag);

// Reusable sampler: precomputes the circulant-embedding spectrum (n >= 512)
// or the Durbin-Levinson innovation coefficients (n < 512).  One instance
// per thread; sampling from distinct instances is safe concurrently.
class FgnSampler {
 public:
  FgnSampler(const LrdSpec& spec, std::size_t n);
  ~FgnSampler();
  FgnSampler(const FgnSampler&) = delete;
  FgnSampler& operator=(const FgnSampler&) = delete;

  std::size_t size() const { return n_; }
  const LrdSpec& spec() const { return spec_; }
  std::vector<double> sample(RngStream& stream) const;

 private:
  struct Impl;
  LrdSpec spec_;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrapper: one path from stream (seed, stream_id = 0).
GaussianPath simulate(const LrdSpec& spec, std::size_t n, std::uint64_t seed);
GaussianPath simulate(const LrdSpec& spec, std::size_t n, RngStream& stream);

}  // namespace lmsv
