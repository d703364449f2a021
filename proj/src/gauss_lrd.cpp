#include "lmsv/gauss_lrd.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "lmsv/quadrature.hpp"

namespace lmsv {

namespace {

// FFTW plan creation/destruction is not thread-safe; executions on distinct
// plans are.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void validate(const LrdSpec& spec) {
  if (!(spec.hurst > 0.0 && spec.hurst < 1.0))
    throw std::invalid_argument("LrdSpec: hurst must lie in (0,1)");
  if (spec.generator == LrdGenerator::iid && spec.hurst != 0.5)
    throw std::invalid_argument("LrdSpec: iid generator requires hurst = 1/2");
}

// Generalized binomial coefficient C(2H, k).
double binom_2h(double two_h, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= (two_h - j) / (j + 1);
  return r;
}

// fGn: gamma(k) = ((k+1)^{2H} - 2 k^{2H} + (k-1)^{2H}) / 2.  The direct form
// cancels catastrophically at large k; switch to the even binomial series
// gamma(k) = k^{2H} sum_{j>=1} C(2H,2j) k^{-2j} once k is large.
double fgn_autocov(double hurst, long lag) {
  if (lag == 0) return 1.0;
  const double two_h = 2.0 * hurst;
  const double k = static_cast<double>(lag);
  if (lag < 512) {
    return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) +
                  std::pow(std::abs(k - 1.0), two_h));
  }
  double s = 0.0;
  double kpow = std::pow(k, two_h - 2.0);  // k^{2H} * k^{-2}
  for (int j = 1; j <= 4; ++j) {
    s += binom_2h(two_h, 2 * j) * kpow;
    kpow /= k * k;
  }
  return s;
}

// ARFIMA(0,d,0) normalized to unit variance:
// r(k) = Gamma(k+d)Gamma(1-d) / (Gamma(k+1-d)Gamma(d)), r(0) = 1.
double arfima_autocov(double d, long lag) {
  if (lag == 0) return 1.0;
  const double lg = std::lgamma(static_cast<double>(lag) + d) + std::lgamma(1.0 - d) -
                    std::lgamma(static_cast<double>(lag) + 1.0 - d) - std::lgamma(d);
  return std::exp(lg);
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

LrdSpec LrdSpec::fgn(double hurst) {
  LrdSpec s;
  s.hurst = hurst;
  s.generator = LrdGenerator::fgn;
  validate(s);
  return s;
}

LrdSpec LrdSpec::arfima(double d) {
  LrdSpec s;
  s.hurst = d + 0.5;
  s.generator = LrdGenerator::arfima;
  validate(s);
  return s;
}

LrdSpec LrdSpec::iid() {
  LrdSpec s;
  s.hurst = 0.5;
  s.generator = LrdGenerator::iid;
  return s;
}

double autocov(const LrdSpec& spec, long lag) {
  validate(spec);
  if (lag < 0) throw std::invalid_argument("autocov: lag must be >= 0");
  switch (spec.generator) {
    case LrdGenerator::iid:
      return lag == 0 ? 1.0 : 0.0;
    case LrdGenerator::fgn:
      return fgn_autocov(spec.hurst, lag);
    case LrdGenerator::arfima:
      if (spec.hurst == 0.5) return lag == 0 ? 1.0 : 0.0;  // d = 0
      return arfima_autocov(spec.memory_d(), lag);
  }
  throw std::logic_error("autocov: unknown generator");
}

double autocov_asymptotic(const LrdSpec& spec, long lag) {
  validate(spec);
  if (lag < 1) throw std::invalid_argument("autocov_asymptotic: lag must be >= 1");
  if (!(spec.hurst > 0.5))
    throw std::invalid_argument("autocov_asymptotic: requires H > 1/2");
  double c;
  if (spec.ell0) {
    c = *spec.ell0;
  } else if (spec.generator == LrdGenerator::arfima) {
    const double d = spec.memory_d();
    c = std::exp(std::lgamma(1.0 - d) - std::lgamma(d));
  } else {
    c = spec.hurst * (2.0 * spec.hurst - 1.0);
  }
  return c * std::pow(static_cast<double>(lag), 2.0 * spec.hurst - 2.0);
}

// --------------------------------------------------------------------------

struct FgnSampler::Impl {
  enum class Mode { iid, embed, durbin_levinson } mode = Mode::iid;

  // circulant embedding: per-frequency scale sqrt(lambda_k / g) and a plan
  std::size_t embed = 0;  // g = 2m
  std::vector<double> sqrt_lambda;
  fftw_complex* buf = nullptr;
  fftw_plan plan = nullptr;

  // Durbin-Levinson: cached autocovariances gamma(0..n-1)
  std::vector<double> gamma;

  ~Impl() {
    if (plan || buf) {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      if (plan) fftw_destroy_plan(plan);
      if (buf) fftw_free(buf);
    }
  }
};

FgnSampler::FgnSampler(const LrdSpec& spec, std::size_t n)
    : spec_(spec), n_(n), impl_(std::make_unique<Impl>()) {
  validate(spec);
  if (n == 0) throw std::invalid_argument("FgnSampler: n must be >= 1");
  if (spec.generator == LrdGenerator::iid || spec.hurst == 0.5) {
    impl_->mode = Impl::Mode::iid;
    return;
  }
  if (n >= 512) {
    // Circulant embedding of size g = 2m, m = next power of two >= n: first
    // row (gamma(0), ..., gamma(m), gamma(m-1), ..., gamma(1)); its DFT is
    // the (real) eigenvalue sequence.
    const std::size_t m = next_pow2(n);
    const std::size_t g = 2 * m;
    std::vector<double> lambda(g);
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      impl_->buf = fftw_alloc_complex(g);
      impl_->plan = fftw_plan_dft_1d(static_cast<int>(g), impl_->buf, impl_->buf, FFTW_FORWARD,
                                     FFTW_ESTIMATE);
    }
    for (std::size_t j = 0; j <= m; ++j) {
      impl_->buf[j][0] = autocov(spec, static_cast<long>(j));
      impl_->buf[j][1] = 0.0;
    }
    for (std::size_t j = m + 1; j < g; ++j) {
      impl_->buf[j][0] = impl_->buf[g - j][0];
      impl_->buf[j][1] = 0.0;
    }
    fftw_execute(impl_->plan);
    for (std::size_t j = 0; j < g; ++j) lambda[j] = impl_->buf[j][0];
    double max_l = 0.0, min_l = 0.0;
    for (double l : lambda) {
      max_l = std::max(max_l, l);
      min_l = std::min(min_l, l);
    }
    if (min_l >= -1e-9 * max_l) {
      impl_->mode = Impl::Mode::embed;
      impl_->embed = g;
      impl_->sqrt_lambda.resize(g);
      for (std::size_t j = 0; j < g; ++j)
        impl_->sqrt_lambda[j] = std::sqrt(std::max(0.0, lambda[j]) / static_cast<double>(g));
      return;
    }
    // Not nonnegative definite: fall back to Durbin-Levinson if affordable.
    if (n > 8192)
      throw quad::NumericError(
          "simulate: circulant embedding not nonnegative definite (min eigenvalue " +
          std::to_string(min_l) + ") and n too large for dense factorization");
  }
  impl_->mode = Impl::Mode::durbin_levinson;
  impl_->gamma.resize(n);
  for (std::size_t j = 0; j < n; ++j) impl_->gamma[j] = autocov(spec, static_cast<long>(j));
}

FgnSampler::~FgnSampler() = default;

std::vector<double> FgnSampler::sample(RngStream& stream) const {
  std::vector<double> x(n_);
  switch (impl_->mode) {
    case Impl::Mode::iid: {
      for (std::size_t i = 0; i < n_; ++i) x[i] = stream.normal();
      return x;
    }
    case Impl::Mode::embed: {
      const std::size_t g = impl_->embed;
      const std::size_t half = g / 2;
      fftw_complex* w = impl_->buf;
      // Hermitian-symmetric spectral noise; draw order is fixed:
      // W_0, W_{g/2}, then (A_k, B_k) for k = 1 .. g/2 - 1.
      w[0][0] = impl_->sqrt_lambda[0] * stream.normal();
      w[0][1] = 0.0;
      w[half][0] = impl_->sqrt_lambda[half] * stream.normal();
      w[half][1] = 0.0;
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      for (std::size_t k = 1; k < half; ++k) {
        const double a = stream.normal();
        const double b = stream.normal();
        const double s = impl_->sqrt_lambda[k] * inv_sqrt2;
        w[k][0] = s * a;
        w[k][1] = s * b;
        w[g - k][0] = s * a;
        w[g - k][1] = -s * b;
      }
      fftw_execute(impl_->plan);
      for (std::size_t i = 0; i < n_; ++i) x[i] = w[i][0];
      return x;
    }
    case Impl::Mode::durbin_levinson: {
      // Conditional sampling with on-the-fly partial autocorrelations.
      const std::vector<double>& gam = impl_->gamma;
      std::vector<double> phi_prev, phi_cur;
      double v = gam[0];
      x[0] = std::sqrt(v) * stream.normal();
      for (std::size_t t = 1; t < n_; ++t) {
        double acc = gam[t];
        for (std::size_t j = 1; j < t; ++j) acc -= phi_prev[j - 1] * gam[t - j];
        const double refl = acc / v;
        phi_cur.assign(t, 0.0);
        phi_cur[t - 1] = refl;
        for (std::size_t j = 1; j < t; ++j)
          phi_cur[j - 1] = phi_prev[j - 1] - refl * phi_prev[t - 1 - j];
        v *= (1.0 - refl * refl);
        if (!(v > 0.0))
          throw quad::NumericError(
              "simulate: covariance matrix numerically not positive definite at step " +
              std::to_string(t));
        double m = 0.0;
        for (std::size_t j = 1; j <= t; ++j) m += phi_cur[j - 1] * x[t - j];
        x[t] = m + std::sqrt(v) * stream.normal();
        std::swap(phi_prev, phi_cur);
      }
      return x;
    }
  }
  throw std::logic_error("FgnSampler: unknown mode");
}

GaussianPath simulate(const LrdSpec& spec, std::size_t n, RngStream& stream) {
  FgnSampler sampler(spec, n);
  GaussianPath path;
  path.values = sampler.sample(stream);
  path.seed = stream.master_seed();
  path.spec = spec;
  return path;
}

GaussianPath simulate(const LrdSpec& spec, std::size_t n, std::uint64_t seed) {
  RngStream stream(seed, 0);
  return simulate(spec, n, stream);
}

}  // namespace lmsv
