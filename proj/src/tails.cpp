#include "lmsv/tails.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lmsv {

using quad::NumericError;

// ---------------------------------------------------------------------------

NoiseSpec NoiseSpec::pareto(double alpha, double c) {
  if (!(alpha > 0) || !(c > 0)) throw std::invalid_argument("pareto: need alpha > 0, c > 0");
  NoiseSpec n;
  n.family = Family::pareto;
  n.alpha = alpha;
  n.c = c;
  n.support_lower = std::pow(c, 1.0 / alpha);
  return n;
}

NoiseSpec NoiseSpec::pareto_second_order(double alpha, double beta, double c) {
  if (!(alpha > 0) || !(beta > 0) || !(c > 0))
    throw std::invalid_argument("pareto_second_order: need alpha, beta, c > 0");
  NoiseSpec n;
  n.family = Family::pareto_second_order;
  n.alpha = alpha;
  n.beta = beta;
  n.c = c;
  n.support_lower = std::pow(c, 1.0 / alpha);
  return n;
}

NoiseSpec NoiseSpec::log_perturbed(double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("log_perturbed: need alpha > 0");
  NoiseSpec n;
  n.family = Family::log_perturbed;
  n.alpha = alpha;
  n.c = 1.0;
  n.support_lower = std::exp(std::max(1.0, 1.0 / alpha));
  return n;
}

SmoothTail smooth_tail(const NoiseSpec& noise) {
  SmoothTail st;
  const double a = noise.alpha;
  const double s0 = noise.support_lower;
  switch (noise.family) {
    case NoiseSpec::Family::pareto:
      st.power_terms.push_back({noise.c, a});
      return st;
    case NoiseSpec::Family::pareto_second_order: {
      const double norm = 1.0 + std::pow(s0, -a * noise.beta);
      st.power_terms.push_back({noise.c / norm, a});
      st.power_terms.push_back({noise.c / norm, a * (1.0 + noise.beta)});
      return st;
    }
    case NoiseSpec::Family::log_perturbed: {
      st.has_log = true;
      st.log_coef = std::pow(s0, a) / std::log(s0);
      st.log_expo = a;
      return st;
    }
  }
  throw std::logic_error("smooth_tail: unknown family");
}

namespace {

double smooth_survival(const SmoothTail& st, double z) {
  double s = 0.0;
  for (const auto& t : st.power_terms) s += t.coef * std::pow(z, -t.expo);
  if (st.has_log) s += st.log_coef * std::pow(z, -st.log_expo) * std::log(z);
  return s;
}

}  // namespace

double survival_z(const NoiseSpec& noise, double z) {
  if (z <= noise.support_lower) return 1.0;
  return smooth_survival(smooth_tail(noise), z);
}

double quantile_z(const NoiseSpec& noise, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("quantile_z: p must be in (0,1]");
  if (p == 1.0) return noise.support_lower;
  if (noise.family == NoiseSpec::Family::pareto)
    return std::pow(noise.c / p, 1.0 / noise.alpha);
  // monotone root finding on the smooth tail
  double lo = noise.support_lower;
  double hi = std::max(2.0 * lo, 2.0);
  int guard = 0;
  while (survival_z(noise, hi) > p) {
    hi *= 2.0;
    if (++guard > 1100) throw NumericError("quantile_z: failed to bracket the quantile");
  }
  return quad::find_root([&](double z) { return survival_z(noise, z) - p; }, lo, hi, 1e-14);
}

std::vector<double> sample_z(const NoiseSpec& noise, std::size_t n, RngStream& stream) {
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = quantile_z(noise, stream.uniform01());
  return z;
}

double limit_tail(double alpha, double s) {
  if (!(alpha > 0) || s < 0) throw std::invalid_argument("limit_tail: alpha > 0, s >= 0");
  return std::pow(1.0 + s, -alpha);
}

// ---------------------------------------------------------------------------

VolatilitySpec VolatilitySpec::exp_scaled(double tau) {
  if (tau < 0) throw std::invalid_argument("exp_scaled: tau must be >= 0");
  VolatilitySpec v;
  v.family = Family::exp_scaled;
  v.tau = tau;
  return v;
}

VolatilitySpec VolatilitySpec::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("tabulated: need at least 2 points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i].first < points[i + 1].first))
      throw std::invalid_argument("tabulated: x values must be strictly increasing");
  for (const auto& p : points)
    if (p.second < 0) throw std::invalid_argument("tabulated: sigma must be >= 0");
  VolatilitySpec v;
  v.family = Family::tabulated;
  v.table = std::move(points);
  return v;
}

double VolatilitySpec::sigma(double x) const {
  if (family == Family::exp_scaled) return std::exp(tau * x);
  // endpoint clamping outside the table
  if (x <= table.front().first) return table.front().second;
  if (x >= table.back().first) return table.back().second;
  auto it = std::upper_bound(table.begin(), table.end(), x,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (x - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

// ---------------------------------------------------------------------------

RateFunction RateFunction::power(double alpha_beta, double constant) {
  if (alpha_beta < 0 || !(constant > 0))
    throw std::invalid_argument("RateFunction::power: alpha_beta >= 0, constant > 0");
  RateFunction r;
  r.form = Form::power;
  r.alpha_beta = alpha_beta;
  r.constant = constant;
  return r;
}

RateFunction RateFunction::inverse_log() {
  RateFunction r;
  r.form = Form::inverse_log;
  r.alpha_beta = 0.0;
  r.constant = 1.0;
  return r;
}

double eta_star(const RateFunction& rate, double t) {
  switch (rate.form) {
    case RateFunction::Form::power:
      if (t < 0) throw std::invalid_argument("eta_star: t must be >= 0");
      return rate.constant * std::min(1.0, std::pow(t, -rate.alpha_beta));
    case RateFunction::Form::inverse_log:
      if (t < std::exp(1.0))
        throw std::invalid_argument("eta_star: inverse_log requires t >= e");
      return 1.0 / std::log(t);
  }
  throw std::logic_error("eta_star: unknown form");
}

// ---------------------------------------------------------------------------

TailGrid TailGrid::linear(double s_max, std::size_t count) {
  if (!(s_max > 0) || count < 2) throw std::invalid_argument("TailGrid::linear: bad arguments");
  TailGrid g;
  g.layout = Layout::linear;
  g.s.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    g.s[i] = s_max * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

TailGrid TailGrid::log_spaced(double s_min, double s_max, std::size_t count) {
  if (!(0 < s_min && s_min < s_max) || count < 2)
    throw std::invalid_argument("TailGrid::log_spaced: bad arguments");
  TailGrid g;
  g.layout = Layout::log_spaced;
  g.s.resize(count);
  g.s[0] = 0.0;
  const double l0 = std::log(s_min), l1 = std::log(s_max);
  for (std::size_t i = 1; i < count; ++i)
    g.s[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i - 1) / static_cast<double>(count - 2));
  return g;
}

TailGrid TailGrid::from_points(std::vector<double> points) {
  if (points.empty() || points.front() != 0.0)
    throw std::invalid_argument("TailGrid: s_0 must be 0");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i] < points[i + 1]))
      throw std::invalid_argument("TailGrid: points must be strictly increasing");
  TailGrid g;
  g.layout = Layout::linear;
  g.s = std::move(points);
  return g;
}

TailGrid TailGrid::default_for_alpha(double alpha) {
  // T(s_max) = (1 + s_max)^{-alpha} strictly below 1e-6
  const double s_max = std::pow(10.0, 6.0 / alpha);
  return log_spaced(1e-4, s_max, 512);
}

// ---------------------------------------------------------------------------

TailModel::TailModel(VolatilitySpec vol, NoiseSpec noise, quad::QuadPolicy policy)
    : vol_(std::move(vol)), noise_(std::move(noise)), policy_(policy) {}

double TailModel::survival_y(double y) const {
  if (!(y > 0)) throw std::invalid_argument("survival_y: y must be > 0");
  if (vol_.family == VolatilitySpec::Family::exp_scaled) {
    const double tau = vol_.tau;
    if (tau == 0.0) return survival_z(noise_, y);
    // Exact split at the clamp F_Z = 1: x* = log(y/s0)/tau; above x* the
    // conditional survival is 1, below it the smooth tail integrates in
    // closed form against the Gaussian density.
    const double s0 = noise_.support_lower;
    const double xstar = std::log(y / s0) / tau;
    double v = quad::normal_sf(xstar);
    const SmoothTail st = smooth_tail(noise_);
    for (const auto& t : st.power_terms) {
      const double b = tau * t.expo;
      v += t.coef * std::pow(y, -t.expo) * std::exp(0.5 * b * b) *
           quad::normal_cdf(xstar - b);
    }
    if (st.has_log) {
      const double b = tau * st.log_expo;
      const double i0 = std::exp(0.5 * b * b) * quad::normal_cdf(xstar - b);
      const double i1 =
          std::exp(0.5 * b * b) * (b * quad::normal_cdf(xstar - b) - quad::normal_pdf(xstar - b));
      v += st.log_coef * std::pow(y, -st.log_expo) * (std::log(y) * i0 - tau * i1);
    }
    return v;
  }
  return survival_y_quad(y).value;
}

quad::QuadResult TailModel::survival_y_quad(double y) const {
  if (!(y > 0)) throw std::invalid_argument("survival_y: y must be > 0");
  quad::QuadPolicy p = policy_;
  // The integrand has a derivative kink where F_Z clamps to 1; do not demand
  // spectral convergence, report instead.
  p.require_convergence = false;
  return quad::expect_adaptive(
      [&](double x) {
        const double s = vol_.sigma(x);
        if (s <= 0.0) return 0.0;
        return survival_z(noise_, y / s);
      },
      p);
}

double TailModel::breiman_constant() const {
  const double a = noise_.alpha;
  if (vol_.family == VolatilitySpec::Family::exp_scaled && vol_.tau == 0.0) return 1.0;
  quad::QuadPolicy p = policy_;
  // piecewise-linear sigma has knots that cap the Gauss-Hermite rate; the
  // doubling control reports instead of throwing
  if (vol_.family == VolatilitySpec::Family::tabulated) p.require_convergence = false;
  const quad::QuadResult r =
      quad::expect_adaptive([&](double x) { return std::pow(vol_.sigma(x), a); }, p);
  return r.value;
}

double TailModel::quantile_u(double t) const {
  if (!(t >= 1.0)) throw std::invalid_argument("quantile_u: t must be >= 1");
  const double p = 1.0 / t;
  if (vol_.family == VolatilitySpec::Family::exp_scaled && vol_.tau == 0.0)
    return quantile_z(noise_, p);
  double lo = 1e-8;
  if (survival_y(lo) <= p) return lo;
  double hi = std::max(2.0 * noise_.support_lower, 2.0);
  int guard = 0;
  while (survival_y(hi) > p) {
    hi *= 2.0;
    if (++guard > 1000) throw NumericError("quantile_u: failed to bracket U(t)");
  }
  return quad::find_root([&](double y) { return survival_y(y) - p; }, lo, hi, 1e-13);
}

double TailModel::conditional_tail(double u_n, double s) const {
  if (!(u_n > 0) || s < 0)
    throw std::invalid_argument("conditional_tail: u_n > 0 and s >= 0 required");
  return survival_y(u_n * (1.0 + s)) / survival_y(u_n);
}

double TailModel::sup_norm_tn_minus_t(double u_n, const TailGrid& grid) const {
  const double denom = survival_y(u_n);
  double sup = 0.0;
  for (double s : grid.s) {
    const double tn = survival_y(u_n * (1.0 + s)) / denom;
    sup = std::max(sup, std::abs(tn - limit_tail(noise_.alpha, s)));
  }
  return sup;
}

// ---------------------------------------------------------------------------

double survival_y(const VolatilitySpec& vol, const NoiseSpec& noise, double y) {
  return TailModel(vol, noise).survival_y(y);
}

double breiman_constant(const VolatilitySpec& vol, double alpha) {
  return TailModel(vol, NoiseSpec::pareto(alpha)).breiman_constant();
}

double quantile_u(const VolatilitySpec& vol, const NoiseSpec& noise, double t) {
  return TailModel(vol, noise).quantile_u(t);
}

double conditional_tail_tn(const VolatilitySpec& vol, const NoiseSpec& noise, double u_n,
                           double s) {
  return TailModel(vol, noise).conditional_tail(u_n, s);
}

double sup_norm_tn_minus_t(const VolatilitySpec& vol, const NoiseSpec& noise, double u_n,
                           const TailGrid& grid) {
  return TailModel(vol, noise).sup_norm_tn_minus_t(u_n, grid);
}

}  // namespace lmsv
