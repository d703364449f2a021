#include "lmsv/regimes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lmsv/hermite.hpp"

namespace lmsv {

const char* zone_name(Zone z) {
  switch (z) {
    case Zone::iid:
      return "iid";
    case Zone::lrd:
      return "lrd";
    case Zone::borderline:
      return "borderline";
  }
  return "?";
}

std::string RegimeReport::to_key_value() const {
  std::ostringstream os;
  os.precision(12);
  os << "product = " << product << "\n"
     << "zone = " << zone_name(zone) << "\n"
     << "w_n = " << w_n << "\n"
     << "rho_n = " << rho_n << "\n"
     << "q = " << q << "\n"
     << "borderline_q1mh = " << (borderline_flag ? "true" : "false") << "\n";
  if (sigma0_note) os << "sigma0_note = " << *sigma0_note << "\n";
  return os.str();
}

std::string RegimeReport::to_csv_row() const {
  std::ostringstream os;
  os.precision(12);
  os << product << ',' << zone_name(zone) << ',' << w_n << ',' << rho_n << ',' << q << ','
     << (borderline_flag ? 1 : 0);
  return os.str();
}

RegimeReport classify(long n, long k, const LrdSpec& lrd, int q,
                      const ZoneThresholds& thresholds) {
  if (!(k >= 1 && k < n)) throw std::invalid_argument("classify: need 1 <= k < n");
  if (q < 1) throw std::invalid_argument("classify: q must be >= 1");
  RegimeReport r;
  r.q = q;
  r.thresholds = thresholds;
  const double h = lrd.hurst;
  const double q1mh = static_cast<double>(q) * (1.0 - h);
  r.borderline_flag = std::abs(q1mh - 0.5) < 1e-9;
  if (h <= 0.5) {
    // weak dependence: always the iid zone, no power-law rho_n
    r.rho_n = 0.0;
    r.product = 0.0;
    r.zone = Zone::iid;
    r.w_n = std::sqrt(static_cast<double>(k));
    r.sigma0_note = "weakly dependent Gaussian input: sqrt(k) scaling holds unconditionally";
    return r;
  }
  r.rho_n = autocov_asymptotic(lrd, n);
  r.product = static_cast<double>(k) * std::pow(r.rho_n, q);
  if (q1mh > 0.5) {
    // subordinated sums are short-memory: the iid-zone limit applies for any
    // intermediate k; partial sums of G(X) are N(0, Sigma_0^2) at rate sqrt(n)
    r.zone = Zone::iid;
    r.w_n = std::sqrt(static_cast<double>(k));
    r.sigma0_note =
        "q(1-H) > 1/2: subordinated sums short-memory, N(0, Sigma_0^2) regime";
    return r;
  }
  if (r.product < thresholds.low)
    r.zone = Zone::iid;
  else if (r.product > thresholds.high)
    r.zone = Zone::lrd;
  else
    r.zone = Zone::borderline;
  r.w_n = (r.zone == Zone::lrd) ? std::pow(r.rho_n, -0.5 * static_cast<double>(q))
                                : std::sqrt(static_cast<double>(k));
  if (r.borderline_flag)
    r.sigma0_note =
        "q(1-H) = 1/2 borderline: sqrt(n F(u_n)) scaling needs an extra slowly "
        "varying condition; no limit-law claim attached";
  return r;
}

CovPrediction covariance_prediction(double s, double t, long n, double u_n,
                                    const TailModel& model, const LrdSpec& lrd, CovMode mode) {
  if (s < 0 || t < 0 || n < 1 || !(u_n > 0))
    throw std::invalid_argument("covariance_prediction: bad arguments");
  CovPrediction out;
  const double alpha = model.alpha();
  const double fbar = model.survival_y(u_n);
  const double nn = static_cast<double>(n);
  const double tau =
      model.vol().family == VolatilitySpec::Family::exp_scaled ? model.vol().tau : -1.0;
  const bool constant_sigma = (tau == 0.0);

  if (mode == CovMode::exact_lag_sum) {
    // exact same-index term: [F(u(1+s v t)) - F(u(1+s))F(u(1+t))] / (n fbar^2)
    const double f_s = model.survival_y(u_n * (1.0 + s));
    const double f_t = model.survival_y(u_n * (1.0 + t));
    const double f_max = model.survival_y(u_n * (1.0 + std::max(s, t)));
    out.value = (f_max - f_s * f_t) / (nn * fbar * fbar);
    if (constant_sigma) {
      out.second_term_included = false;
      out.note = "sigma constant: conditional exceedance probabilities are deterministic";
      return out;
    }
    // cross-lag term: (2/(n^2 fbar^2)) sum_j (n-j) cov(h_s(X_0), h_t(X_j)),
    // cov by the Rozanov cross series over the J_n coefficients
    const int max_order = 12;
    const double fz = survival_z(model.noise(), u_n);
    const HermiteExpansion es = expand_gn(model.vol(), model.noise(), u_n, s, max_order);
    const HermiteExpansion et = expand_gn(model.vol(), model.noise(), u_n, t, max_order);
    std::vector<double> cross(static_cast<std::size_t>(max_order) + 1, 0.0);
    double fact = 1.0;
    for (int m = 1; m <= max_order; ++m) {
      fact *= m;
      cross[static_cast<std::size_t>(m)] = es.coeff(m) * et.coeff(m) / fact;
    }
    double lag_sum = 0.0;
    for (long j = 1; j < n; ++j) {
      const double rho = autocov(lrd, j);
      double rho_pow = 1.0;
      double cov_j = 0.0;
      for (int m = 1; m <= max_order; ++m) {
        rho_pow *= rho;
        cov_j += cross[static_cast<std::size_t>(m)] * rho_pow;
      }
      lag_sum += static_cast<double>(n - j) * cov_j;
    }
    out.value += 2.0 * lag_sum * fz * fz / (nn * nn * fbar * fbar);
    return out;
  }

  // asymptotic mode
  const double t_max = limit_tail(alpha, std::max(s, t));
  out.value = t_max / (nn * fbar);
  if (constant_sigma) {
    out.second_term_included = false;
    out.note = "sigma constant: no subordinated term";
    return out;
  }
  const HermiteExpansion eg = expand(
      [&](double x) { return std::pow(model.vol().sigma(x), alpha); }, 12);
  const int q = rank_of(eg);
  const double q1mh = static_cast<double>(q) * (1.0 - lrd.hurst);
  if (!(q1mh < 0.5) || lrd.hurst <= 0.5) {
    out.second_term_included = false;
    out.note = "short-memory/borderline regime: subordinated term omitted";
    return out;
  }
  const double rho_n = autocov_asymptotic(lrd, n);
  double q_fact = 1.0;
  for (int j = 2; j <= q; ++j) q_fact *= j;
  const double breiman = model.breiman_constant();
  out.value += limit_tail(alpha, s) * limit_tail(alpha, t) * eg.coeff(q) * eg.coeff(q) *
               std::pow(rho_n, q) /
               (q_fact * (1.0 - q1mh) * (1.0 - 2.0 * q1mh) * breiman * breiman);
  return out;
}

Feasibility feasibility(double beta, double hurst) {
  if (!(hurst > 0.5 && hurst < 1.0))
    throw std::invalid_argument("feasibility: hurst must lie in (1/2, 1)");
  if (beta < 0) throw std::invalid_argument("feasibility: beta must be >= 0");
  Feasibility f;
  if (beta == 0.0) return f;  // the LRD zone never arises for slowly varying rates
  f.lrd_zone_possible = hurst > (1.0 + beta) / (2.0 * beta + 1.0);
  if (f.lrd_zone_possible)
    f.k_window = std::make_pair(2.0 * (1.0 - hurst), 1.0 - (1.0 - hurst) / beta);
  return f;
}

double iid_zone_exponent_bound(double beta, double hurst) {
  if (!(hurst > 0.5 && hurst < 1.0))
    throw std::invalid_argument("iid_zone_exponent_bound: hurst must lie in (1/2, 1)");
  if (!(beta > 0)) throw std::invalid_argument("iid_zone_exponent_bound: beta must be > 0");
  return std::max(2.0 * (1.0 - hurst), 2.0 * beta / (2.0 * beta + 1.0));
}

}  // namespace lmsv
