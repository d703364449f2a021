#pragma once

// Classification of (n, k, H, q) into the i.i.d. vs LRD zone, scaling factors
// w_n, tail-empirical covariance predictions, and zone-feasibility conditions
// under second-order constraints.

#include <optional>
#include <string>
#include <utility>

#include "lmsv/gauss_lrd.hpp"
#include "lmsv/quadrature.hpp"
#include "lmsv/tails.hpp"

namespace lmsv {

enum class Zone { iid, lrd, borderline };

struct ZoneThresholds {
  double low = 0.1;
  double high = 10.0;
};

struct RegimeReport {
  double product = 0.0;  // k * rho_n^q
  Zone zone = Zone::iid;
  double w_n = 0.0;      // sqrt(k) in the iid zone, rho_n^{-q/2} in the lrd zone
  double rho_n = 0.0;
  int q = 1;
  bool borderline_flag = false;  // q(1-H) = 1/2 within 1e-9
  std::optional<std::string> sigma0_note;
  ZoneThresholds thresholds;

  std::string to_key_value() const;
  std::string to_csv_row() const;  // header: product,zone,w_n,rho_n,q,borderline
};

const char* zone_name(Zone z);

RegimeReport classify(long n, long k, const LrdSpec& lrd, int q,
                      const ZoneThresholds& thresholds = {});

enum class CovMode {
  // Exact finite-n prediction: binomial same-index term plus the lag sum of
  // Rozanov cross-covariances of the conditional exceedance probabilities
  // (coefficients J_n(m, s) over exact autocovariances).
  exact_lag_sum,
  // Collapsed asymptotic form
  //   T(s v t)/(n fbar) + T(s)T(t) J(q)^2 rho_n^q /
  //     (q! (1 - q(1-H)) (1 - 2q(1-H)) E^2[sigma^alpha])
  asymptotic,
};

struct CovPrediction {
  double value = 0.0;
  bool second_term_included = true;
  std::string note;
};

CovPrediction covariance_prediction(double s, double t, long n, double u_n,
                                    const TailModel& model, const LrdSpec& lrd,
                                    CovMode mode = CovMode::exact_lag_sum);

struct Feasibility {
  bool lrd_zone_possible = false;
  // Exponent window (psi_low, psi_high) for k ~ n^psi when possible.
  std::optional<std::pair<double, double>> k_window;
};

// LRD zone with a valid second-order condition requires H > (1+beta)/(2beta+1);
// the window is n^{2(1-H)} << k << n^{1-(1-H)/beta}.  beta = 0 (slowly varying
// rate) is never feasible.
Feasibility feasibility(double beta, double hurst);

// max(2(1-H), 2beta/(2beta+1)): k ~ n^gamma below this exponent keeps the
// sqrt(k) central limit theorem.
double iid_zone_exponent_bound(double beta, double hurst);

}  // namespace lmsv
