#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lmsv/regimes.hpp"

using namespace lmsv;

TEST_CASE("classify: plug-in examples") {
  // n = 10^4, k = 100, H = 0.9, q = 1: product = 100 * 0.72 * 10^{-0.8}
  const RegimeReport lrd = classify(10000, 100, LrdSpec::fgn(0.9), 1);
  CHECK(lrd.product == doctest::Approx(100.0 * 0.72 * std::pow(10.0, -0.8)).epsilon(1e-12));
  CHECK(lrd.product == doctest::Approx(11.41).epsilon(1e-3));
  CHECK(lrd.zone == Zone::lrd);
  CHECK(lrd.w_n == doctest::Approx(std::pow(lrd.rho_n, -0.5)).epsilon(1e-12));

  // H = 0.75, q = 1, n = 10^6, k = 10: product ~ 3.75e-3 -> iid
  const RegimeReport iid = classify(1000000, 10, LrdSpec::fgn(0.75), 1);
  CHECK(iid.product == doctest::Approx(10.0 * 0.375 * 1e-3).epsilon(1e-12));
  CHECK(iid.zone == Zone::iid);
  CHECK(iid.w_n == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("classify: short-memory subordination is always the iid zone") {
  // q(1-H) = 2 * 0.45 = 0.9 > 1/2
  for (long k : {10L, 1000L, 9999L}) {
    const RegimeReport r = classify(10000, k, LrdSpec::fgn(0.55), 2);
    CHECK(r.zone == Zone::iid);
    CHECK(r.sigma0_note.has_value());
  }
}

TEST_CASE("classify: weakly dependent input stays iid and never errors") {
  const RegimeReport r = classify(1000, 100, LrdSpec::iid(), 1);
  CHECK(r.zone == Zone::iid);
  CHECK(r.w_n == doctest::Approx(10.0));
  const RegimeReport anti = classify(1000, 100, LrdSpec::fgn(0.3), 1);
  CHECK(anti.zone == Zone::iid);
}

TEST_CASE("classify: borderline flag and thresholds") {
  // q = 2, H = 0.75: q(1-H) = 1/2 exactly
  const RegimeReport b = classify(4096, 64, LrdSpec::fgn(0.75), 2);
  CHECK(b.borderline_flag);
  CHECK(b.sigma0_note.has_value());
  // product between thresholds labels the borderline zone
  // H = 0.9, n = 10^4: rho = 0.1141; pick k with 0.1 < k rho < 10
  const RegimeReport mid = classify(10000, 10, LrdSpec::fgn(0.9), 1);
  CHECK(mid.product > 0.1);
  CHECK(mid.product < 10.0);
  CHECK(mid.zone == Zone::borderline);
  // custom thresholds move the label
  const RegimeReport custom = classify(10000, 10, LrdSpec::fgn(0.9), 1, {0.01, 0.5});
  CHECK(custom.zone == Zone::lrd);
}

TEST_CASE("classify: zone monotone in k, product vanishing along n") {
  const LrdSpec lrd = LrdSpec::fgn(0.9);
  double prev = -1.0;
  bool seen_lrd_before_iid = false;
  for (long k : {1L, 10L, 100L, 1000L, 9999L}) {
    const RegimeReport r = classify(10000, k, lrd, 1);
    CHECK(r.product > prev);
    prev = r.product;
    if (r.zone == Zone::lrd) seen_lrd_before_iid = true;
    if (seen_lrd_before_iid) CHECK(r.zone != Zone::iid);
  }
  // fixed k-rule k = n^{0.3}: product -> 0, so large n classifies iid
  for (long n : {1L << 10, 1L << 14, 1L << 20}) {
    const long k = static_cast<long>(std::pow(static_cast<double>(n), 0.3));
    const RegimeReport r = classify(n, k, LrdSpec::fgn(0.75), 1);
    if (n >= (1L << 14)) CHECK(r.zone == Zone::iid);
  }
}

TEST_CASE("report serialization") {
  const RegimeReport r = classify(10000, 100, LrdSpec::fgn(0.9), 1);
  const std::string kv = r.to_key_value();
  CHECK(kv.find("zone = lrd") != std::string::npos);
  CHECK(kv.find("product = ") != std::string::npos);
  const std::string csv = r.to_csv_row();
  CHECK(csv.find(",lrd,") != std::string::npos);
}

TEST_CASE("feasibility boundary H > (1+beta)/(2 beta + 1)") {
  CHECK_FALSE(feasibility(1.0, 2.0 / 3.0 - 1e-9).lrd_zone_possible);
  CHECK(feasibility(1.0, 2.0 / 3.0 + 1e-9).lrd_zone_possible);
  // beta = 0.25 -> threshold 5/6
  CHECK_FALSE(feasibility(0.25, 5.0 / 6.0 - 1e-9).lrd_zone_possible);
  CHECK(feasibility(0.25, 5.0 / 6.0 + 1e-9).lrd_zone_possible);
  // beta -> infinity: threshold tends to 1/2
  CHECK(feasibility(1e9, 0.5001).lrd_zone_possible);
  // beta = 0: the LRD zone never arises
  CHECK_FALSE(feasibility(0.0, 0.99).lrd_zone_possible);
  const Feasibility f = feasibility(1.0, 0.9);
  REQUIRE(f.k_window.has_value());
  CHECK(f.k_window->first == doctest::Approx(0.2));
  CHECK(f.k_window->second == doctest::Approx(0.9));
  CHECK(f.k_window->first < f.k_window->second);
}

TEST_CASE("iid-zone exponent bound") {
  CHECK(iid_zone_exponent_bound(1.0, 0.9) == doctest::Approx(2.0 / 3.0));
  CHECK(iid_zone_exponent_bound(1e9, 0.75) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(iid_zone_exponent_bound(0.5, 0.6) == doctest::Approx(0.8));
}

TEST_CASE("covariance prediction: constant volatility keeps the binomial term only") {
  const TailModel pure(VolatilitySpec::exp_scaled(0.0), NoiseSpec::pareto(2.0));
  const long n = 10000;
  const double u_n = pure.quantile_u(100.0);  // fbar = 1e-2
  const CovPrediction p = covariance_prediction(0.0, 0.0, n, u_n, pure, LrdSpec::iid());
  CHECK_FALSE(p.second_term_included);
  // exact binomial variance: fbar (1 - fbar) / (n fbar^2)
  const double fbar = pure.survival_y(u_n);
  CHECK(p.value == doctest::Approx((1.0 - fbar) / (static_cast<double>(n) * fbar)).epsilon(1e-9));
  // s = 0, t large: the prediction vanishes with T(t)
  const CovPrediction far = covariance_prediction(0.0, 1000.0, n, u_n, pure, LrdSpec::iid());
  CHECK(far.value < 1e-6 * p.value);
}

TEST_CASE("covariance prediction: diagonal dominates and modes agree asymptotically") {
  const TailModel m(VolatilitySpec::exp_scaled(1.0), NoiseSpec::pareto(1.0));
  const LrdSpec lrd = LrdSpec::fgn(0.9);
  const long n = 1 << 20;
  const double u_n = m.quantile_u(static_cast<double>(n) / 1024.0);
  const double c00 =
      covariance_prediction(0.0, 0.0, n, u_n, m, lrd, CovMode::exact_lag_sum).value;
  const double c01 =
      covariance_prediction(0.0, 1.0, n, u_n, m, lrd, CovMode::exact_lag_sum).value;
  CHECK(c00 >= c01);
  const double asym =
      covariance_prediction(0.5, 0.5, n, u_n, m, lrd, CovMode::asymptotic).value;
  const double exact =
      covariance_prediction(0.5, 0.5, n, u_n, m, lrd, CovMode::exact_lag_sum).value;
  INFO("asymptotic ", asym, " exact ", exact);
  CHECK(asym / exact == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("covariance prediction: short-memory guard") {
  const TailModel m(VolatilitySpec::exp_scaled(1.0), NoiseSpec::pareto(1.0));
  const CovPrediction p =
      covariance_prediction(0.0, 0.0, 4096, m.quantile_u(64.0), m, LrdSpec::fgn(0.3),
                            CovMode::asymptotic);
  CHECK_FALSE(p.second_term_included);
  CHECK(!p.note.empty());
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(classify(100, 100, LrdSpec::fgn(0.9), 1), std::invalid_argument);
  CHECK_THROWS_AS(classify(100, 0, LrdSpec::fgn(0.9), 1), std::invalid_argument);
  CHECK_THROWS_AS(classify(100, 10, LrdSpec::fgn(0.9), 0), std::invalid_argument);
  CHECK_THROWS_AS(feasibility(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(feasibility(-1.0, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(iid_zone_exponent_bound(0.0, 0.8), std::invalid_argument);
}
