#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "lmsv/gauss_lrd.hpp"
#include "lmsv/stats.hpp"

using namespace lmsv;

TEST_CASE("fGn autocovariance closed values") {
  CHECK(autocov(LrdSpec::fgn(0.75), 0) == 1.0);
  CHECK(autocov(LrdSpec::fgn(0.3), 0) == 1.0);
  CHECK(autocov(LrdSpec::fgn(0.5), 1) == doctest::Approx(0.0).epsilon(1e-14));
  // H = 0.75, lag 1: (2^{1.5} - 2)/2 = sqrt(2) - 1
  CHECK(autocov(LrdSpec::fgn(0.75), 1) ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(autocov(LrdSpec::iid(), 5) == 0.0);
  CHECK(autocov(LrdSpec::iid(), 0) == 1.0);
}

TEST_CASE("fGn large-lag series branch matches the direct formula") {
  // at the switch point the direct difference formula still carries ~1e-10
  // relative accuracy, so it serves as the oracle for the series branch
  for (double h : {0.55, 0.75, 0.9, 0.99}) {
    const double two_h = 2.0 * h;
    const LrdSpec spec = LrdSpec::fgn(h);
    for (long lag : {512L, 513L, 700L, 1024L}) {
      const double k = static_cast<double>(lag);
      const double direct =
          0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(k - 1.0, two_h));
      CHECK(autocov(spec, lag) == doctest::Approx(direct).epsilon(1e-8));
    }
  }
}

TEST_CASE("autocov_asymptotic values and domain") {
  CHECK(autocov_asymptotic(LrdSpec::fgn(0.75), 1) == doctest::Approx(0.375));
  CHECK(autocov_asymptotic(LrdSpec::fgn(0.9), 10) ==
        doctest::Approx(0.72 * std::pow(10.0, -0.2)).epsilon(1e-12));
  CHECK_THROWS_AS(autocov_asymptotic(LrdSpec::fgn(0.5), 1), std::invalid_argument);
  CHECK_THROWS_AS(autocov_asymptotic(LrdSpec::fgn(0.4), 1), std::invalid_argument);
  CHECK_THROWS_AS(autocov_asymptotic(LrdSpec::fgn(0.75), 0), std::invalid_argument);
  // user-supplied constant slowly varying factor is honored
  LrdSpec with_ell = LrdSpec::fgn(0.75);
  with_ell.ell0 = 2.0;
  CHECK(autocov_asymptotic(with_ell, 1) == doctest::Approx(2.0));
}

TEST_CASE("exact autocovariance approaches the asymptote") {
  for (double h : {0.6, 0.75, 0.9}) {
    const LrdSpec spec = LrdSpec::fgn(h);
    const double ratio = autocov(spec, 1000) / autocov_asymptotic(spec, 1000);
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
  }
  const LrdSpec ar = LrdSpec::arfima(0.3);
  CHECK(autocov(ar, 1000) / autocov_asymptotic(ar, 1000) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("autocovariance bounds, positivity and regular variation") {
  for (double h : {0.2, 0.5, 0.7, 0.95}) {
    const LrdSpec spec = LrdSpec::fgn(h);
    for (long k : {0L, 1L, 2L, 10L, 100L, 5000L})
      CHECK(std::abs(autocov(spec, k)) <= 1.0 + 1e-15);
  }
  const LrdSpec spec = LrdSpec::fgn(0.8);
  for (long k = 1; k <= 10000; k = k < 16 ? k + 1 : k * 2)
    CHECK(autocov(spec, k) > 0.0);
  CHECK(autocov(spec, 10000) / autocov(spec, 10001) == doctest::Approx(1.0).epsilon(2e-4));
}

TEST_CASE("ARFIMA(0,d,0) normalized autocovariance") {
  const double d = 0.3;
  const LrdSpec spec = LrdSpec::arfima(d);
  CHECK(spec.hurst == doctest::Approx(0.8));
  CHECK(spec.memory_d() == doctest::Approx(d));
  CHECK(autocov(spec, 0) == 1.0);
  // r(1) = d / (1 - d)
  CHECK(autocov(spec, 1) == doctest::Approx(d / (1.0 - d)).epsilon(1e-12));
  // recurrence r(k) = r(k-1) (k-1+d)/(k-d)
  double r = 1.0;
  for (long k = 1; k <= 50; ++k) {
    r *= (static_cast<double>(k) - 1.0 + d) / (static_cast<double>(k) - d);
    CHECK(autocov(spec, k) == doctest::Approx(r).epsilon(1e-10));
  }
}

TEST_CASE("simulate is deterministic bit-for-bit") {
  for (std::size_t n : {100u, 1024u}) {  // Durbin-Levinson and embedding paths
    const LrdSpec spec = LrdSpec::fgn(0.8);
    const GaussianPath a = simulate(spec, n, 99);
    const GaussianPath b = simulate(spec, n, 99);
    REQUIRE(a.values.size() == n);
    CHECK(std::memcmp(a.values.data(), b.values.data(), n * sizeof(double)) == 0);
    const GaussianPath c = simulate(spec, n, 100);
    CHECK(std::memcmp(a.values.data(), c.values.data(), n * sizeof(double)) != 0);
  }
}

TEST_CASE("H = 1/2 path has i.i.d. standard normal marginals") {
  const std::size_t n = 10000;
  const GaussianPath p = simulate(LrdSpec::fgn(0.5), n, 2718);
  const double m = stats::mean(p.values);
  const double v = stats::variance(p.values);
  CHECK(std::abs(m) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(v - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

namespace {

// mean over replications of the unbiased zero-mean autocovariance estimator,
// checked against the analytic value at 3 MC standard errors
void check_exactness(const LrdSpec& spec, std::size_t n, long reps, long max_lag,
                     std::uint64_t seed) {
  FgnSampler sampler(spec, n);
  std::vector<std::vector<double>> acov(static_cast<std::size_t>(max_lag) + 1);
  for (long r = 0; r < reps; ++r) {
    RngStream stream(seed, make_stream_id(StreamRole::gaussian_path, 0,
                                          static_cast<std::uint64_t>(r)));
    const std::vector<double> x = sampler.sample(stream);
    for (long lag = 0; lag <= max_lag; ++lag)
      acov[static_cast<std::size_t>(lag)].push_back(
          stats::autocov_zero_mean(x, static_cast<std::size_t>(lag)));
  }
  for (long lag = 0; lag <= max_lag; ++lag) {
    const auto& col = acov[static_cast<std::size_t>(lag)];
    const double analytic = autocov(spec, lag);
    const double err = std::abs(stats::mean(col) - analytic);
    INFO("lag ", lag, " err ", err, " 3se ", 3 * stats::se_of_mean(col));
    CHECK(err < 3.0 * stats::se_of_mean(col) + 1e-12);
  }
}

}  // namespace

TEST_CASE("circulant embedding reproduces the analytic autocovariance") {
  check_exactness(LrdSpec::fgn(0.7), 2048, 150, 5, 411);
  check_exactness(LrdSpec::fgn(0.9), 2048, 150, 5, 412);
  check_exactness(LrdSpec::arfima(0.3), 1024, 150, 3, 413);
}

TEST_CASE("Durbin-Levinson path reproduces the analytic autocovariance") {
  check_exactness(LrdSpec::fgn(0.8), 300, 400, 3, 515);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(LrdSpec::fgn(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LrdSpec::fgn(1.0), std::invalid_argument);
  CHECK_THROWS_AS(LrdSpec::arfima(0.5), std::invalid_argument);
  CHECK_THROWS_AS(simulate(LrdSpec::fgn(0.8), 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(autocov(LrdSpec::fgn(0.8), -1), std::invalid_argument);
}
