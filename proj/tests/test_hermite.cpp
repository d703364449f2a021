#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lmsv/gauss_lrd.hpp"
#include "lmsv/hermite.hpp"
#include "lmsv/stats.hpp"

using namespace lmsv;

TEST_CASE("probabilists' Hermite polynomial values") {
  CHECK(hermite_poly(0, 1.7) == 1.0);
  CHECK(hermite_poly(1, 3.0) == 3.0);
  CHECK(hermite_poly(2, 0.0) == -1.0);  // x^2 - 1
  CHECK(hermite_poly(3, 2.0) == 2.0);   // x^3 - 3x = 8 - 6
  CHECK(hermite_poly(4, 1.0) == doctest::Approx(1.0 - 6.0 + 3.0));  // x^4-6x^2+3
}

TEST_CASE("orthogonality: E[He_j He_k] = delta_{jk} k!") {
  auto factorial = [](int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  for (int j = 0; j <= 12; ++j) {
    for (int k = j; k <= 12; ++k) {
      const double v = quad::expect_fixed(
          [&](double x) { return hermite_poly(j, x) * hermite_poly(k, x); }, 64);
      const double expect = (j == k) ? factorial(k) : 0.0;
      // normalized by the L2 scale of the product, i.e. in the orthonormal basis
      const double err = std::abs(v - expect) / std::sqrt(factorial(j) * factorial(k));
      INFO("j ", j, " k ", k, " err ", err);
      CHECK(err < 1e-10);
    }
  }
}

TEST_CASE("expansion of simple functions") {
  const HermiteExpansion ex = expand([](double x) { return x; }, 8);
  CHECK(ex.coeff(1) == doctest::Approx(1.0).epsilon(1e-12));
  for (int m : {0, 2, 3, 4, 5, 6, 7, 8}) CHECK(std::abs(ex.coeff(m)) < 1e-12);

  const HermiteExpansion esq = expand([](double x) { return x * x; }, 8);
  CHECK(esq.coeff(2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(esq.coeff(1)) < 1e-12);

  // G = e^{ax}: c_m = a^m e^{a^2/2}
  for (double a : {0.5, 1.0, 1.5}) {
    const HermiteExpansion ee = expand([a](double x) { return std::exp(a * x); }, 10);
    for (int m = 0; m <= 10; ++m) {
      const double closed = std::pow(a, m) * std::exp(0.5 * a * a);
      INFO("a ", a, " m ", m);
      CHECK(ee.coeff(m) == doctest::Approx(closed).epsilon(1e-8));
    }
    // Parseval with slack
    double sum = 0.0, fact = 1.0;
    for (int m = 0; m <= 10; ++m) {
      if (m >= 2) fact *= m;
      sum += ee.coeff(m) * ee.coeff(m) / fact;
    }
    CHECK(sum <= ee.g_sq_mean * (1.0 + 1e-8));
    CHECK(ee.g_sq_mean == doctest::Approx(std::exp(2.0 * a * a)).epsilon(1e-8));
  }
}

TEST_CASE("Hermite rank detection") {
  CHECK(rank_of(expand([](double x) { return std::exp(x); }, 12)) == 1);
  CHECK(rank_of(expand([](double x) { return x * x; }, 12)) == 2);
  CHECK(rank_of(expand([](double x) { return x * x * x; }, 12)) == 1);  // c_1 = 3
  const HermiteExpansion flat = expand([](double) { return 1.0; }, 12);
  CHECK_THROWS_AS(rank_of(flat), std::domain_error);
}

TEST_CASE("expand_gn: constant volatility has rank-less expansion") {
  const HermiteExpansion e =
      expand_gn(VolatilitySpec::exp_scaled(0.0), NoiseSpec::pareto(2.0), 100.0, 0.5, 8);
  CHECK(e.coeff(0) == doctest::Approx(limit_tail(2.0, 0.5)).epsilon(1e-12));
  for (int m = 1; m <= 8; ++m) CHECK(std::abs(e.coeff(m)) < 1e-12);
  CHECK_FALSE(e.rank_found);
}

TEST_CASE("expand_gn converges to J(m) T(s) and keeps the rank of G") {
  const double alpha = 2.0, tau = 0.5;
  const VolatilitySpec vol = VolatilitySpec::exp_scaled(tau);
  const NoiseSpec noise = NoiseSpec::pareto(alpha);
  const double a = alpha * tau;
  const HermiteExpansion at_1e3 = expand_gn(vol, noise, 1e3, 0.0, 12);
  const double j1_limit = a * std::exp(0.5 * a * a);
  CHECK(at_1e3.coeff(1) == doctest::Approx(j1_limit).epsilon(5e-2));
  CHECK(rank_of(at_1e3) == 1);
  // convergence along u_n (Breiman transfer of the coefficients)
  const double gap_small = std::abs(expand_gn(vol, noise, 50.0, 0.0, 12).coeff(1) - j1_limit);
  const double gap_large = std::abs(expand_gn(vol, noise, 1e5, 0.0, 12).coeff(1) - j1_limit);
  CHECK(gap_large < gap_small);
  // J_n(m, s) -> J(m) T(s): check order 1 at s = 1
  const HermiteExpansion at_s = expand_gn(vol, noise, 1e5, 1.0, 12);
  CHECK(at_s.coeff(1) ==
        doctest::Approx(j1_limit * limit_tail(alpha, 1.0)).epsilon(1e-2));
}

TEST_CASE("expand_gn closed form agrees with the generic quadrature route") {
  for (const NoiseSpec& noise :
       {NoiseSpec::pareto(2.0), NoiseSpec::pareto_second_order(2.0, 1.0),
        NoiseSpec::log_perturbed(1.0)}) {
    const VolatilitySpec vol = VolatilitySpec::exp_scaled(0.5);
    for (double s : {0.0, 0.7}) {
      const HermiteExpansion closed = expand_gn(vol, noise, 30.0, s, 8);
      const double fz = survival_z(noise, 30.0);
      quad::QuadPolicy p;
      p.require_convergence = false;
      const HermiteExpansion generic = expand(
          [&](double x) {
            return survival_z(noise, 30.0 * (1.0 + s) / vol.sigma(x)) / fz;
          },
          8, p);
      for (int m = 0; m <= 8; ++m) {
        INFO("family ", static_cast<int>(noise.family), " s ", s, " m ", m);
        CHECK(closed.coeff(m) ==
              doctest::Approx(generic.coeff(m)).epsilon(1e-4).scale(1.0));
      }
    }
  }
}

TEST_CASE("expand_gn order zero ties to survival_y") {
  const VolatilitySpec vol = VolatilitySpec::exp_scaled(0.7);
  const NoiseSpec noise = NoiseSpec::pareto_second_order(1.5, 1.0);
  const TailModel model(vol, noise);
  for (double s : {0.0, 0.5, 2.0}) {
    const HermiteExpansion e = expand_gn(vol, noise, 40.0, s, 6);
    CHECK(e.coeff(0) * survival_z(noise, 40.0) ==
          doctest::Approx(model.survival_y(40.0 * (1.0 + s))).epsilon(1e-12));
  }
}

TEST_CASE("variance_sum_prediction equals the exact fGn partial-sum variance") {
  // for the fGn family with q = 1 and J = 1 the prediction is n^{2H} exactly
  for (double h : {0.75, 0.8, 0.9}) {
    for (long n : {100L, 10000L}) {
      CHECK(variance_sum_prediction(LrdSpec::fgn(h), 1.0, 1, n) ==
            doctest::Approx(std::pow(static_cast<double>(n), 2.0 * h)).epsilon(1e-12));
    }
  }
  CHECK(variance_sum_prediction(LrdSpec::fgn(0.8), 1.0, 1, 10000) ==
        doctest::Approx(std::pow(10.0, 6.4)).epsilon(1e-12));
  // regime guard: q(1-H) >= 1/2
  CHECK_THROWS_AS(variance_sum_prediction(LrdSpec::fgn(0.6), 1.0, 2, 1000), std::domain_error);
  CHECK_THROWS_AS(variance_sum_prediction(LrdSpec::fgn(0.75), 1.0, 2, 1000), std::domain_error);
}

TEST_CASE("variance_sum_prediction matches Monte Carlo") {
  const LrdSpec lrd = LrdSpec::fgn(0.8);
  const std::size_t n = 4096;
  const long reps = 300;
  const HermiteExpansion eg = expand([](double x) { return std::exp(x); }, 12);
  FgnSampler sampler(lrd, n);
  std::vector<double> sums(reps);
  for (long r = 0; r < reps; ++r) {
    RngStream s(606, make_stream_id(StreamRole::gaussian_path, 0, static_cast<std::uint64_t>(r)));
    const std::vector<double> x = sampler.sample(s);
    double acc = 0.0;
    for (double v : x) acc += std::exp(v);
    sums[static_cast<std::size_t>(r)] = acc;
  }
  const double measured = stats::variance(sums);
  const double predicted =
      variance_sum_prediction(lrd, eg.coeff(rank_of(eg)), rank_of(eg), static_cast<long>(n));
  INFO("measured ", measured, " predicted ", predicted);
  CHECK(measured / predicted == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("rozanov covariance values") {
  const HermiteExpansion ee = expand([](double x) { return std::exp(x); }, 12);
  CHECK(rozanov_cov(ee, 0.0).value == 0.0);
  // var(e^X) = e^2 - e
  CHECK(rozanov_cov(ee, 1.0).value ==
        doctest::Approx(std::exp(2.0) - std::exp(1.0)).epsilon(1e-8));
  // sum_m e (1/2)^m / m! = e (e^{1/2} - 1)
  CHECK(rozanov_cov(ee, 0.5).value ==
        doctest::Approx(std::exp(1.0) * (std::exp(0.5) - 1.0)).epsilon(1e-10));
  CHECK_THROWS_AS(rozanov_cov(ee, 1.5), std::invalid_argument);
  // nondecreasing in rho for all-nonnegative coefficients
  double prev = -1.0;
  for (double rho = 0.0; rho <= 1.0 + 1e-12; rho += 0.1) {
    const double v = rozanov_cov(ee, std::min(rho, 1.0)).value;
    CHECK(v >= prev);
    prev = v;
  }
  // truncation warning engages when the expansion is short
  const HermiteExpansion trunc = expand([](double x) { return std::exp(1.5 * x); }, 4);
  CHECK(rozanov_cov(trunc, 0.95).tail_warning);
  CHECK_FALSE(rozanov_cov(ee, 0.5).tail_warning);
}

TEST_CASE("rozanov covariance against bivariate-normal Monte Carlo") {
  const HermiteExpansion ee = expand([](double x) { return std::exp(x); }, 12);
  const std::size_t n = 200000;
  for (double rho : {0.2, 0.5, 0.8}) {
    RngStream s(1234, static_cast<std::uint64_t>(rho * 100));
    std::vector<double> g0(n), gk(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double n1 = s.normal();
      const double n2 = s.normal();
      g0[i] = std::exp(n1);
      gk[i] = std::exp(rho * n1 + std::sqrt(1.0 - rho * rho) * n2);
    }
    const double mc = stats::covariance(g0, gk);
    const double se = stats::se_of_covariance(g0, gk);
    INFO("rho ", rho, " mc ", mc, " se ", se);
    CHECK(std::abs(mc - rozanov_cov(ee, rho).value) < 3 * se);
  }
}

TEST_CASE("sigma0: short-memory subordinated sums") {
  const HermiteExpansion ee = expand([](double x) { return std::exp(x); }, 12);
  const double var_g = std::exp(2.0) - std::exp(1.0);
  // iid input: Sigma_0^2 = var(G)
  CHECK(sigma0_sq(ee, LrdSpec::iid()) == doctest::Approx(var_g).epsilon(1e-8));
  // anti-persistent input: negative lag-1 covariance pulls Sigma_0^2 down
  const double s0 = sigma0_sq(ee, LrdSpec::fgn(0.2));
  CHECK(s0 > 0.0);
  CHECK(s0 < var_g);
}

TEST_CASE("Arcones variance inequality on a finite grid") {
  // var(n^{-1} sum G(X_j)) <= C rho_n^q var(G(X_1)), fitted C stable in n
  const LrdSpec lrd = LrdSpec::fgn(0.8);
  const double var_g = std::exp(2.0) - std::exp(1.0);
  const long reps = 200;
  auto measure = [&](std::size_t n) {
    FgnSampler sampler(lrd, n);
    std::vector<double> means(reps);
    for (long r = 0; r < reps; ++r) {
      RngStream s(8080, make_stream_id(StreamRole::gaussian_path, 1,
                                       static_cast<std::uint64_t>(r)));
      const std::vector<double> x = sampler.sample(s);
      double acc = 0.0;
      for (double v : x) acc += std::exp(v);
      means[static_cast<std::size_t>(r)] = acc / static_cast<double>(n);
    }
    return stats::variance(means);
  };
  const double c_fit = measure(1024) / (autocov_asymptotic(lrd, 1024) * var_g);
  for (std::size_t n : {4096u, 16384u}) {
    const double lhs = measure(n);
    const double rhs = c_fit * autocov_asymptotic(lrd, static_cast<long>(n)) * var_g;
    INFO("n ", n, " lhs ", lhs, " C rho var ", rhs);
    CHECK(lhs <= 1.5 * rhs);
  }
}
