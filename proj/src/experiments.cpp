#include "lmsv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "lmsv/hermite.hpp"
#include "lmsv/regimes.hpp"
#include "lmsv/stats.hpp"
#include "lmsv/svg.hpp"

namespace lmsv {

namespace {

LrdSpec lrd_for_d(double d) { return d == 0.0 ? LrdSpec::iid() : LrdSpec::fgn(0.5 + d); }

// Runs `body(state, rep)` for rep = 0..reps-1 over `workers` threads; the
// per-worker state comes from `make_state()`.  Results land in a slot per
// replication, so the outcome does not depend on scheduling.  Failed
// replications are excluded; more than 1% failures aborts the run.
template <typename MakeState, typename Body>
std::vector<std::vector<double>> run_reps(long reps, int workers, MakeState make_state,
                                          Body body) {
  std::vector<std::optional<std::vector<double>>> slots(static_cast<std::size_t>(reps));
  std::atomic<long> next{0};
  auto work = [&] {
    auto state = make_state();
    for (;;) {
      const long r = next.fetch_add(1);
      if (r >= reps) break;
      try {
        slots[static_cast<std::size_t>(r)] = body(state, r);
      } catch (...) {
        slots[static_cast<std::size_t>(r)] = std::nullopt;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<std::vector<double>> out;
  out.reserve(slots.size());
  long failures = 0;
  for (auto& s : slots) {
    if (s)
      out.push_back(std::move(*s));
    else
      ++failures;
  }
  if (failures * 100 > reps)
    throw quad::NumericError("replication failure rate above 1%: " + std::to_string(failures) +
                             " of " + std::to_string(reps));
  return out;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
  std::vector<double> c(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) c[i] = rows[i][j];
  return c;
}

// Approximate standard errors for the robust statistics.
double se_of_correlation(double r, std::size_t n) {
  if (n <= 3) return 1.0;
  return (1.0 - r * r) / std::sqrt(static_cast<double>(n - 3));
}

double se_of_median(std::span<const double> x) {
  const double med = stats::median(x);
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - med);
  const double mad = stats::median(dev);
  return 1.2533 * 1.4826 * mad / std::sqrt(static_cast<double>(x.size()));
}

struct HillTrace {
  // Hill estimates for every k in ks from one sorted-descending pass.
  static std::vector<double> compute(std::vector<double> y, const std::vector<long>& ks) {
    std::sort(y.begin(), y.end(), std::greater<double>());
    std::vector<double> logs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) logs[i] = std::log(y[i]);
    std::vector<double> prefix(y.size() + 1, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) prefix[i + 1] = prefix[i] + logs[i];
    std::vector<double> out(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const long k = ks[j];
      out[j] = prefix[static_cast<std::size_t>(k)] / static_cast<double>(k) -
               logs[static_cast<std::size_t>(k)];
    }
    return out;
  }
};

TailGrid tep_grid() { return TailGrid::from_points({0.0, 0.5, 1.0}); }

std::string stat_s(const std::string& base, double s) { return base + format_double(s); }

}  // namespace

Sample simulate_sample(const LrdSpec& lrd, const VolatilitySpec& vol, const NoiseSpec& noise,
                       std::size_t n, std::uint64_t master_seed, std::uint64_t replication,
                       std::uint64_t d_index) {
  FgnSampler sampler(lrd, n);
  RngStream xs(master_seed, make_stream_id(StreamRole::gaussian_path, d_index, replication));
  RngStream zs(master_seed, make_stream_id(StreamRole::noise, 0, replication));
  Sample s;
  s.latent_x = sampler.sample(xs);
  s.latent_z = sample_z(noise, n, zs);
  s.y.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.y[i] = vol.sigma((*s.latent_x)[i]) * (*s.latent_z)[i];
  s.meta = SampleMeta{lrd, noise, vol, master_seed};
  return s;
}

// ---------------------------------------------------------------------------

ResultTable run_mse(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  ResultTable table;
  for (double alpha : config.alpha_grid) {
    const NoiseSpec noise = NoiseSpec::pareto(alpha);
    const VolatilitySpec vol = VolatilitySpec::exp_scaled(config.tau);
    const double gamma = 1.0 / alpha;
    for (std::size_t di = 0; di < config.d_grid.size(); ++di) {
      const double d = config.d_grid[di];
      const LrdSpec lrd = lrd_for_d(d);
      auto rows = run_reps(
          config.replications, opts.workers,
          [&] { return std::make_shared<FgnSampler>(lrd, static_cast<std::size_t>(config.n)); },
          [&](const std::shared_ptr<FgnSampler>& sampler, long rep) {
            RngStream xs(config.master_seed,
                         make_stream_id(StreamRole::gaussian_path, di, static_cast<std::uint64_t>(rep)));
            RngStream zs(config.master_seed,
                         make_stream_id(StreamRole::noise, 0, static_cast<std::uint64_t>(rep)));
            const std::vector<double> x = sampler->sample(xs);
            std::vector<double> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
              y[i] = std::exp(config.tau * x[i]) * quantile_z(noise, zs.uniform01());
            const std::vector<double> trace = HillTrace::compute(std::move(y), config.k_grid);
            std::vector<double> sq(trace.size());
            for (std::size_t j = 0; j < trace.size(); ++j) {
              const double e = trace[j] - gamma;
              sq[j] = e * e;
            }
            return sq;
          });
      const long used = static_cast<long>(rows.size());
      for (std::size_t j = 0; j < config.k_grid.size(); ++j) {
        const std::vector<double> col = column(rows, j);
        table.rows.push_back({"mse", alpha, d, config.tau, config.n, config.k_grid[j], "mse",
                              stats::mean(col), stats::se_of_mean(col), used});
      }
    }
  }
  return table;
}

ResultTable run_hill_plot(const ExperimentConfig& config, const RunOptions&) {
  config.validate();
  ResultTable table;
  for (double alpha : config.alpha_grid) {
    const NoiseSpec noise = NoiseSpec::pareto(alpha);
    // single-path semantics: replication 0 of the shared noise stream
    RngStream zs(config.master_seed, make_stream_id(StreamRole::noise, 0, 0));
    const std::vector<double> z = sample_z(noise, static_cast<std::size_t>(config.n), zs);
    const std::vector<double> z_trace = HillTrace::compute(z, config.k_grid);
    for (std::size_t j = 0; j < config.k_grid.size(); ++j)
      table.rows.push_back({"hill_plot", alpha, 0.0, config.tau, config.n, config.k_grid[j],
                            "hill_z", z_trace[j], 0.0, 1});
    for (std::size_t di = 0; di < config.d_grid.size(); ++di) {
      const double d = config.d_grid[di];
      const LrdSpec lrd = lrd_for_d(d);
      FgnSampler sampler(lrd, static_cast<std::size_t>(config.n));
      RngStream xs(config.master_seed, make_stream_id(StreamRole::gaussian_path, di, 0));
      const std::vector<double> x = sampler.sample(xs);
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(config.tau * x[i]) * z[i];
      const std::vector<double> y_trace = HillTrace::compute(std::move(y), config.k_grid);
      for (std::size_t j = 0; j < config.k_grid.size(); ++j)
        table.rows.push_back({"hill_plot", alpha, d, config.tau, config.n, config.k_grid[j],
                              "hill_y", y_trace[j], 0.0, 1});
    }
  }
  return table;
}

ResultTable run_variance_scaling(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  ResultTable table;
  // sub-sequence of path lengths n/16, n/8, n/4, n/2, n
  std::vector<long> n_list;
  for (long div : {16L, 8L, 4L, 2L, 1L}) {
    const long m = config.n / div;
    if (m >= 64 && (n_list.empty() || m != n_list.back())) n_list.push_back(m);
  }
  for (double alpha : config.alpha_grid) {
    const double a = alpha * config.tau;
    if (!(a > 0))
      throw std::invalid_argument(
          "variance_scaling: needs alpha * tau > 0 (G = exp(alpha tau x) would be constant)");
    const HermiteExpansion eg = expand([a](double x) { return std::exp(a * x); }, 12);
    const int q = rank_of(eg);
    const double j_q = eg.coeff(q);
    for (std::size_t di = 0; di < config.d_grid.size(); ++di) {
      const double d = config.d_grid[di];
      const LrdSpec lrd = lrd_for_d(d);
      const bool lrd_branch = d > 0.0 && static_cast<double>(q) * (0.5 - d) < 0.5;
      for (long m : n_list) {
        auto rows = run_reps(
            config.replications, opts.workers,
            [&] { return std::make_shared<FgnSampler>(lrd, static_cast<std::size_t>(m)); },
            [&](const std::shared_ptr<FgnSampler>& sampler, long rep) {
              RngStream xs(config.master_seed,
                           make_stream_id(StreamRole::gaussian_path, di,
                                          static_cast<std::uint64_t>(rep)));
              const std::vector<double> x = sampler->sample(xs);
              double s = 0.0;
              for (double v : x) s += std::exp(a * v);
              return std::vector<double>{s};
            });
        const long used = static_cast<long>(rows.size());
        const std::vector<double> sums = column(rows, 0);
        const double var_meas = stats::variance(sums);
        const double se_var = stats::se_of_variance(sums);
        table.rows.push_back({"variance_scaling", alpha, d, config.tau, m, 0, "var_measured",
                              var_meas, se_var, used});
        if (lrd_branch) {
          const double pred = variance_sum_prediction(lrd, j_q, q, m);
          table.rows.push_back({"variance_scaling", alpha, d, config.tau, m, 0, "var_predicted",
                                pred, 0.0, used});
          table.rows.push_back({"variance_scaling", alpha, d, config.tau, m, 0, "var_ratio",
                                var_meas / pred, se_var / pred, used});
        } else {
          // short-memory branch: var/n plateau against Sigma_0^2
          table.rows.push_back({"variance_scaling", alpha, d, config.tau, m, 0, "var_over_n",
                                var_meas / static_cast<double>(m),
                                se_var / static_cast<double>(m), used});
          table.rows.push_back({"variance_scaling", alpha, d, config.tau, m, 0, "sigma0_pred",
                                sigma0_sq(eg, lrd), 0.0, used});
        }
      }
    }
  }
  return table;
}

namespace {

struct TepRepStats {
  // per replication: e_n at the 3 grid points, ehat at the 3 grid points
  static std::vector<double> compute(const Sample& sample, double u_n, double fbar,
                                     const TailGrid& grid, long k, double alpha,
                                     const std::vector<double>& tn_values) {
    // inline deterministic-level counts (T_n precomputed once per config)
    std::vector<double> sorted(sample.y);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sample.y.size());
    std::vector<double> out;
    out.reserve(2 * grid.s.size());
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
      const double thr = u_n * (1.0 + grid.s[i]);
      const auto it = std::upper_bound(sorted.begin(), sorted.end(), thr);
      const double tilde = static_cast<double>(sorted.end() - it) / (n * fbar);
      out.push_back(tilde - tn_values[i]);
    }
    const double level = sorted[sorted.size() - static_cast<std::size_t>(k) - 1];
    for (std::size_t i = 0; i < grid.s.size(); ++i) {
      const double thr = level * (1.0 + grid.s[i]);
      const auto it = std::upper_bound(sorted.begin(), sorted.end(), thr);
      const double hat = static_cast<double>(sorted.end() - it) / static_cast<double>(k);
      out.push_back(hat - limit_tail(alpha, grid.s[i]));
    }
    return out;
  }
};

}  // namespace

ResultTable run_tep_limit(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  ResultTable table;
  const TailGrid grid = tep_grid();
  for (double alpha : config.alpha_grid) {
    const NoiseSpec noise = NoiseSpec::pareto(alpha);
    const VolatilitySpec vol = VolatilitySpec::exp_scaled(config.tau);
    const TailModel model(vol, noise);
    for (long k : config.k_grid) {
      const double u_n = model.quantile_u(static_cast<double>(config.n) / static_cast<double>(k));
      const double fbar = static_cast<double>(k) / static_cast<double>(config.n);
      std::vector<double> tn_values(grid.s.size());
      const double denom = model.survival_y(u_n);
      for (std::size_t i = 0; i < grid.s.size(); ++i)
        tn_values[i] = model.survival_y(u_n * (1.0 + grid.s[i])) / denom;
      for (std::size_t di = 0; di < config.d_grid.size(); ++di) {
        const double d = config.d_grid[di];
        const LrdSpec lrd = lrd_for_d(d);
        // zone and scaling
        Zone zone = Zone::iid;
        double w_n = std::sqrt(static_cast<double>(k));
        double product = 0.0;
        if (d > 0.0 && config.tau > 0.0) {
          const RegimeReport rep = classify(config.n, k, lrd, 1);
          zone = rep.zone;
          w_n = rep.w_n;
          product = rep.product;
        }
        auto rows = run_reps(
            config.replications, opts.workers,
            [&] { return std::make_shared<FgnSampler>(lrd, static_cast<std::size_t>(config.n)); },
            [&](const std::shared_ptr<FgnSampler>& sampler, long rep) {
              RngStream xs(config.master_seed,
                           make_stream_id(StreamRole::gaussian_path, di,
                                          static_cast<std::uint64_t>(rep)));
              RngStream zs(config.master_seed,
                           make_stream_id(StreamRole::noise, 0, static_cast<std::uint64_t>(rep)));
              Sample s;
              const std::vector<double> x = sampler->sample(xs);
              s.y.resize(x.size());
              for (std::size_t i = 0; i < x.size(); ++i)
                s.y[i] = std::exp(config.tau * x[i]) * quantile_z(noise, zs.uniform01());
              return TepRepStats::compute(s, u_n, fbar, grid, k, alpha, tn_values);
            });
        const long used = static_cast<long>(rows.size());
        auto push = [&](const std::string& stat, double value, double se) {
          table.rows.push_back(
              {"tep_limit", alpha, d, config.tau, config.n, k, stat, value, se, used});
        };
        for (std::size_t i = 0; i < grid.s.size(); ++i) {
          const std::vector<double> e_col = column(rows, i);
          const std::vector<double> ehat_col = column(rows, grid.s.size() + i);
          push(stat_s("mean_wn_en_s", grid.s[i]), w_n * stats::mean(e_col),
               w_n * stats::se_of_mean(e_col));
          push(stat_s("var_wn_en_s", grid.s[i]), w_n * w_n * stats::variance(e_col),
               w_n * w_n * stats::se_of_variance(e_col));
          push(stat_s("mean_sqrtk_ehat_s", grid.s[i]),
               std::sqrt(static_cast<double>(k)) * stats::mean(ehat_col),
               std::sqrt(static_cast<double>(k)) * stats::se_of_mean(ehat_col));
          push(stat_s("var_sqrtk_ehat_s", grid.s[i]),
               static_cast<double>(k) * stats::variance(ehat_col),
               static_cast<double>(k) * stats::se_of_variance(ehat_col));
        }
        push("product_krho", product, 0.0);
        push("w_n", w_n, 0.0);
        if (zone == Zone::lrd) {
          const std::vector<double> e0 = column(rows, 0);
          const std::vector<double> e05 = column(rows, 1);
          const double corr = stats::correlation(e05, e0);
          push("corr_en_s0.5_s0", corr, se_of_correlation(corr, e0.size()));
          std::vector<double> ratio(e0.size());
          for (std::size_t i = 0; i < e0.size(); ++i) ratio[i] = e05[i] / e0[i];
          push("median_ratio_en_s0.5_s0", stats::median(ratio), se_of_median(ratio));
        }
      }
    }
  }
  return table;
}

ResultTable run_covariance_check(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  ResultTable table;
  const TailGrid grid = tep_grid();
  const long k = config.k_grid.front();
  for (double alpha : config.alpha_grid) {
    const NoiseSpec noise = NoiseSpec::pareto(alpha);
    const VolatilitySpec vol = VolatilitySpec::exp_scaled(config.tau);
    const TailModel model(vol, noise);
    const double u_n = model.quantile_u(static_cast<double>(config.n) / static_cast<double>(k));
    const double fbar = static_cast<double>(k) / static_cast<double>(config.n);
    for (std::size_t di = 0; di < config.d_grid.size(); ++di) {
      const double d = config.d_grid[di];
      const LrdSpec lrd = lrd_for_d(d);
      auto rows = run_reps(
          config.replications, opts.workers,
          [&] { return std::make_shared<FgnSampler>(lrd, static_cast<std::size_t>(config.n)); },
          [&](const std::shared_ptr<FgnSampler>& sampler, long rep) {
            RngStream xs(config.master_seed,
                         make_stream_id(StreamRole::gaussian_path, di,
                                        static_cast<std::uint64_t>(rep)));
            RngStream zs(config.master_seed,
                         make_stream_id(StreamRole::noise, 0, static_cast<std::uint64_t>(rep)));
            const std::vector<double> x = sampler->sample(xs);
            std::vector<double> y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
              y[i] = std::exp(config.tau * x[i]) * quantile_z(noise, zs.uniform01());
            std::sort(y.begin(), y.end());
            std::vector<double> tilde(grid.s.size());
            for (std::size_t i = 0; i < grid.s.size(); ++i) {
              const auto it = std::upper_bound(y.begin(), y.end(), u_n * (1.0 + grid.s[i]));
              tilde[i] = static_cast<double>(y.end() - it) /
                         (static_cast<double>(y.size()) * fbar);
            }
            return tilde;
          });
      const long used = static_cast<long>(rows.size());
      for (std::size_t i = 0; i < grid.s.size(); ++i) {
        for (std::size_t j = i; j < grid.s.size(); ++j) {
          const std::vector<double> a = column(rows, i);
          const std::vector<double> b = column(rows, j);
          const std::string suffix =
              format_double(grid.s[i]) + "_t" + format_double(grid.s[j]);
          table.rows.push_back({"covariance_check", alpha, d, config.tau, config.n, k,
                                "cov_mc_s" + suffix, stats::covariance(a, b),
                                stats::se_of_covariance(a, b), used});
          const CovPrediction pred =
              covariance_prediction(grid.s[i], grid.s[j], config.n, u_n, model, lrd);
          table.rows.push_back({"covariance_check", alpha, d, config.tau, config.n, k,
                                "cov_pred_s" + suffix, pred.value, 0.0, used});
        }
      }
    }
  }
  return table;
}

ResultTable run_random_level_rate(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  ResultTable table;
  const TailGrid grid = tep_grid();
  const long k = config.k_grid.front();
  for (double alpha : config.alpha_grid) {
    const NoiseSpec noise = NoiseSpec::pareto(alpha);
    const VolatilitySpec vol = VolatilitySpec::exp_scaled(config.tau);
    const TailModel model(vol, noise);
    const double u_n = model.quantile_u(static_cast<double>(config.n) / static_cast<double>(k));
    const double fbar = static_cast<double>(k) / static_cast<double>(config.n);
    std::vector<double> tn_values(grid.s.size());
    const double denom = model.survival_y(u_n);
    for (std::size_t i = 0; i < grid.s.size(); ++i)
      tn_values[i] = model.survival_y(u_n * (1.0 + grid.s[i])) / denom;
    for (std::size_t di = 0; di < config.d_grid.size(); ++di) {
      const double d = config.d_grid[di];
      const LrdSpec lrd = lrd_for_d(d);
      auto rows = run_reps(
          config.replications, opts.workers,
          [&] { return std::make_shared<FgnSampler>(lrd, static_cast<std::size_t>(config.n)); },
          [&](const std::shared_ptr<FgnSampler>& sampler, long rep) {
            RngStream xs(config.master_seed,
                         make_stream_id(StreamRole::gaussian_path, di,
                                        static_cast<std::uint64_t>(rep)));
            RngStream zs(config.master_seed,
                         make_stream_id(StreamRole::noise, 0, static_cast<std::uint64_t>(rep)));
            Sample s;
            const std::vector<double> x = sampler->sample(xs);
            s.y.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
              s.y[i] = std::exp(config.tau * x[i]) * quantile_z(noise, zs.uniform01());
            return TepRepStats::compute(s, u_n, fbar, grid, k, alpha, tn_values);
          });
      const long used = static_cast<long>(rows.size());
      const std::vector<double> en05 = column(rows, 1);
      const std::vector<double> ehat05 = column(rows, grid.s.size() + 1);
      const double kk = static_cast<double>(k);
      table.rows.push_back({"random_level_rate", alpha, d, config.tau, config.n, k,
                            "var_sqrtk_en_s0.5", kk * stats::variance(en05),
                            kk * stats::se_of_variance(en05), used});
      table.rows.push_back({"random_level_rate", alpha, d, config.tau, config.n, k,
                            "var_sqrtk_ehat_s0.5", kk * stats::variance(ehat05),
                            kk * stats::se_of_variance(ehat05), used});
      if (d > 0.0) {
        // trend of rho_n^{-q/2} ehat(0.5) along growing n (q = 1); the LRD-zone
        // configuration keeps the intermediate sequence proportional, k_m =
        // k m / n, so that k_m rho_m^q keeps growing
        std::vector<long> n_list;
        for (long div : {16L, 8L, 4L, 2L, 1L}) {
          const long m = config.n / div;
          const long k_m = (k * m) / config.n;
          if (m >= 64 && k_m >= 2 && (n_list.empty() || m != n_list.back())) n_list.push_back(m);
        }
        for (long m : n_list) {
          const long k_m = (k * m) / config.n;
          const double u_m = model.quantile_u(static_cast<double>(m) / static_cast<double>(k_m));
          const double fbar_m = static_cast<double>(k_m) / static_cast<double>(m);
          std::vector<double> tn_m(grid.s.size());
          const double denom_m = model.survival_y(u_m);
          for (std::size_t i = 0; i < grid.s.size(); ++i)
            tn_m[i] = model.survival_y(u_m * (1.0 + grid.s[i])) / denom_m;
          auto rows_m = run_reps(
              config.replications, opts.workers,
              [&] { return std::make_shared<FgnSampler>(lrd, static_cast<std::size_t>(m)); },
              [&](const std::shared_ptr<FgnSampler>& sampler, long rep) {
                RngStream xs(config.master_seed,
                             make_stream_id(StreamRole::gaussian_path, di,
                                            static_cast<std::uint64_t>(rep)));
                RngStream zs(config.master_seed,
                             make_stream_id(StreamRole::noise, 0,
                                            static_cast<std::uint64_t>(rep)));
                Sample s;
                const std::vector<double> x = sampler->sample(xs);
                s.y.resize(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                  s.y[i] = std::exp(config.tau * x[i]) * quantile_z(noise, zs.uniform01());
                return TepRepStats::compute(s, u_m, fbar_m, grid, k_m, alpha, tn_m);
              });
          const std::vector<double> ehat_m = column(rows_m, grid.s.size() + 1);
          const double rho_m = autocov_asymptotic(lrd, m);
          table.rows.push_back({"random_level_rate", alpha, d, config.tau, m, k,
                                "var_rhoscaled_ehat_s0.5",
                                stats::variance(ehat_m) / rho_m,
                                stats::se_of_variance(ehat_m) / rho_m,
                                static_cast<long>(rows_m.size())});
        }
      }
    }
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& config, const RunOptions& opts) {
  switch (config.experiment_kind) {
    case ExperimentKind::mse:
      return run_mse(config, opts);
    case ExperimentKind::hill_plot:
      return run_hill_plot(config, opts);
    case ExperimentKind::variance_scaling:
      return run_variance_scaling(config, opts);
    case ExperimentKind::tep_limit:
      return run_tep_limit(config, opts);
    case ExperimentKind::covariance_check:
      return run_covariance_check(config, opts);
    case ExperimentKind::random_level_rate:
      return run_random_level_rate(config, opts);
  }
  throw std::logic_error("run_experiment: unknown kind");
}

// ---------------------------------------------------------------------------

namespace {

struct PanelKey {
  double alpha;
  double tau;
  bool operator<(const PanelKey& o) const {
    if (alpha != o.alpha) return alpha < o.alpha;
    return tau < o.tau;
  }
};

// SVG panels exist for kinds with a natural (x, series-by-d) layout.
const char* svg_x_stat(const std::string& experiment) {
  if (experiment == "mse") return "mse";
  if (experiment == "hill_plot") return "hill_y";
  if (experiment == "variance_scaling") return "var_ratio";
  return nullptr;
}

}  // namespace

std::vector<std::string> emit(const ResultTable& table, EmitFormat format,
                              const std::string& output_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);
  std::vector<std::string> written;
  const std::string experiment = table.rows.empty() ? "results" : table.rows.front().experiment;
  if (format == EmitFormat::csv) {
    const std::string path = (fs::path(output_dir) / (experiment + ".csv")).string();
    write_csv(table, path);
    written.push_back(path);
    return written;
  }
  if (table.rows.empty()) return written;  // no SVG for an empty table
  const char* y_stat = svg_x_stat(experiment);
  if (!y_stat) return written;
  std::map<PanelKey, std::map<double, SvgSeries>> panels;
  std::map<PanelKey, SvgSeries> z_overlay;
  for (const StatRow& r : table.rows) {
    const PanelKey key{r.alpha, r.tau};
    const double x = (experiment == "variance_scaling") ? static_cast<double>(r.n)
                                                        : static_cast<double>(r.k);
    if (r.stat == y_stat) {
      SvgSeries& s = panels[key][r.d];
      if (s.points.empty()) {
        s.label = "d=" + format_double(r.d);
        s.dashed = false;
      }
      s.points.emplace_back(x, r.value);
    } else if (experiment == "hill_plot" && r.stat == "hill_z") {
      SvgSeries& s = z_overlay[key];
      if (s.points.empty()) {
        s.label = "iid noise";
        s.color = "black";
        s.dashed = true;
      }
      s.points.emplace_back(x, r.value);
    }
  }
  for (auto& [key, by_d] : panels) {
    std::vector<SvgSeries> series;
    std::size_t idx = 0;
    for (auto& [d, s] : by_d) {
      s.color = color_for_d(d, idx++);
      std::sort(s.points.begin(), s.points.end());
      series.push_back(std::move(s));
    }
    auto oz = z_overlay.find(key);
    if (oz != z_overlay.end()) {
      std::sort(oz->second.points.begin(), oz->second.points.end());
      series.push_back(std::move(oz->second));
    }
    const std::string name =
        experiment + "_" + format_double(key.alpha) + "_" + format_double(key.tau) + ".svg";
    const std::string path = (fs::path(output_dir) / name).string();
    const std::string x_label = (experiment == "variance_scaling") ? "n" : "k";
    write_svg_chart(path,
                    experiment + "  alpha=" + format_double(key.alpha) +
                        "  tau=" + format_double(key.tau),
                    x_label, y_stat, series);
    written.push_back(path);
  }
  return written;
}

}  // namespace lmsv
