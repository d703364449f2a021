#pragma once

// Monte Carlo harness: MSE curves and Hill plots for the simulation protocol,
// subordinated-sum variance scaling, tail-empirical limit properties,
// covariance checks, and random-level rate comparisons; CSV and SVG emission.
//
// Determinism contract: identical configs produce identical tables and
// identical emitted bytes for any worker count.  Each replication draws from
// its own streams (see rng.hpp); per-replication results are merged in
// replication order.

#include <string>
#include <vector>

#include "lmsv/experiment_config.hpp"
#include "lmsv/result_table.hpp"
#include "lmsv/tep.hpp"

namespace lmsv {

struct RunOptions {
  int workers = 1;
};

// One LMSV sample Y_i = sigma_tau(X_i) Z_i with latent paths attached.
// Streams: X from (gaussian_path, d_index, replication), Z uniforms from
// (noise, 0, replication) so that all d (and alpha) share the same noise.
Sample simulate_sample(const LrdSpec& lrd, const VolatilitySpec& vol, const NoiseSpec& noise,
                       std::size_t n, std::uint64_t master_seed, std::uint64_t replication,
                       std::uint64_t d_index);

ResultTable run_mse(const ExperimentConfig& config, const RunOptions& opts = {});
ResultTable run_hill_plot(const ExperimentConfig& config, const RunOptions& opts = {});
ResultTable run_variance_scaling(const ExperimentConfig& config, const RunOptions& opts = {});
ResultTable run_tep_limit(const ExperimentConfig& config, const RunOptions& opts = {});
ResultTable run_covariance_check(const ExperimentConfig& config, const RunOptions& opts = {});
ResultTable run_random_level_rate(const ExperimentConfig& config, const RunOptions& opts = {});

ResultTable run_experiment(const ExperimentConfig& config, const RunOptions& opts = {});

enum class EmitFormat { csv, svg };

// Writes CSV (always one file) or SVG charts (mse, hill_plot and
// variance_scaling panels; one file per (experiment, alpha, tau), series
// keyed by d).  Returns the paths written.
std::vector<std::string> emit(const ResultTable& table, EmitFormat format,
                              const std::string& output_dir);

}  // namespace lmsv
