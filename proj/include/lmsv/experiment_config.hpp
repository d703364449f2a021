#pragma once

// Experiment configuration: the key = value config-file format mirrors the
// fields below exactly (lists comma-separated, '#' comments allowed), and
// serialize() emits a file that parses back to the identical configuration.

#include <cstdint>
#include <string>
#include <vector>

namespace lmsv {

enum class ExperimentKind {
  mse,
  hill_plot,
  variance_scaling,
  tep_limit,
  covariance_check,
  random_level_rate,
};

const char* experiment_kind_name(ExperimentKind k);
ExperimentKind experiment_kind_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment_kind = ExperimentKind::mse;
  long n = 1000;
  long replications = 2000;
  std::uint64_t master_seed = 20260810;
  std::vector<double> d_grid = {0.0, 0.2, 0.4, 0.45};
  std::vector<double> alpha_grid = {1.0, 2.0};
  double tau = 1.0;
  std::vector<long> k_grid = {100};
  std::string output_dir = ".";

  bool operator==(const ExperimentConfig&) const = default;

  // Throws std::invalid_argument naming the offending key and constraint.
  void validate() const;
};

// Parses a config file; every violation names the key (and line) involved.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

// Effective-config echo; valid input for parse_config_text.
std::string serialize_config(const ExperimentConfig& config);

// Protocol presets: figure1 (MSE), figure2 (Hill plots, tau = 0.05),
// figure3 (Hill plots, tau = 1).  paper_scale lifts replications to 10000.
ExperimentConfig preset_config(const std::string& name, bool paper_scale = false);

}  // namespace lmsv
