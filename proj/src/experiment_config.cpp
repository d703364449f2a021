#include "lmsv/experiment_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lmsv/result_table.hpp"

namespace lmsv {

namespace {

const char* kKindNames[] = {"mse",       "hill_plot",        "variance_scaling",
                            "tep_limit", "covariance_check", "random_level_rate"};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

[[noreturn]] void bad_key(const std::string& origin, std::size_t line, const std::string& key,
                          const std::string& message) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": key '" + key + "': " +
                              message);
}

}  // namespace

const char* experiment_kind_name(ExperimentKind k) {
  return kKindNames[static_cast<int>(k)];
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
  for (int i = 0; i < 6; ++i)
    if (name == kKindNames[i]) return static_cast<ExperimentKind>(i);
  throw std::invalid_argument("unknown experiment_kind '" + name +
                              "' (expected one of mse, hill_plot, variance_scaling, tep_limit, "
                              "covariance_check, random_level_rate)");
}

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config key 'n': must be >= 2");
  if (replications < 1)
    throw std::invalid_argument("config key 'replications': must be >= 1");
  if (d_grid.empty()) throw std::invalid_argument("config key 'd_grid': must be nonempty");
  for (double d : d_grid)
    if (!(d >= 0.0 && d < 0.5))
      throw std::invalid_argument("config key 'd_grid': entries must satisfy 0 <= d < 0.5");
  if (alpha_grid.empty())
    throw std::invalid_argument("config key 'alpha_grid': must be nonempty");
  for (double a : alpha_grid)
    if (!(a > 0)) throw std::invalid_argument("config key 'alpha_grid': entries must be > 0");
  if (tau < 0) throw std::invalid_argument("config key 'tau': must be >= 0");
  if (k_grid.empty()) throw std::invalid_argument("config key 'k_grid': must be nonempty");
  for (long k : k_grid)
    if (!(k >= 1 && k < n))
      throw std::invalid_argument("config key 'k_grid': entries must satisfy 1 <= k < n");
  if (output_dir.empty())
    throw std::invalid_argument("config key 'output_dir': must be nonempty");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "experiment_kind") {
        cfg.experiment_kind = experiment_kind_from_name(value);
      } else if (key == "n") {
        cfg.n = std::stol(value);
      } else if (key == "replications") {
        cfg.replications = std::stol(value);
      } else if (key == "master_seed") {
        cfg.master_seed = std::stoull(value);
      } else if (key == "d_grid") {
        cfg.d_grid.clear();
        for (const std::string& v : split_list(value)) cfg.d_grid.push_back(std::stod(v));
      } else if (key == "alpha_grid") {
        cfg.alpha_grid.clear();
        for (const std::string& v : split_list(value)) cfg.alpha_grid.push_back(std::stod(v));
      } else if (key == "tau") {
        cfg.tau = std::stod(value);
      } else if (key == "k_grid") {
        cfg.k_grid.clear();
        for (const std::string& v : split_list(value)) cfg.k_grid.push_back(std::stol(v));
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else {
        bad_key(origin, lineno, key, "unknown key");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      bad_key(origin, lineno, key, std::string("cannot parse value '") + value + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not readable: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "experiment_kind = " << experiment_kind_name(config.experiment_kind) << "\n";
  os << "n = " << config.n << "\n";
  os << "replications = " << config.replications << "\n";
  os << "master_seed = " << config.master_seed << "\n";
  os << "d_grid = ";
  for (std::size_t i = 0; i < config.d_grid.size(); ++i)
    os << (i ? ", " : "") << format_double(config.d_grid[i]);
  os << "\n";
  os << "alpha_grid = ";
  for (std::size_t i = 0; i < config.alpha_grid.size(); ++i)
    os << (i ? ", " : "") << format_double(config.alpha_grid[i]);
  os << "\n";
  os << "tau = " << format_double(config.tau) << "\n";
  os << "k_grid = ";
  for (std::size_t i = 0; i < config.k_grid.size(); ++i)
    os << (i ? ", " : "") << config.k_grid[i];
  os << "\n";
  os << "output_dir = " << config.output_dir << "\n";
  return os.str();
}

ExperimentConfig preset_config(const std::string& name, bool paper_scale) {
  ExperimentConfig cfg;
  cfg.n = 1000;
  cfg.d_grid = {0.0, 0.2, 0.4, 0.45};
  cfg.replications = paper_scale ? 10000 : 2000;
  cfg.k_grid.clear();
  if (name == "figure1") {
    cfg.experiment_kind = ExperimentKind::mse;
    cfg.alpha_grid = {1.0, 2.0};
    cfg.tau = 1.0;
    for (long k = 10; k <= 500; k += 10) cfg.k_grid.push_back(k);
    if (paper_scale) cfg.replications = 10000;
    return cfg;
  }
  if (name == "figure2" || name == "figure3") {
    cfg.experiment_kind = ExperimentKind::hill_plot;
    cfg.alpha_grid = {2.0};
    // Figure 3: the running text says tau = 0.05 or 2 while the caption says
    // tau = 1; the preset follows the caption, tau stays overridable.
    cfg.tau = (name == "figure2") ? 0.05 : 1.0;
    cfg.replications = 1;  // single-path semantics
    for (long k = 5; k <= 995; k += 5) cfg.k_grid.push_back(k);
    return cfg;
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected figure1, figure2 or figure3)");
}

}  // namespace lmsv
