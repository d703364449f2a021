// lmsv: long-memory stochastic volatility simulation and tail-index tooling.
//
// Subcommands: simulate, hermite, tep, hill, regime, experiment.
// Exit codes: 0 success, 1 usage/configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lmsv/experiments.hpp"
#include "lmsv/hermite.hpp"
#include "lmsv/regimes.hpp"
#include "lmsv/result_table.hpp"
#include "lmsv/tep.hpp"

namespace {

using namespace lmsv;

// --- small IO helpers -------------------------------------------------------

void write_text(const std::string& path_or_dash, const std::string& text) {
  if (path_or_dash == "-" || path_or_dash.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path_or_dash, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path_or_dash);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path_or_dash);
}

std::vector<std::vector<double>> read_columns_csv(const std::string& path,
                                                  std::size_t expect_cols) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty input: " + path);
  // header line is required and skipped
  std::vector<std::vector<double>> cols(expect_cols);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::size_t c = 0;
    while (std::getline(ls, field, ',')) {
      if (c >= expect_cols)
        throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": too many columns");
      try {
        cols[c].push_back(std::stod(field));
      } catch (const std::exception&) {
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": cannot parse number '" + field + "'");
      }
      ++c;
    }
    if (c != expect_cols)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(expect_cols) + " columns, got " +
                                  std::to_string(c));
  }
  return cols;
}

NoiseSpec make_noise(const std::string& family, double alpha, double c, double beta) {
  if (family == "pareto") return NoiseSpec::pareto(alpha, c);
  if (family == "pareto_second_order") return NoiseSpec::pareto_second_order(alpha, beta, c);
  if (family == "log_perturbed") return NoiseSpec::log_perturbed(alpha);
  throw std::invalid_argument("unknown noise family: " + family);
}

// --- subcommand setup -------------------------------------------------------

struct SimulateArgs {
  double hurst = 0.75;
  std::string generator = "fgn";
  long n = 1024;
  std::uint64_t seed = 1;
  std::string output = "-";
};

void run_simulate(const SimulateArgs& a) {
  LrdSpec spec;
  if (a.generator == "fgn")
    spec = LrdSpec::fgn(a.hurst);
  else if (a.generator == "arfima")
    spec = LrdSpec::arfima(a.hurst - 0.5);
  else if (a.generator == "iid")
    spec = LrdSpec::iid();
  else
    throw std::invalid_argument("unknown generator: " + a.generator);
  const GaussianPath path = simulate(spec, static_cast<std::size_t>(a.n), a.seed);
  std::ostringstream os;
  os << "x\n";
  for (double v : path.values) os << format_double(v) << "\n";
  write_text(a.output, os.str());
}

struct HermiteArgs {
  std::string family = "exp";
  double a = 1.0;
  int degree = 2;
  int max_order = 12;
  std::string output = "-";
};

void run_hermite(const HermiteArgs& h) {
  std::function<double(double)> g;
  if (h.family == "exp") {
    const double a = h.a;
    g = [a](double x) { return std::exp(a * x); };
  } else if (h.family == "power") {
    const int p = h.degree;
    g = [p](double x) { return std::pow(x, p); };
  } else {
    throw std::invalid_argument("unknown hermite family: " + h.family);
  }
  const HermiteExpansion e = expand(g, h.max_order);
  std::ostringstream os;
  os << "m,c_m\n";
  for (int m = 0; m <= e.max_order; ++m) os << m << ',' << format_double(e.coeff(m)) << "\n";
  write_text(h.output, os.str());
  if (e.rank_found)
    std::cerr << "rank = " << e.rank << "\n";
  else
    std::cerr << "rank undetected up to M = " << e.max_order << "\n";
}

struct TepArgs {
  std::string input;
  long k = 100;
  double alpha = 2.0;
  double grid_max = 4.0;
  std::size_t grid_points = 9;
  bool decompose = false;
  double tau = 0.0;
  double u_n = 0.0;
  std::string noise = "pareto";
  double c = 1.0;
  double beta = 1.0;
  std::string output = "-";
};

void run_tep(const TepArgs& t) {
  std::ostringstream os;
  if (!t.decompose) {
    auto cols = read_columns_csv(t.input, 1);
    Sample sample;
    sample.y = std::move(cols[0]);
    const TailGrid grid = TailGrid::linear(t.grid_max, t.grid_points);
    const TepCurve curve = random_level_tep(sample, t.k, grid, t.alpha);
    os << "s,tilde_T,centered\n";
    for (std::size_t i = 0; i < grid.s.size(); ++i)
      os << format_double(grid.s[i]) << ',' << format_double(curve.tilde_t[i]) << ','
         << format_double(curve.centered[i]) << "\n";
    write_text(t.output, os.str());
    return;
  }
  if (!(t.u_n > 0)) throw std::invalid_argument("--decompose requires --u-n > 0");
  auto cols = read_columns_csv(t.input, 3);
  Sample sample;
  sample.y = std::move(cols[0]);
  sample.latent_x = std::move(cols[1]);
  sample.latent_z = std::move(cols[2]);
  const TailModel model(VolatilitySpec::exp_scaled(t.tau),
                        make_noise(t.noise, t.alpha, t.c, t.beta));
  const double fbar = model.survival_y(t.u_n);
  const TailGrid grid = TailGrid::linear(t.grid_max, t.grid_points);
  const Decomposition dec = decompose(sample, t.u_n, fbar, grid, model);
  os << "s,r_n,s_n\n";
  for (std::size_t i = 0; i < grid.s.size(); ++i)
    os << format_double(grid.s[i]) << ',' << format_double(dec.r_n[i]) << ','
       << format_double(dec.s_n[i]) << "\n";
  write_text(t.output, os.str());
}

struct HillArgs {
  std::string input;
  long k = 10;
};

void run_hill(const HillArgs& h) {
  auto cols = read_columns_csv(h.input, 1);
  Sample sample;
  sample.y = std::move(cols[0]);
  std::printf("%.6f\n", hill(sample, h.k));
}

struct RegimeArgs {
  long n = 10000;
  long k = 100;
  double hurst = 0.9;
  int q = 1;
  double threshold_low = 0.1;
  double threshold_high = 10.0;
  bool csv = false;
};

void run_regime(const RegimeArgs& r) {
  const LrdSpec lrd = r.hurst == 0.5 ? LrdSpec::iid() : LrdSpec::fgn(r.hurst);
  const RegimeReport report =
      classify(r.n, r.k, lrd, r.q, ZoneThresholds{r.threshold_low, r.threshold_high});
  if (r.csv) {
    std::cout << "product,zone,w_n,rho_n,q,borderline\n" << report.to_csv_row() << "\n";
  } else {
    std::cout << report.to_key_value();
  }
}

struct ExperimentArgs {
  std::string config_path;
  std::string preset;
  std::optional<std::string> kind;
  std::optional<long> n;
  std::optional<long> replications;
  std::optional<std::uint64_t> master_seed;
  std::optional<double> tau;
  std::optional<std::string> d_grid;
  std::optional<std::string> alpha_grid;
  std::optional<std::string> k_grid;
  std::string out_dir;
  bool paper_scale = false;
  int threads = 1;
};

void run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  if (!a.preset.empty())
    cfg = preset_config(a.preset, a.paper_scale);
  else if (!a.config_path.empty())
    cfg = parse_config(a.config_path);
  else
    throw std::invalid_argument("experiment: provide --config or --preset");
  // flag overrides take precedence over the file/preset
  if (a.kind) cfg.experiment_kind = experiment_kind_from_name(*a.kind);
  if (a.n) cfg.n = *a.n;
  if (a.replications) cfg.replications = *a.replications;
  if (a.paper_scale && a.preset.empty()) cfg.replications = 10000;
  if (a.master_seed) cfg.master_seed = *a.master_seed;
  if (a.tau) cfg.tau = *a.tau;
  auto parse_list = [](const std::string& text, auto parse_one) {
    std::vector<decltype(parse_one(std::string{}))> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(parse_one(item));
    return out;
  };
  if (a.d_grid)
    cfg.d_grid = parse_list(*a.d_grid, [](const std::string& s) { return std::stod(s); });
  if (a.alpha_grid)
    cfg.alpha_grid = parse_list(*a.alpha_grid, [](const std::string& s) { return std::stod(s); });
  if (a.k_grid)
    cfg.k_grid = parse_list(*a.k_grid, [](const std::string& s) { return std::stol(s); });
  if (!a.out_dir.empty()) {
    cfg.output_dir = a.out_dir;
  } else if (const char* env = std::getenv("LMSV_OUTPUT_DIR")) {
    cfg.output_dir = env;
  }
  cfg.validate();

  const std::string echo = serialize_config(cfg);
  std::cout << "# effective configuration\n" << echo;
  std::filesystem::create_directories(cfg.output_dir);
  write_text((std::filesystem::path(cfg.output_dir) / "config_echo.txt").string(), echo);

  RunOptions opts;
  opts.workers = a.threads;
  const ResultTable table = run_experiment(cfg, opts);
  for (const std::string& p : emit(table, EmitFormat::csv, cfg.output_dir))
    std::cout << "wrote " << p << "\n";
  for (const std::string& p : emit(table, EmitFormat::svg, cfg.output_dir))
    std::cout << "wrote " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"long-memory stochastic volatility: simulation, tail empirical processes, "
               "Hill estimation, regime classification"};
  app.require_subcommand(1);
  // keep -h free so --h can alias --hurst
  app.set_help_flag("--help", "print help");

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "simulate a stationary Gaussian LRD path");
  c_sim->set_help_flag("--help", "print help");
  c_sim->add_option("--hurst,--h", sim.hurst, "Hurst exponent in (0,1)");
  c_sim->add_option("--generator", sim.generator, "fgn | arfima | iid")
      ->check(CLI::IsMember({"fgn", "arfima", "iid"}));
  c_sim->add_option("--n", sim.n, "path length")->required();
  c_sim->add_option("--seed", sim.seed, "master seed");
  c_sim->add_option("--output,-o", sim.output, "output CSV path ('-' = stdout)");

  HermiteArgs her;
  CLI::App* c_her = app.add_subcommand("hermite", "Hermite expansion of a test function");
  c_her->add_option("--family", her.family, "exp | power")
      ->check(CLI::IsMember({"exp", "power"}));
  c_her->add_option("--a", her.a, "exp(a x) coefficient");
  c_her->add_option("--degree", her.degree, "power degree");
  c_her->add_option("--max-order", her.max_order, "highest Hermite order");
  c_her->add_option("--output,-o", her.output, "output CSV path");

  TepArgs tep;
  CLI::App* c_tep = app.add_subcommand("tep", "tail empirical process curves");
  c_tep->add_option("--input", tep.input, "sample CSV (one column 'y', header required)")
      ->required();
  c_tep->add_option("--k", tep.k, "number of extremes");
  c_tep->add_option("--alpha", tep.alpha, "tail index for centering");
  c_tep->add_option("--grid-max", tep.grid_max, "largest s on the grid");
  c_tep->add_option("--grid-points", tep.grid_points, "grid size");
  c_tep->add_flag("--decompose", tep.decompose,
                  "R_n + S_n decomposition (3-column input: y,x,z)");
  c_tep->add_option("--tau", tep.tau, "volatility exponent for --decompose");
  c_tep->add_option("--u-n", tep.u_n, "deterministic level for --decompose");
  c_tep->add_option("--noise", tep.noise, "pareto | pareto_second_order | log_perturbed");
  c_tep->add_option("--c", tep.c, "noise scale");
  c_tep->add_option("--beta", tep.beta, "second-order exponent");
  c_tep->add_option("--output,-o", tep.output, "output CSV path");

  HillArgs hil;
  CLI::App* c_hil = app.add_subcommand("hill", "Hill estimator of the extreme value index");
  c_hil->add_option("--input", hil.input, "sample CSV (one column 'y', header required)")
      ->required();
  c_hil->add_option("--k", hil.k, "number of extremes")->required();

  RegimeArgs reg;
  CLI::App* c_reg = app.add_subcommand("regime", "classify the i.i.d. / LRD zone");
  c_reg->set_help_flag("--help", "print help");
  c_reg->add_option("--n", reg.n, "sample size")->required();
  c_reg->add_option("--k", reg.k, "number of extremes")->required();
  c_reg->add_option("--hurst,--h", reg.hurst, "Hurst exponent")->required();
  c_reg->add_option("--q", reg.q, "Hermite rank");
  c_reg->add_option("--threshold-low", reg.threshold_low, "iid-zone threshold");
  c_reg->add_option("--threshold-high", reg.threshold_high, "lrd-zone threshold");
  c_reg->add_flag("--csv", reg.csv, "emit a CSV row instead of key = value lines");

  ExperimentArgs exp;
  CLI::App* c_exp = app.add_subcommand("experiment", "run a Monte Carlo experiment");
  c_exp->add_option("--config", exp.config_path, "config file (key = value)");
  c_exp->add_option("--preset", exp.preset, "figure1 | figure2 | figure3");
  auto opt_kind = c_exp->add_option("--kind", "experiment kind override");
  auto opt_n = c_exp->add_option("--n", "sample size override");
  auto opt_reps = c_exp->add_option("--replications", "replication count override");
  auto opt_seed = c_exp->add_option("--master-seed", "master seed override");
  auto opt_tau = c_exp->add_option("--tau", "volatility exponent override");
  auto opt_dg = c_exp->add_option("--d-grid", "comma list of d values");
  auto opt_ag = c_exp->add_option("--alpha-grid", "comma list of alpha values");
  auto opt_kg = c_exp->add_option("--k-grid", "comma list of k values");
  c_exp->add_option("--out-dir", exp.out_dir,
                    "output directory (default: $LMSV_OUTPUT_DIR or config value)");
  c_exp->add_flag("--paper-scale", exp.paper_scale, "replications = 10000");
  c_exp->add_option("--threads", exp.threads, "replication workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c_sim) run_simulate(sim);
    if (*c_her) run_hermite(her);
    if (*c_tep) run_tep(tep);
    if (*c_hil) run_hill(hil);
    if (*c_reg) run_regime(reg);
    if (*c_exp) {
      if (opt_kind->count()) exp.kind = opt_kind->as<std::string>();
      if (opt_n->count()) exp.n = opt_n->as<long>();
      if (opt_reps->count()) exp.replications = opt_reps->as<long>();
      if (opt_seed->count()) exp.master_seed = opt_seed->as<std::uint64_t>();
      if (opt_tau->count()) exp.tau = opt_tau->as<double>();
      if (opt_dg->count()) exp.d_grid = opt_dg->as<std::string>();
      if (opt_ag->count()) exp.alpha_grid = opt_ag->as<std::string>();
      if (opt_kg->count()) exp.k_grid = opt_kg->as<std::string>();
      run_experiment_cmd(exp);
    }
  } catch (const lmsv::quad::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
