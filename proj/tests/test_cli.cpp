#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(LMSV_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "lmsv_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate: byte-identical output per seed") {
  TempDir tmp;
  const auto a = tmp.path / "a.csv";
  const auto b = tmp.path / "b.csv";
  const auto c = tmp.path / "c.csv";
  CHECK(run_cli("simulate --h 0.9 --n 1024 --seed 7 -o " + a.string()).exit_code == 0);
  CHECK(run_cli("simulate --h 0.9 --n 1024 --seed 7 -o " + b.string()).exit_code == 0);
  CHECK(run_cli("simulate --h 0.9 --n 1024 --seed 8 -o " + c.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));
  CHECK(slurp(a).substr(0, 2) == "x\n");
}

TEST_CASE("hill subcommand reproduces the hand example") {
  TempDir tmp;
  const auto sample = tmp.path / "sample.csv";
  std::ofstream(sample) << "y\n1\n2\n4\n8\n";
  const CmdResult r = run_cli("hill --input " + sample.string() + " --k 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "1.386294\n");
}

TEST_CASE("hill rejects nonpositive order statistics with exit code 2") {
  TempDir tmp;
  const auto sample = tmp.path / "bad.csv";
  std::ofstream(sample) << "y\n0\n2\n4\n8\n";
  const CmdResult r = run_cli("hill --input " + sample.string() + " --k 3");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("numerical failure") != std::string::npos);
}

TEST_CASE("regime subcommand emits the classification") {
  const CmdResult r = run_cli("regime --n 10000 --k 100 --h 0.9 --q 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("zone = lrd") != std::string::npos);
  CHECK(r.output.find("product = 11.41") != std::string::npos);
}

TEST_CASE("unknown flags are rejected") {
  const CmdResult r = run_cli("regime --n 100 --k 10 --h 0.9 --bogus 3");
  CHECK(r.exit_code == 1);
}

TEST_CASE("tep subcommand: random-level curve") {
  TempDir tmp;
  const auto sample = tmp.path / "sample.csv";
  std::ofstream(sample) << "y\n1\n2\n4\n8\n";
  const CmdResult r = run_cli("tep --input " + sample.string() +
                              " --k 2 --alpha 2 --grid-max 1 --grid-points 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("s,tilde_T,centered") != std::string::npos);
  CHECK(r.output.find("0,1,0") != std::string::npos);       // s = 0
  CHECK(r.output.find("1,0.5,0.25") != std::string::npos);  // s = 1
}

TEST_CASE("tep --decompose on three-column input") {
  TempDir tmp;
  const auto sample = tmp.path / "yxz.csv";
  std::ofstream out(sample);
  out << "y,x,z\n";
  // y = exp(0.5 x) z rows
  out << "2.0,0.0,2.0\n3.2974425414002564,1.0,2.0\n1.2130613194252668,-1.0,2.0\n"
      << "8.0,0.0,8.0\n1.0,0.0,1.0\n";
  out.close();
  const CmdResult r = run_cli("tep --decompose --input " + sample.string() +
                              " --tau 0.5 --alpha 2 --u-n 2 --grid-max 1 --grid-points 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("s,r_n,s_n") != std::string::npos);
}

TEST_CASE("experiment: config errors name the key, echo round-trips") {
  TempDir tmp;
  const auto bad = tmp.path / "bad.cfg";
  std::ofstream(bad) << "n = 1000\nk_grid = 1500\n";
  const CmdResult r = run_cli("experiment --config " + bad.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("k < n") != std::string::npos);

  const auto cfg = tmp.path / "ok.cfg";
  std::ofstream(cfg) << "experiment_kind = mse\nn = 256\nreplications = 20\n"
                     << "master_seed = 42\nd_grid = 0, 0.2\nalpha_grid = 2\n"
                     << "tau = 1\nk_grid = 20, 40\n";
  const auto out1 = tmp.path / "run1";
  const auto out2 = tmp.path / "run2";
  const CmdResult r1 =
      run_cli("experiment --config " + cfg.string() + " --out-dir " + out1.string());
  CHECK(r1.exit_code == 0);
  // re-feed the echoed config: identical results
  const CmdResult r2 = run_cli("experiment --config " + (out1 / "config_echo.txt").string() +
                               " --out-dir " + out2.string());
  CHECK(r2.exit_code == 0);
  CHECK(slurp(out1 / "mse.csv") == slurp(out2 / "mse.csv"));
  // flag overrides beat config values and show up in the echo
  const auto out3 = tmp.path / "run3";
  const CmdResult r3 = run_cli("experiment --config " + cfg.string() + " --out-dir " +
                               out3.string() + " --replications 10");
  CHECK(r3.exit_code == 0);
  CHECK(slurp(out3 / "config_echo.txt").find("replications = 10") != std::string::npos);
}

TEST_CASE("experiment presets are recognized") {
  TempDir tmp;
  // figure1 at tiny replication count for speed
  const CmdResult r = run_cli("experiment --preset figure1 --replications 3 --k-grid 50,100 "
                              "--out-dir " +
                              (tmp.path / "fig1").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("experiment_kind = mse") != std::string::npos);
  CHECK(fs::exists(tmp.path / "fig1" / "mse.csv"));
  CHECK(fs::exists(tmp.path / "fig1" / "mse_1_1.svg"));
  CHECK(fs::exists(tmp.path / "fig1" / "mse_2_1.svg"));
}

TEST_CASE("hermite subcommand emits coefficients") {
  const CmdResult r = run_cli("hermite --family power --degree 2 --max-order 4");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("m,c_m") != std::string::npos);
  CHECK(r.output.find("rank = 2") != std::string::npos);
}
