#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string out_path = "cli_test_stdout.tmp";
  const std::string cmd =
      std::string(AKS_FLOW_BIN) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_path.c_str());
  return {WEXITSTATUS(status), ss.str()};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("check --list enumerates the battery without running it") {
  RunResult r = run("check --list");
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 9);
  CHECK(r.out.find("structure_invariants") != std::string::npos);
  CHECK(r.out.find("hamiltonian_descent") != std::string::npos);
}

TEST_CASE("simulate with t-end 0 emits a single data row") {
  RunResult r = run("simulate --preset toda --n 2 --t-end 0 --out cli_t0.csv");
  CHECK(r.exit_code == 0);
  std::ifstream in("cli_t0.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "# aks-flow csv v1");
  int rows = 0;
  std::string first_data;
  std::getline(in, line);  // header
  while (std::getline(in, line))
    if (!line.empty()) {
      if (rows == 0) first_data = line;
      ++rows;
    }
  CHECK(rows == 1);
  CHECK(first_data.substr(0, 2) == "0,");
  std::remove("cli_t0.csv");
  std::remove("cli_t0.csv.meta.json");
}

TEST_CASE("simulate row count follows --samples") {
  RunResult r = run(
      "simulate --preset toda --n 2 --t-end 1 --samples 40 --out cli_s.csv");
  CHECK(r.exit_code == 0);
  std::ifstream in("cli_s.csv");
  std::string line;
  int rows = -2;  // version comment + column header
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 40);
  std::remove("cli_s.csv");
  std::remove("cli_s.csv.meta.json");
}

TEST_CASE("unknown preset and malformed flags exit with code 2") {
  CHECK(run("simulate --preset nosuch").exit_code == 2);
  CHECK(run("simulate --no-such-flag").exit_code == 2);
  CHECK(run("simulate --preset toda --sigma0 not-json").exit_code == 2);
  // no partial output file is left behind
  RunResult r =
      run("simulate --preset nosuch --out cli_partial.csv");
  CHECK(r.exit_code == 2);
  std::ifstream probe("cli_partial.csv");
  CHECK(!probe.good());
}

TEST_CASE("compare on a trivial horizon reports zero deviation") {
  RunResult r = run("compare --preset toda --n 2 --t-end 0 --h 1e-3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"sup_deviation\": 0.0") != std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
  {
    std::ofstream cfg("cli_cfg.json");
    cfg << "{\"preset\": \"toda\", \"n\": 2, \"t_end\": 1.0,"
           "\"samples\": 7, \"out\": \"cli_cfg.csv\"}\n";
  }
  RunResult r = run("simulate --config cli_cfg.json --samples 1");
  CHECK(r.exit_code == 0);
  std::ifstream in("cli_cfg.csv");
  std::string line;
  int rows = -2;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 1);  // flag wins over the config's 7
  std::remove("cli_cfg.json");
  std::remove("cli_cfg.csv");
  std::remove("cli_cfg.csv.meta.json");
}
