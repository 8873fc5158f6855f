// Copyright 2026 The augpdg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "augpdg/oracle.hpp"
#include "augpdg/problem_io.hpp"

namespace fs = std::filesystem;
using namespace augpdg;

namespace {

const fs::path kScratch = AUGPDG_SCRATCH;
const std::string kData = AUGPDG_DATA_DIR;

struct Result {
  int code;
  std::string err;
};

// Runs the CLI inside `cwd` with stderr captured.
Result cli(const std::string& args, const fs::path& cwd) {
  fs::create_directories(cwd);
  const fs::path err = cwd.parent_path() / (cwd.filename().string() + ".stderr");
  const std::string cmd = "cd '" + cwd.string() + "' && '" AUGPDG_CLI "' " + args +
                          " > /dev/null 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path fresh(const std::string& name) {
  const fs::path p = kScratch / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string value_of(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
  }
  return "";
}

}  // namespace

TEST_CASE("solve: one-dimensional file converges to the grid optimum") {
  const fs::path dir = fresh("solve1");
  const Result r = cli("solve --out out " + kData + "/one_dim.json", dir);
  CHECK(r.code == 0);
  const std::string sol = slurp(dir / "out" / "solution.txt");
  CHECK(value_of(sol, "status") == "converged");
  const ProblemFile file = read_problem_file(kData + "/one_dim.json");
  const ReferenceSolution g = grid_solve(file.problem.spec(), file.problem.box(), 201);
  const std::string x = value_of(sol, "x");
  const double xv = std::stod(x.substr(1));
  CHECK(std::abs(xv - g.x_star[0]) < 1e-8);
  CHECK(slurp(dir / "out" / "trace.csv").rfind("k,fixed_point_gap,", 0) == 0);
}

TEST_CASE("solve: writes nothing outside the output directory") {
  const fs::path dir = fresh("solve_clean");
  CHECK(cli("solve -q --out out " + kData + "/one_dim.json", dir).code == 0);
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename() == "out");
  }
  CHECK(entries == 1);
}

TEST_CASE("solve: exit codes") {
  CHECK(cli("solve --max-iters 5 --out out " + kData + "/one_dim.json", fresh("maxit")).code ==
        2);
  const Result div = cli("solve --alpha 1e3 --out out " + kData + "/powerflow10.json",
                         fresh("diverge"));
  CHECK(div.code == 3);
  CHECK(div.err.find("diverged") != std::string::npos);

  const fs::path bad = fresh("malformed");
  std::ofstream(bad / "bad.json") << "{\n  \"n\": 1,\n  oops\n}\n";
  const Result m = cli("solve --out out bad.json", bad);
  CHECK(m.code == 1);
  CHECK(m.err.find("bad.json:3:") != std::string::npos);
  CHECK(m.err.rfind("solve: ", 0) == 0);

  CHECK(cli("solve --out out missing.json", fresh("missing")).code == 1);
  CHECK(cli("solve --alpha -1 " + kData + "/one_dim.json", fresh("neg")).code == 1);
  CHECK(cli("solve", fresh("nofile")).code == 1);
  CHECK(cli("frobnicate x", fresh("unknown")).code == 1);
  CHECK(cli("solve --stop-tol 1E-8 --alpha 5e-2 --out out " + kData + "/one_dim.json",
            fresh("sci"))
            .code == 0);
}

TEST_CASE("certify: power-flow report") {
  const fs::path a = fresh("certify_a");
  const fs::path b = fresh("certify_b");
  CHECK(cli("certify --out out " + kData + "/powerflow10.json", a).code == 0);
  CHECK(cli("certify --out out " + kData + "/powerflow10.json", b).code == 0);
  const std::string report = slurp(a / "out" / "certificate.txt");
  CHECK(report == slurp(b / "out" / "certificate.txt"));
  int constants = 0;
  for (const char* name : {"kappa", "theta1", "a1", "a2", "a3", "a4", "a5", "b1", "b2",
                           "delta", "alpha_max", "gamma", "C", "pi_star", "d0", "L_g",
                           "B_g"}) {
    constants += !value_of(report, name).empty();
  }
  CHECK(constants == 17);
  const double gamma = std::stod(value_of(report, "gamma"));
  CHECK(gamma > 0.0);
  CHECK(gamma < 1.0);
  CHECK(value_of(report, "reference_source") == "file");
}

TEST_CASE("certify: reference from the grid oracle and LICQ failure") {
  const fs::path g = fresh("certify_grid");
  CHECK(cli("certify --out out " + kData + "/one_dim.json", g).code == 0);
  CHECK(value_of(slurp(g / "out" / "certificate.txt"), "reference_source") == "grid_solve");

  const Result dup = cli("certify --out out " + kData + "/duplicate_constraints.json",
                         fresh("certify_dup"));
  CHECK(dup.code == 4);
  CHECK(dup.err.find("LICQ violated") != std::string::npos);
  CHECK(dup.err.find("kappa") != std::string::npos);
}

TEST_CASE("check: declared constants") {
  CHECK(cli("check --out out " + kData + "/powerflow10.json", fresh("check_pf")).code == 0);

  const fs::path dir = fresh("check_mu");
  std::ofstream(dir / "mu.json") << R"({
    "n": 2,
    "objective": {"H": [[1.0, 0.0], [0.0, 3.0]], "c": [0.0, 0.0], "r": 0.0},
    "constraints": [{"type": "affine", "a": [1.0, 0.0], "beta": 1.0}],
    "box": {"lo": [-1.0, -1.0], "hi": [1.0, 1.0]},
    "declared_constants": {"mu": 2.0}
  })";
  const Result r = cli("check --out out mu.json", dir);
  CHECK(r.code == 5);
  CHECK(slurp(dir / "out" / "check.txt").find("mu declared = 2 estimate = 1") !=
        std::string::npos);
}

TEST_CASE("bench: small plan") {
  const fs::path dir = fresh("bench_small");
  CHECK(cli("bench -q --d0 0.1 0.3 --seeds-per-case 2 --out out", dir).code == 0);
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  CHECK(fs::exists(dir / "out" / "runs" / "run_1_1.csv"));
  CHECK(cli("bench -q --d0 0.1 0.1 --out out", fresh("bench_dup")).code == 1);
}

TEST_CASE("bench: default plan") {
  const fs::path dir = fresh("bench_default");
  const Result r = cli("bench -q --out out", dir);
  const std::string summary = slurp(dir / "out" / "summary.csv");
  int rows = 0;
  for (char c : summary) rows += c == '\n';
  CHECK(rows == 31);
  CHECK(r.code == 0);
}
