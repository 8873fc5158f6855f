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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "augpdg/bench.hpp"

using namespace augpdg;
using doctest::Approx;

namespace {

const ReferenceSolution& powerflow_ref() {
  static const ReferenceSolution r = [] {
    const PowerFlowInstance inst = build_paper_instance();
    return solve_powerflow_analytic(inst.S, inst.p_v);
  }();
  return r;
}

ExperimentPlan small_plan(unsigned threads) {
  ExperimentPlan plan;
  plan.d0_multipliers = {0.1, 0.2};
  plan.seeds_per_case = 3;
  plan.max_iters = 2000;
  plan.threads = threads;
  return plan;
}

std::string summary_of(const ExperimentReport& r) {
  std::ostringstream out;
  write_summary(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("build_paper_instance") {
  const PowerFlowInstance inst = build_paper_instance();
  const double S[] = {2.7, 1.35, 2.7, 1.35, 2.025, 2.025, 2.7, 2.7, 1.35, 2.025};
  REQUIRE(inst.n == 10);
  for (Index i = 0; i < 10; ++i) {
    CHECK(inst.S[i] == S[i]);
    CHECK(inst.p_v[i] == 4.0 * S[i]);
  }
  CHECK(inst.S[4] == 2.025);
  CHECK(inst.p_v[4] == Approx(8.1).epsilon(1e-15));
  CHECK(inst.spec.m() == 30);
  CHECK(inst.spec.n() == 20);
}

TEST_CASE("ten-bus optimum is feasible with q* = 0") {
  const PowerFlowInstance inst = build_paper_instance();
  const ReferenceSolution& ref = powerflow_ref();
  const ConstraintEval e = eval_constraints(inst.spec, ref.x_star);
  CHECK(e.values.maxCoeff() <= 1e-14);
  CHECK(ref.x_star.tail(10).isZero(0.0));
  CHECK(ref.residual.max() < 1e-10);
  CHECK(ref.norm() == Approx(15.846310474586572).epsilon(1e-12));
}

TEST_CASE("sample_initial") {
  const ReferenceSolution& ref = powerflow_ref();
  for (double mult : {0.1, 5.0, 10.0}) {
    const double d0 = mult * ref.norm();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const InitialPoint p = sample_initial(ref, d0, seed);
      const double d = stacked_norm(p.x0 - ref.x_star, p.lambda0 - ref.lambda_star);
      CHECK(std::abs(d - d0) <= 1e-9 * d0);
      CHECK((p.lambda0.array() >= 0.0).all());
    }
  }
  const InitialPoint a = sample_initial(ref, 3.0, 77);
  const InitialPoint b = sample_initial(ref, 3.0, 77);
  const InitialPoint c = sample_initial(ref, 3.0, 78);
  CHECK(a.x0 == b.x0);
  CHECK(a.lambda0 == b.lambda0);
  CHECK(a.x0 != c.x0);
  CHECK_THROWS_AS(sample_initial(ref, 0.0, 1), InputError);
}

TEST_CASE("phase_rates") {
  std::vector<double> geo;
  for (int k = 0; k <= 100; ++k) geo.push_back(std::pow(0.9, k));
  const PhaseRates g = phase_rates(geo);
  CHECK(g.early == Approx(0.9).epsilon(1e-12));
  CHECK(g.late == Approx(0.9).epsilon(1e-12));

  // slow for the first half, fast for the second
  std::vector<double> two{1.0};
  for (int k = 1; k <= 100; ++k) two.push_back(two.back() * (k <= 50 ? 0.95 : 0.5));
  const PhaseRates t = phase_rates(two);
  CHECK(t.early == Approx(0.95).epsilon(1e-12));
  CHECK(t.late == Approx(0.5).epsilon(1e-12));

  const PhaseRates empty = phase_rates({1.0});
  CHECK(empty.early == 0.0);
}

TEST_CASE("run_experiment is deterministic across thread counts") {
  const ExperimentReport one = run_experiment(small_plan(1));
  const ExperimentReport many = run_experiment(small_plan(4));
  CHECK(summary_of(one) == summary_of(many));
  REQUIRE(one.runs.size() == 6);
  for (std::size_t i = 0; i < one.runs.size(); ++i) {
    CHECK(one.runs[i].multiplier_index == static_cast<Index>(i / 3));
    CHECK(one.runs[i].seed_index == static_cast<int>(i % 3));
    CHECK(one.runs[i].norm_dist == many.runs[i].norm_dist);
  }
}

TEST_CASE("nearby starts converge to the analytic optimum") {
  const ExperimentReport r = run_experiment(small_plan(0));
  CHECK(r.all_converged());
  for (const RunRecord& run : r.runs) {
    CHECK(run.status == RunStatus::kConverged);
    CHECK(run.final_kkt <= 1e-8);
    CHECK(run.final_primal_error < 1e-6);
    CHECK(run.norm_dist.front() == Approx(run.d0_multiplier).epsilon(1e-9));
    CHECK(static_cast<long>(run.norm_dist.size()) == run.iters + 1);
  }
}

TEST_CASE("plan validation") {
  ExperimentPlan p = small_plan(1);
  p.d0_multipliers = {0.1, 0.1};
  CHECK_THROWS_AS(run_experiment(p), InputError);
  p.d0_multipliers = {-1.0};
  CHECK_THROWS_AS(run_experiment(p), InputError);
  p.d0_multipliers = {};
  CHECK_THROWS_AS(run_experiment(p), InputError);
  p = small_plan(1);
  p.seeds_per_case = 0;
  CHECK_THROWS_AS(run_experiment(p), InputError);
}

TEST_CASE("experiment files") {
  ExperimentPlan plan = small_plan(2);
  plan.d0_multipliers = {0.1};
  plan.seeds_per_case = 2;
  const ExperimentReport r = run_experiment(plan);

  const std::string summary = summary_of(r);
  CHECK(summary.rfind("d0_multiplier,seed,iters,final_kkt,early_rate,late_rate,status\n", 0) ==
        0);
  std::ostringstream run_csv;
  write_run_csv(r.runs[0], run_csv);
  CHECK(run_csv.str().rfind("k,norm_dist\n0,", 0) == 0);
  std::ostringstream plot;
  write_plot_data(r, plot);
  CHECK(plot.str().rfind("d0_multiplier,seed,k,norm_dist\n", 0) == 0);

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "augpdg_test_bench_files";
  std::filesystem::remove_all(dir);
  write_experiment(r, dir);
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "plot_data.csv"));
  CHECK(std::filesystem::exists(dir / "runs" / "run_0_0.csv"));
  CHECK(std::filesystem::exists(dir / "runs" / "run_0_1.csv"));
  std::ifstream in(dir / "summary.csv", std::ios::binary);
  const std::string disk((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(disk == summary);
  std::filesystem::remove_all(dir);
}
