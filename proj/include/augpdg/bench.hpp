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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "augpdg/oracle.hpp"
#include "augpdg/structured_problem.hpp"

namespace augpdg {

/// Power-flow instance: 2n primal variables, n quadratic and 2n affine
/// (box) constraints, see powerflow_problem().
struct PowerFlowInstance {
  Index n = 0;
  Vec S;
  Vec p_v;
  StructuredProblem problem;
  ProblemSpec spec;
};

PowerFlowInstance make_powerflow_instance(const Vec& S, const Vec& p_v);

/// n = 10, S = (2.7, 1.35, 2.7, 1.35, 2.025, 2.025, 2.7, 2.7, 1.35, 2.025),
/// p_v = 4 S.
PowerFlowInstance build_paper_instance();

struct InitialPoint {
  Vec x0;
  Vec lambda0;
  int attempts = 1;
};

/// Random (x0, lambda0) with lambda0 >= 0 at stacked distance exactly d0
/// from (x*, lambda*): a uniform direction scaled to d0, the multiplier
/// block clamped to the orthant, and the primal block rescaled to restore
/// the distance. Draws again from the next substream when the primal block
/// cannot absorb the clamp (at most 100 attempts).
InitialPoint sample_initial(const ReferenceSolution& ref, double d0,
                            std::uint64_t seed);

struct ExperimentPlan {
  double rho = 0.1;
  double alpha = 0.1;
  std::vector<double> d0_multipliers{0.1, 5.0, 10.0};
  int seeds_per_case = 10;
  long max_iters = 20000;
  double stop_tol = 1e-10;
  std::uint64_t master_seed = 20220101;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct PhaseRates {
  double early = 0.0;
  double late = 0.0;
};

/// Geometric-mean per-iteration contraction of `dist` over the first and
/// the last tenth of the recorded iterations (at least one step each).
PhaseRates phase_rates(const std::vector<double>& dist);

struct RunRecord {
  Index multiplier_index = 0;
  double d0_multiplier = 0.0;
  int seed_index = 0;
  std::uint64_t seed = 0;
  long iters = 0;
  double final_kkt = 0.0;
  double final_primal_error = 0.0;  // |x_K - x*|
  PhaseRates rates;
  RunStatus status = RunStatus::kMaxIterations;
  bool left_box = false;
  std::vector<double> norm_dist;  // |(x_k - x*, lambda_k - lambda*)| / |(x*, lambda*)|
};

struct ExperimentReport {
  ExperimentPlan plan;
  ReferenceSolution reference;
  std::vector<RunRecord> runs;  // ordered by (multiplier index, seed index)

  bool all_converged() const;
};

/// Runs every (d0 multiplier, seed) case on the built-in ten-bus instance. Runs are
/// independent and may execute concurrently; the report order and contents
/// depend only on the plan.
ExperimentReport run_experiment(const ExperimentPlan& plan);

/// Header d0_multiplier,seed,iters,final_kkt,early_rate,late_rate,status.
void write_summary(const ExperimentReport& report, std::ostream& out);
/// Header k,norm_dist.
void write_run_csv(const RunRecord& run, std::ostream& out);
/// Long format: d0_multiplier,seed,k,norm_dist.
void write_plot_data(const ExperimentReport& report, std::ostream& out);

/// summary.csv, plot_data.csv and runs/run_<multiplier>_<seed>.csv under
/// `dir`.
void write_experiment(const ExperimentReport& report,
                      const std::filesystem::path& dir);

}  // namespace augpdg
