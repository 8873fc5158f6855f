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

#include "augpdg/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "augpdg/report.hpp"

namespace augpdg {

PowerFlowInstance make_powerflow_instance(const Vec& S, const Vec& p_v) {
  StructuredProblem problem = powerflow_problem(S, p_v);
  ProblemSpec spec = problem.spec();
  return PowerFlowInstance{S.size(), S, p_v, std::move(problem), std::move(spec)};
}

PowerFlowInstance build_paper_instance() {
  Vec S(10);
  S << 2.7, 1.35, 2.7, 1.35, 2.025, 2.025, 2.7, 2.7, 1.35, 2.025;
  return make_powerflow_instance(S, 4.0 * S);
}

InitialPoint sample_initial(const ReferenceSolution& ref, double d0,
                            std::uint64_t seed) {
  if (!(d0 > 0.0)) throw InputError("sample_initial: d0 must be positive");
  const Index n = ref.x_star.size();
  const Index m = ref.lambda_star.size();
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    const Vec dir = rng.unit_vector(n + m);
    const Vec dx = d0 * dir.head(n);
    Vec lambda0 = project_nonneg(ref.lambda_star + d0 * dir.tail(m));
    const double dl2 = (lambda0 - ref.lambda_star).squaredNorm();
    const double dx_norm = dx.norm();
    const double want = std::sqrt(std::max(0.0, d0 * d0 - dl2));
    if (dx_norm <= 0.0) {
      if (want == 0.0) return {ref.x_star, lambda0, attempt + 1};
      continue;
    }
    return {ref.x_star + dx * (want / dx_norm), std::move(lambda0), attempt + 1};
  }
  throw InputError("sample_initial: could not place an initial point in 100 attempts");
}

PhaseRates phase_rates(const std::vector<double>& dist) {
  const std::size_t steps = dist.size() > 0 ? dist.size() - 1 : 0;
  if (steps == 0) return {0.0, 0.0};
  const std::size_t w = std::max<std::size_t>(1, steps / 10);
  auto rate = [&](std::size_t from, std::size_t to) {
    if (dist[from] <= 0.0) return 0.0;
    return std::pow(dist[to] / dist[from], 1.0 / static_cast<double>(to - from));
  };
  return {rate(0, w), rate(steps - w, steps)};
}

bool ExperimentReport::all_converged() const {
  for (const auto& r : runs) {
    if (r.status != RunStatus::kConverged) return false;
  }
  return true;
}

namespace {

RunRecord run_case(const PowerFlowInstance& inst, const ReferenceSolution& ref,
                   const ExperimentPlan& plan, Index mi, int si) {
  RunRecord rec;
  rec.multiplier_index = mi;
  rec.d0_multiplier = plan.d0_multipliers[static_cast<std::size_t>(mi)];
  rec.seed_index = si;
  rec.seed = mix_seed(plan.master_seed,
                      static_cast<std::uint64_t>(mi) * 1000003ULL +
                          static_cast<std::uint64_t>(si));
  const double scale = ref.norm();
  const InitialPoint init = sample_initial(ref, rec.d0_multiplier * scale, rec.seed);

  SolverConfig cfg;
  cfg.alpha = plan.alpha;
  cfg.rho = plan.rho;
  cfg.max_iters = plan.max_iters;
  cfg.stop_tol = plan.stop_tol;
  const Trace trace = run(inst.spec, cfg, init.x0, init.lambda0,
                          RunReference{ref.x_star, ref.lambda_star, std::nullopt});

  rec.status = trace.status;
  rec.left_box = trace.left_box;
  rec.iters = trace.final_state.k;
  rec.norm_dist.reserve(trace.entries.size());
  for (const auto& e : trace.entries) rec.norm_dist.push_back(*e.dist_to_ref / scale);
  if (rec.status == RunStatus::kDiverged || trace.entries.empty()) {
    rec.final_kkt = std::numeric_limits<double>::infinity();
    rec.final_primal_error = std::numeric_limits<double>::infinity();
  } else {
    rec.final_kkt = trace.entries.back().kkt.max();
    rec.final_primal_error = (trace.entries.back().x - ref.x_star).norm();
  }
  rec.rates = phase_rates(rec.norm_dist);
  return rec;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentPlan& plan) {
  if (plan.d0_multipliers.empty()) throw InputError("bench: no d0 multipliers");
  for (std::size_t i = 0; i < plan.d0_multipliers.size(); ++i) {
    if (!(plan.d0_multipliers[i] > 0.0)) {
      throw InputError("bench: d0 multipliers must be positive");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (plan.d0_multipliers[i] == plan.d0_multipliers[j]) {
        throw InputError("bench: d0 multipliers must be distinct");
      }
    }
  }
  if (plan.seeds_per_case < 1) throw InputError("bench: seeds_per_case must be >= 1");

  const PowerFlowInstance inst = build_paper_instance();
  ExperimentReport report;
  report.plan = plan;
  report.reference = solve_powerflow_analytic(inst.S, inst.p_v);

  const std::size_t per_case = static_cast<std::size_t>(plan.seeds_per_case);
  const std::size_t cases = plan.d0_multipliers.size() * per_case;
  report.runs.resize(cases);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cases; c = next++) {
      report.runs[c] = run_case(inst, report.reference, plan,
                                static_cast<Index>(c / per_case),
                                static_cast<int>(c % per_case));
    }
  };
  unsigned threads = plan.threads ? plan.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cases)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  return report;
}

void write_summary(const ExperimentReport& report, std::ostream& out) {
  out << "d0_multiplier,seed,iters,final_kkt,early_rate,late_rate,status\n";
  for (const auto& r : report.runs) {
    out << format_double(r.d0_multiplier) << ',' << r.seed_index << ',' << r.iters
        << ',' << format_double(r.final_kkt) << ',' << format_double(r.rates.early)
        << ',' << format_double(r.rates.late) << ',' << to_string(r.status) << '\n';
  }
}

void write_run_csv(const RunRecord& run, std::ostream& out) {
  out << "k,norm_dist\n";
  for (std::size_t k = 0; k < run.norm_dist.size(); ++k) {
    out << k << ',' << format_double(run.norm_dist[k]) << '\n';
  }
}

void write_plot_data(const ExperimentReport& report, std::ostream& out) {
  out << "d0_multiplier,seed,k,norm_dist\n";
  for (const auto& r : report.runs) {
    const std::string prefix =
        format_double(r.d0_multiplier) + ',' + std::to_string(r.seed_index) + ',';
    for (std::size_t k = 0; k < r.norm_dist.size(); ++k) {
      out << prefix << k << ',' << format_double(r.norm_dist[k]) << '\n';
    }
  }
}

void write_experiment(const ExperimentReport& report,
                      const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "runs");
  auto open = [](const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
  };
  {
    auto out = open(dir / "summary.csv");
    write_summary(report, out);
  }
  {
    auto out = open(dir / "plot_data.csv");
    write_plot_data(report, out);
  }
  for (const auto& r : report.runs) {
    auto out = open(dir / "runs" /
                    ("run_" + std::to_string(r.multiplier_index) + "_" +
                     std::to_string(r.seed_index) + ".csv"));
    write_run_csv(r, out);
  }
}

}  // namespace augpdg
