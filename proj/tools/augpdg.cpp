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


// augpdg command-line front end: solve, certify, bench, check.

#include <CLI11.hpp>

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "augpdg/bench.hpp"
#include "augpdg/certificate.hpp"
#include "augpdg/oracle.hpp"
#include "augpdg/problem_io.hpp"
#include "augpdg/report.hpp"
#include "augpdg/solver.hpp"

namespace fs = std::filesystem;
using namespace augpdg;

namespace {

enum Exit : int {
  kOk = 0,
  kInputError = 1,
  kNotConverged = 2,  // solve hit max_iters; bench had a failed run
  kDiverged = 3,
  kCertificateFailed = 4,
  kContradiction = 5,
};

struct CliConfig {
  std::string command;
  std::string input;
  fs::path out_dir = "augpdg_out";
  double alpha = 0.1;
  double rho = 0.1;
  long max_iters = 100000;
  double stop_tol = 1e-10;
  std::uint64_t seed = 20220101;
  bool quiet = false;

  std::optional<double> d0;
  double safety = 0.9;
  std::string a1 = "proof";

  std::vector<double> d0_multipliers{0.1, 5.0, 10.0};
  int seeds_per_case = 10;
  long bench_max_iters = 20000;
  unsigned threads = 0;

  int samples = 2000;
};

void log(const CliConfig& cfg, const std::string& msg) {
  if (!cfg.quiet) std::cerr << cfg.command << ": " << msg << '\n';
}

std::ofstream open_artifact(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw InputError("cannot write " + (dir / name).string());
  return out;
}

std::string format_vec(const Vec& v) {
  std::string s = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + "]";
}

SolverConfig solver_config(const CliConfig& cfg) {
  SolverConfig c;
  c.alpha = cfg.alpha;
  c.rho = cfg.rho;
  c.max_iters = cfg.max_iters;
  c.stop_tol = cfg.stop_tol;
  return c;
}

PrimalDual default_initial(const ProblemFile& file) {
  if (file.initial) return *file.initial;
  const Box& box = file.problem.box();
  return {0.5 * (box.lo + box.hi), Vec::Zero(file.problem.m())};
}

struct ResolvedReference {
  Vec x_star;
  Vec lambda_star;
  std::string source;
};

// Reference KKT pair: from the file, else the grid oracle (n <= 3), else a
// converged solver run with the current flags.
ResolvedReference resolve_reference(const CliConfig& cfg, const ProblemFile& file,
                                    const ProblemSpec& spec) {
  if (file.reference) return {file.reference->x, file.reference->lambda, "file"};
  if (spec.n() <= 3) {
    const ReferenceSolution ref = grid_solve(spec, file.problem.box(), 201);
    return {ref.x_star, ref.lambda_star, "grid_solve"};
  }
  log(cfg, "no reference in file; solving for one");
  const PrimalDual init = default_initial(file);
  const Trace trace = run(spec, solver_config(cfg), init.x, init.lambda);
  if (trace.status != RunStatus::kConverged) {
    throw InputError("no reference in file and the solver did not converge (" +
                     std::string(to_string(trace.status)) + ")");
  }
  return {trace.final_state.x, trace.final_state.lambda, "solve"};
}

int cmd_solve(const CliConfig& cfg) {
  const ProblemFile file = read_problem_file(cfg.input);
  const ProblemSpec spec = file.problem.spec();
  const SolverConfig sc = solver_config(cfg);
  const PrimalDual init = default_initial(file);

  std::optional<RunReference> ref;
  if (file.reference) ref = RunReference{file.reference->x, file.reference->lambda, {}};
  const Trace trace = run(spec, sc, init.x, init.lambda, ref);
  for (const auto& w : trace.warnings) log(cfg, "warning: " + w);

  {
    std::ofstream out = open_artifact(cfg.out_dir, "trace.csv");
    write_trace_csv(trace, out);
  }
  {
    const KktResidual kkt =
        kkt_residual(spec, trace.final_state.x, trace.final_state.lambda, sc.rho);
    std::ofstream out = open_artifact(cfg.out_dir, "solution.txt");
    out << "status = " << to_string(trace.status) << '\n'
        << "iterations = " << trace.final_state.k << '\n'
        << "x = " << format_vec(trace.final_state.x) << '\n'
        << "lambda = " << format_vec(trace.final_state.lambda) << '\n'
        << "stationarity = " << format_double(kkt.stationarity) << '\n'
        << "primal_infeas = " << format_double(kkt.primal_infeas) << '\n'
        << "dual_infeas = " << format_double(kkt.dual_infeas) << '\n'
        << "complementarity = " << format_double(kkt.complementarity) << '\n'
        << "fixed_point_gap = " << format_double(kkt.fixed_point_gap) << '\n'
        << "left_box = " << (trace.left_box ? "true" : "false") << '\n';
  }

  switch (trace.status) {
    case RunStatus::kConverged:
      log(cfg, "converged in " + std::to_string(trace.final_state.k) + " iterations");
      return kOk;
    case RunStatus::kMaxIterations:
      log(cfg, "stopped at max_iters = " + std::to_string(sc.max_iters));
      return kNotConverged;
    case RunStatus::kDiverged:
      log(cfg, "diverged: " + trace.diagnostic);
      return kDiverged;
  }
  return kNotConverged;
}

int cmd_certify(const CliConfig& cfg) {
  const ProblemFile file = read_problem_file(cfg.input);
  const ProblemSpec spec = file.problem.spec();
  const ResolvedReference ref = resolve_reference(cfg, file, spec);
  const double ref_norm = stacked_norm(ref.x_star, ref.lambda_star);
  const double d0 = cfg.d0.value_or(ref_norm > 0.0 ? ref_norm : 1.0);

  CertificateOptions opts;
  opts.safety = cfg.safety;
  if (cfg.a1 == "statement") opts.a1 = A1Variant::kStatement;

  const RateCertificate cert =
      build_certificate(spec, ref.x_star, ref.lambda_star, cfg.rho, d0, opts);
  std::ofstream out = open_artifact(cfg.out_dir, "certificate.txt");
  out << "reference_source = " << ref.source << '\n' << cert.to_report();
  log(cfg, "gamma = " + format_double(cert.rate.gamma) +
               ", alpha_max = " + format_double(cert.alpha_max));
  if (cfg.alpha > cert.alpha_max) {
    log(cfg, "note: --alpha " + format_double(cfg.alpha) +
                 " exceeds the certified alpha_max");
  }
  return kOk;
}

int cmd_bench(const CliConfig& cfg) {
  ExperimentPlan plan;
  plan.rho = cfg.rho;
  plan.alpha = cfg.alpha;
  plan.d0_multipliers = cfg.d0_multipliers;
  plan.seeds_per_case = cfg.seeds_per_case;
  plan.max_iters = cfg.bench_max_iters;
  plan.stop_tol = cfg.stop_tol;
  plan.master_seed = cfg.seed;
  plan.threads = cfg.threads;

  log(cfg, "running " + std::to_string(plan.d0_multipliers.size() *
                                       static_cast<std::size_t>(plan.seeds_per_case)) +
               " runs");
  const ExperimentReport report = run_experiment(plan);
  write_experiment(report, cfg.out_dir);

  int failed = 0;
  for (const RunRecord& r : report.runs) {
    if (r.status != RunStatus::kConverged) ++failed;
  }
  log(cfg, std::to_string(report.runs.size() - static_cast<std::size_t>(failed)) + "/" +
               std::to_string(report.runs.size()) + " runs converged");
  return failed == 0 ? kOk : kNotConverged;
}

// Declared constants must be consistent with sampled estimates: mu may not
// exceed the (upper) growth estimate, l, L_gi and B_gi may not fall below the
// (lower) sampled estimates.
int cmd_check(const CliConfig& cfg) {
  const ProblemFile file = read_problem_file(cfg.input);
  const ProblemSpec spec = file.problem.spec();
  const Box& box = file.problem.box();

  Vec center = 0.5 * (box.lo + box.hi);
  try {
    center = resolve_reference(cfg, file, spec).x_star;
  } catch (const std::exception& e) {
    log(cfg, std::string("warning: growth checked around the box center: ") + e.what());
  }
  const double radius = 0.5 * (box.hi - box.lo).norm();
  const double mu_est = estimate_mu(spec, center, cfg.samples, radius > 0.0 ? radius : 1.0,
                                    mix_seed(cfg.seed, 1));
  const SmoothnessEstimate sm =
      estimate_smoothness(spec, box, cfg.samples, mix_seed(cfg.seed, 2));

  constexpr double kRelTol = 1e-9;
  int contradictions = 0;
  std::ostringstream report;
  auto row = [&](const std::string& name, double declared, double estimate,
                 bool declared_is_upper_bound) {
    const double slack = kRelTol * std::max(1.0, std::abs(estimate));
    const bool ok = declared_is_upper_bound ? declared >= estimate - slack
                                            : declared <= estimate + slack;
    if (!ok) ++contradictions;
    report << name << " declared = " << format_double(declared)
           << " estimate = " << format_double(estimate) << ' '
           << (ok ? "ok" : "CONTRADICTED") << '\n';
  };
  row("mu", spec.mu(), mu_est, false);
  row("l_smooth", spec.l_smooth(), sm.l_smooth, true);
  for (Index i = 0; i < spec.m(); ++i) {
    const auto& d = spec.constraint_smoothness()[static_cast<std::size_t>(i)];
    const auto& e = sm.constraints[static_cast<std::size_t>(i)];
    row("L_g" + std::to_string(i), d.lipschitz, e.lipschitz, true);
    row("B_g" + std::to_string(i), d.grad_bound, e.grad_bound, true);
  }

  std::ofstream out = open_artifact(cfg.out_dir, "check.txt");
  out << report.str();
  log(cfg, contradictions == 0
               ? "declared constants consistent with estimates"
               : std::to_string(contradictions) + " declared constant(s) contradicted");
  return contradictions == 0 ? kOk : kContradiction;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig cfg;
  CLI::App app{"Augmented primal-dual gradient solver and rate certificates"};
  app.require_subcommand(1);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "stepsize")->check(CLI::PositiveNumber);
    sub->add_option("--rho", cfg.rho, "penalty parameter")->check(CLI::PositiveNumber);
    sub->add_option("--stop-tol", cfg.stop_tol, "stationarity + fixed-point gap tolerance")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("-q,--quiet", cfg.quiet, "no progress on stderr");
  };

  CLI::App* solve = app.add_subcommand("solve", "run the iteration on a problem file");
  CLI::App* certify = app.add_subcommand("certify", "compute the rate certificate");
  CLI::App* bench = app.add_subcommand("bench", "run the power-flow benchmark");
  CLI::App* check = app.add_subcommand("check", "check declared constants against estimates");
  for (CLI::App* sub : {solve, certify, bench, check}) common(sub);
  for (CLI::App* sub : {solve, certify, check}) {
    sub->add_option("--max-iters", cfg.max_iters, "iteration limit")->check(CLI::PositiveNumber);
    sub->add_option("FILE", cfg.input, "problem file (JSON)")->required();
  }

  certify->add_option("--d0", cfg.d0, "initial distance (default |(x*, lambda*)|)")
      ->check(CLI::PositiveNumber);
  certify->add_option("--safety", cfg.safety, "fraction of the delta and alpha bounds")
      ->check(CLI::Range(0.0, 1.0));
  certify->add_option("--a1", cfg.a1, "a1 definition")
      ->check(CLI::IsMember({"proof", "statement"}));

  bench->add_option("--max-iters", cfg.bench_max_iters, "iteration limit per run")
      ->check(CLI::PositiveNumber);
  bench->add_option("--d0", cfg.d0_multipliers,
                    "initial distances as multiples of |(x*, lambda*)|")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seeds-per-case", cfg.seeds_per_case, "runs per distance")
      ->check(CLI::PositiveNumber);
  bench->add_option("--threads", cfg.threads, "worker threads (0: all cores)");

  check->add_option("--samples", cfg.samples, "estimator samples")
      ->check(CLI::Range(2, 10000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "solve") return cmd_solve(cfg);
    if (cfg.command == "certify") return cmd_certify(cfg);
    if (cfg.command == "bench") return cmd_bench(cfg);
    return cmd_check(cfg);
  } catch (const CertificateError& e) {
    std::cerr << cfg.command << ": " << e.constant() << ": " << e.what() << '\n';
    return kCertificateFailed;
  } catch (const NumericError& e) {
    std::cerr << cfg.command << ": " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << cfg.command << ": " << e.what() << '\n';
    return kInputError;
  }
}
