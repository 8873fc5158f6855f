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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "augpdg/lagrangian.hpp"

namespace augpdg {

struct SolverConfig {
  double alpha = 0.1;  // stepsize, 0 < alpha <= rho keeps lambda >= 0
  double rho = 0.1;    // penalty
  long max_iters = 100000;
  double stop_tol = 1e-10;  // on stationarity + fixed_point_gap
  long record_every = 1;
  double divergence_bound = 1e12;  // on |x_k| and |lambda_k|
};

/// Throws InputError on invalid values. Returns warnings for settings the
/// iteration tolerates but the analysis does not cover (alpha > rho).
std::vector<std::string> validate(const SolverConfig& c);

struct IterateState {
  long k = 0;
  Vec x;
  Vec lambda;
};

struct KktResidual {
  double stationarity = 0.0;     // |grad f + J^T lambda|
  double primal_infeas = 0.0;    // |[g]_+|_inf
  double dual_infeas = 0.0;      // |[-lambda]_+|_inf
  double complementarity = 0.0;  // max_i |lambda_i g_i|
  double fixed_point_gap = 0.0;  // |lambda - [rho g + lambda]_+|

  double max() const;
  bool is_kkt(double tol) const { return max() <= tol; }
};

KktResidual kkt_residual(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                         double rho);
KktResidual kkt_residual(const AugLagrangianEval& e, const Vec& lambda,
                         double rho);

/// One simultaneous primal-descent / dual-ascent step with both gradients
/// taken at (x_k, lambda_k). Throws NumericError on non-finite values.
IterateState step(const ProblemSpec& p, const IterateState& s,
                  const SolverConfig& c);

struct LyapunovSpec {
  Mat jacobian;  // full constraint Jacobian at x*
  double delta = 0.0;
};

struct RunReference {
  Vec x_star;
  Vec lambda_star;
  std::optional<LyapunovSpec> lyapunov;
};

struct TraceEntry {
  long k = 0;
  Vec x;
  Vec lambda;
  KktResidual kkt;
  std::optional<double> dist_to_ref;  // sqrt(|x - x*|^2 + |lambda - lambda*|^2)
  std::optional<double> lyapunov;
  bool in_box = true;
};

enum class RunStatus { kConverged, kMaxIterations, kDiverged };

const char* to_string(RunStatus s);

struct Trace {
  std::vector<TraceEntry> entries;
  RunStatus status = RunStatus::kMaxIterations;
  IterateState final_state;
  bool left_box = false;
  std::vector<std::string> warnings;
  std::string diagnostic;  // set when the run diverged
};

/// Iterates from (x0, lambda0) until stationarity + fixed_point_gap <=
/// stop_tol, max_iters, or the divergence guard. Records k = 0, every
/// record_every-th iterate and the final one. A diverged run keeps its
/// partial trace and names the stepsize bound in `diagnostic`.
/// Throws InputError if lambda0 has a negative component.
Trace run(const ProblemSpec& p, const SolverConfig& c, const Vec& x0,
          const Vec& lambda0,
          const std::optional<RunReference>& reference = std::nullopt);

/// Header: k,fixed_point_gap,stationarity,primal_infeas,complementarity,
/// dist_to_ref,lyapunov. Missing optional values are left empty.
void write_trace_csv(const Trace& trace, std::ostream& out);

}  // namespace augpdg
