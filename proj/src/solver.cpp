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

#include "augpdg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "augpdg/lyapunov.hpp"
#include "augpdg/report.hpp"

namespace augpdg {

std::vector<std::string> validate(const SolverConfig& c) {
  if (!(c.alpha > 0.0)) throw InputError("solver: alpha must be positive");
  if (!(c.rho > 0.0)) throw InputError("solver: rho must be positive");
  if (c.max_iters < 0) throw InputError("solver: max_iters must be >= 0");
  if (!(c.stop_tol >= 0.0)) throw InputError("solver: stop_tol must be >= 0");
  if (c.record_every < 1) throw InputError("solver: record_every must be >= 1");
  if (!(c.divergence_bound > 0.0)) {
    throw InputError("solver: divergence_bound must be positive");
  }
  std::vector<std::string> warnings;
  if (c.alpha > c.rho) {
    warnings.push_back("alpha > rho: multipliers may leave the nonnegative orthant");
  }
  return warnings;
}

double KktResidual::max() const {
  return std::max({stationarity, primal_infeas, dual_infeas, complementarity,
                   fixed_point_gap});
}

KktResidual kkt_residual(const AugLagrangianEval& e, const Vec& lambda,
                         double rho) {
  (void)rho;  // already folded into e.shifted
  const Vec& g = e.constraints.values;
  KktResidual r;
  r.stationarity =
      (e.objective_grad + e.constraints.jacobian.transpose() * lambda).norm();
  r.primal_infeas = g.size() ? std::max(0.0, g.maxCoeff()) : 0.0;
  r.dual_infeas = lambda.size() ? std::max(0.0, -lambda.minCoeff()) : 0.0;
  r.complementarity = lambda.size() ? lambda.cwiseProduct(g).cwiseAbs().maxCoeff() : 0.0;
  r.fixed_point_gap = (lambda - e.shifted).norm();
  return r;
}

KktResidual kkt_residual(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                         double rho) {
  return kkt_residual(evaluate(p, x, lambda, Penalty(rho)), lambda, rho);
}

namespace {

bool finite(const AugLagrangianEval& e) {
  return e.grad_x.allFinite() && e.grad_lambda.allFinite() &&
         e.constraints.values.allFinite() && e.objective_grad.allFinite();
}

// lambda + alpha (s - lambda) / rho, written as a combination of lambda and
// s = [rho g + lambda]_+ so that alpha <= rho keeps the result >= 0 under
// rounding as well.
Vec dual_update(const Vec& lambda, const AugLagrangianEval& e, const SolverConfig& c) {
  const double t = c.alpha / c.rho;
  return (1.0 - t) * lambda + t * e.shifted;
}

std::string stepsize_hint(const SolverConfig& c) {
  return "the iteration is only guaranteed to converge for alpha below the "
         "certified bound (run `augpdg certify`); alpha = " +
         format_double(c.alpha) + ", rho = " + format_double(c.rho);
}

}  // namespace

IterateState step(const ProblemSpec& p, const IterateState& s,
                  const SolverConfig& c) {
  const AugLagrangianEval e = evaluate(p, s.x, s.lambda, Penalty(c.rho));
  if (!finite(e)) {
    throw NumericError("non-finite oracle value at iteration " + std::to_string(s.k),
                       s.k);
  }
  IterateState next{s.k + 1, s.x - c.alpha * e.grad_x,
                    dual_update(s.lambda, e, c)};
  if (!next.x.allFinite() || !next.lambda.allFinite()) {
    throw NumericError("non-finite iterate at iteration " + std::to_string(next.k),
                       next.k);
  }
  return next;
}

Trace run(const ProblemSpec& p, const SolverConfig& c, const Vec& x0,
          const Vec& lambda0, const std::optional<RunReference>& reference) {
  Trace trace;
  trace.warnings = validate(c);
  require_size(x0, p.n(), "run: x0");
  require_size(lambda0, p.m(), "run: lambda0");
  if ((lambda0.array() < 0.0).any()) {
    throw InputError("run: lambda0 must be componentwise nonnegative");
  }
  if (reference) {
    require_size(reference->x_star, p.n(), "run: reference x*");
    require_size(reference->lambda_star, p.m(), "run: reference lambda*");
  }

  const Penalty rho(c.rho);
  IterateState s{0, x0, lambda0};
  bool warned_box = false;

  auto record = [&](const AugLagrangianEval& e) {
    TraceEntry entry{s.k, s.x, s.lambda, kkt_residual(e, s.lambda, c.rho), {}, {}, true};
    if (reference) {
      const Vec dx = s.x - reference->x_star;
      const Vec dl = s.lambda - reference->lambda_star;
      entry.dist_to_ref = stacked_norm(dx, dl);
      if (reference->lyapunov) {
        entry.lyapunov = lyapunov_form(dx, dl, reference->lyapunov->jacobian,
                                       reference->lyapunov->delta);
      }
    }
    entry.in_box = !p.box() || p.box()->contains(s.x, 1e-9);
    trace.entries.push_back(std::move(entry));
  };

  for (;;) {
    const AugLagrangianEval e = evaluate(p, s.x, s.lambda, rho);
    if (!finite(e)) {
      trace.status = RunStatus::kDiverged;
      trace.diagnostic = "non-finite oracle value at iteration " +
                         std::to_string(s.k) + "; " + stepsize_hint(c);
      break;
    }
    if (p.box() && !p.box()->contains(s.x, 1e-9)) {
      trace.left_box = true;
      if (!warned_box) {
        trace.warnings.push_back("iterate left the operating box at k = " +
                                 std::to_string(s.k) +
                                 "; declared constants may not hold there");
        warned_box = true;
      }
    }
    const KktResidual kkt = kkt_residual(e, s.lambda, c.rho);
    const bool converged = kkt.stationarity + kkt.fixed_point_gap <= c.stop_tol;
    const bool last = converged || s.k >= c.max_iters;
    if (s.k % c.record_every == 0 || last) record(e);
    if (converged) {
      trace.status = RunStatus::kConverged;
      break;
    }
    if (last) {
      trace.status = RunStatus::kMaxIterations;
      break;
    }

    IterateState next{s.k + 1, s.x - c.alpha * e.grad_x,
                      dual_update(s.lambda, e, c)};
    if (!next.x.allFinite() || !next.lambda.allFinite() ||
        next.x.norm() > c.divergence_bound ||
        next.lambda.norm() > c.divergence_bound) {
      // Keep the last finite state in the trace.
      if (trace.entries.empty() || trace.entries.back().k != s.k) record(e);
      s = std::move(next);
      trace.status = RunStatus::kDiverged;
      trace.diagnostic = "divergence guard tripped at iteration " +
                         std::to_string(s.k) + " (|x| or |lambda| > " +
                         format_double(c.divergence_bound) + "); " +
                         stepsize_hint(c);
      break;
    }
    s = std::move(next);
  }
  trace.final_state = s;
  return trace;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kConverged:
      return "converged";
    case RunStatus::kMaxIterations:
      return "max_iters";
    case RunStatus::kDiverged:
      return "diverged";
  }
  return "unknown";
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "k,fixed_point_gap,stationarity,primal_infeas,complementarity,"
         "dist_to_ref,lyapunov\n";
  for (const TraceEntry& e : trace.entries) {
    out << e.k << ',' << format_double(e.kkt.fixed_point_gap) << ','
        << format_double(e.kkt.stationarity) << ','
        << format_double(e.kkt.primal_infeas) << ','
        << format_double(e.kkt.complementarity) << ','
        << (e.dist_to_ref ? format_double(*e.dist_to_ref) : "") << ','
        << (e.lyapunov ? format_double(*e.lyapunov) : "") << '\n';
  }
}

}  // namespace augpdg
