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

#include "augpdg/lagrangian.hpp"

namespace augpdg {

Penalty::Penalty(double rho) : rho_(rho) {
  if (!(rho > 0.0)) throw InputError("penalty rho must be positive");
}

AugLagrangianEval evaluate(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                           Penalty rho) {
  require_size(x, p.n(), "augmented Lagrangian: x");
  require_size(lambda, p.m(), "augmented Lagrangian: lambda");
  const double r = rho.rho();

  AugLagrangianEval e;
  ValueGrad f = eval_objective(p, x);
  e.objective = f.value;
  e.objective_grad = std::move(f.grad);
  e.constraints = eval_constraints(p, x);
  e.shifted = project_nonneg(r * e.constraints.values + lambda);

  e.value = e.objective +
            (e.shifted.squaredNorm() - lambda.squaredNorm()) / (2.0 * r);
  e.grad_x = e.objective_grad + e.constraints.jacobian.transpose() * e.shifted;
  e.grad_lambda = (e.shifted - lambda) / r;
  return e;
}

double aug_value(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                 Penalty rho) {
  return evaluate(p, x, lambda, rho).value;
}

Vec grad_x(const ProblemSpec& p, const Vec& x, const Vec& lambda, Penalty rho) {
  return evaluate(p, x, lambda, rho).grad_x;
}

Vec grad_lambda(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                Penalty rho) {
  return evaluate(p, x, lambda, rho).grad_lambda;
}

}  // namespace augpdg
