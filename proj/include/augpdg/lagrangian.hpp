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

#include "augpdg/problem.hpp"

namespace augpdg {

/// Penalty parameter rho > 0 of the augmented Lagrangian.
class Penalty {
 public:
  explicit Penalty(double rho);
  double rho() const { return rho_; }

 private:
  double rho_;
};

/// Componentwise max(v_i, 0).
template <typename Derived>
auto project_nonneg(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseMax(typename Derived::Scalar(0));
}

/// Everything the iteration needs at one primal-dual point, from a single
/// round of oracle calls.
struct AugLagrangianEval {
  double objective = 0.0;
  Vec objective_grad;
  ConstraintEval constraints;
  Vec shifted;  // [rho g(x) + lambda]_+
  double value = 0.0;
  Vec grad_x;
  Vec grad_lambda;
};

/// L(x, lambda) = f(x) + sum_i ([rho g_i + lambda_i]_+^2 - lambda_i^2) / (2 rho)
/// and its partial gradients
///   grad_x      = grad f + sum_i [rho g_i + lambda_i]_+ grad g_i
///   grad_lambda = ([rho g + lambda]_+ - lambda) / rho.
/// At the kink rho g_i + lambda_i = 0 the clamp is exact, giving the value 0.
AugLagrangianEval evaluate(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                           Penalty rho);

double aug_value(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                 Penalty rho);
Vec grad_x(const ProblemSpec& p, const Vec& x, const Vec& lambda, Penalty rho);
Vec grad_lambda(const ProblemSpec& p, const Vec& x, const Vec& lambda,
                Penalty rho);

}  // namespace augpdg
