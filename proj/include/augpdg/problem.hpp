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

#include <functional>
#include <optional>
#include <vector>

#include "augpdg/core.hpp"

namespace augpdg {

struct ValueGrad {
  double value = 0.0;
  Vec grad;
};

/// x -> (h(x), grad h(x)). Must be a pure function of x.
using Oracle = std::function<ValueGrad(const Vec&)>;

/// Declared regularity of one constraint g_i: grad g_i is `lipschitz`-
/// Lipschitz and |grad g_i| <= `grad_bound` on the operating region.
struct ConstraintSmoothness {
  double lipschitz = 0.0;
  double grad_bound = 0.0;
};

/// Axis-aligned operating region [lo, hi].
struct Box {
  Vec lo;
  Vec hi;

  Index dim() const { return lo.size(); }
  bool contains(const Vec& x, double tol = 0.0) const;
  /// Uniform sample inside the box.
  Vec sample(Rng& rng) const;
};

/// Problem min f(x) s.t. g_i(x) <= 0, i = 1..m, given as oracles together
/// with the regularity constants the convergence analysis needs.
///
/// Constants for quadratic constraints only hold on a bounded region, so a
/// problem may carry an operating box; solver runs that leave it are flagged.
class ProblemSpec {
 public:
  ProblemSpec(Index n, Oracle objective, std::vector<Oracle> constraints,
              double mu, double l_smooth,
              std::vector<ConstraintSmoothness> constraint_smoothness,
              std::optional<Box> box = std::nullopt);

  Index n() const { return n_; }
  Index m() const { return static_cast<Index>(constraints_.size()); }
  double mu() const { return mu_; }
  double l_smooth() const { return l_smooth_; }
  const std::vector<ConstraintSmoothness>& constraint_smoothness() const {
    return smoothness_;
  }
  const std::optional<Box>& box() const { return box_; }

  /// sqrt(sum_i L_gi^2).
  double L_g() const;
  /// sqrt(sum_i B_gi^2).
  double B_g() const;

  const Oracle& objective() const { return objective_; }
  const Oracle& constraint(Index i) const { return constraints_[i]; }

 private:
  Index n_;
  Oracle objective_;
  std::vector<Oracle> constraints_;
  double mu_;
  double l_smooth_;
  std::vector<ConstraintSmoothness> smoothness_;
  std::optional<Box> box_;
};

struct ConstraintEval {
  Vec values;    // g(x), length m
  Mat jacobian;  // m x n, row i = grad g_i(x)^T
};

ValueGrad eval_objective(const ProblemSpec& p, const Vec& x);
ConstraintEval eval_constraints(const ProblemSpec& p, const Vec& x);

struct FiniteDiffReport {
  double objective_error = 0.0;
  std::vector<double> constraint_errors;
  double max_error = 0.0;
};

/// Compares oracle gradients against central differences with step h.
/// Errors are |fd - grad| / max(|grad|, 1).
FiniteDiffReport finite_diff_check(const ProblemSpec& p, const Vec& x,
                                   double h);

/// Central-difference gradient of a scalar function.
Vec central_difference(const std::function<double(const Vec&)>& fn,
                       const Vec& x, double h);

}  // namespace augpdg
