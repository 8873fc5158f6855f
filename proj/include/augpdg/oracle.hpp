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
#include <vector>

#include "augpdg/solver.hpp"

namespace augpdg {

enum class ReferenceMethod { kAnalytic, kGrid };

const char* to_string(ReferenceMethod m);

/// An independently computed KKT pair (x*, lambda*).
struct ReferenceSolution {
  Vec x_star;
  Vec lambda_star;
  ReferenceMethod method = ReferenceMethod::kAnalytic;
  KktResidual residual;

  /// sqrt(|x*|^2 + |lambda*|^2)
  double norm() const { return stacked_norm(x_star, lambda_star); }
};

/// Closed-form KKT pair of powerflow_problem(S, p_v) when every
/// p_v,i > sqrt(S_i): p_i* = sqrt(S_i), q_i* = 0, quadratic multiplier
/// (p_v,i - sqrt(S_i)) / sqrt(S_i), box multipliers 0. Buses violating the
/// precondition are solved by grid_solve on their 2-D subproblem instead.
ReferenceSolution solve_powerflow_analytic(const Vec& S, const Vec& p_v);

/// Brute-force reference for n <= 3: best feasible point of a
/// resolution^n grid over `box`, refined by Newton's method on the KKT
/// system of each candidate active set near it, with multipliers fitted by
/// least squares on constraints with |g_i(x*)| <= 1e-5.
/// Throws InputError if n > 3 or no grid point is feasible.
ReferenceSolution grid_solve(const ProblemSpec& p, const Box& box,
                             int resolution);

/// Minimum over `samples` random points x in the radius-ball around x* of
/// (grad f(x) - grad f(x*))^T (x - x*) / |x - x*|^2. This is an upper
/// estimate of the true growth parameter mu.
double estimate_mu(const ProblemSpec& p, const Vec& x_star, int samples,
                   double radius, std::uint64_t seed);

struct SmoothnessEstimate {
  double l_smooth = 0.0;
  std::vector<ConstraintSmoothness> constraints;
};

/// Largest Lipschitz ratios and gradient norms seen over `samples` random
/// point pairs in `box`. These are lower estimates of the true constants.
SmoothnessEstimate estimate_smoothness(const ProblemSpec& p, const Box& box,
                                       int samples, std::uint64_t seed);

}  // namespace augpdg
