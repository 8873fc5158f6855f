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

#include <optional>
#include <variant>
#include <vector>

#include "augpdg/problem.hpp"

namespace augpdg {

/// g(x) = 1/2 x^T A x + b^T x + d with A symmetric PSD.
struct QuadraticConstraint {
  Mat A;
  Vec b;
  double d = 0.0;
};

/// g(x) = a^T x - beta.
struct AffineConstraint {
  Vec a;
  double beta = 0.0;
};

using StructuredConstraint = std::variant<QuadraticConstraint, AffineConstraint>;

/// Constants a problem file may declare instead of having them derived.
/// Empty members fall back to the derived values.
struct DeclaredConstants {
  std::optional<double> mu;
  std::optional<double> l_smooth;
  std::vector<ConstraintSmoothness> constraints;
};

struct DerivedConstants {
  double mu = 0.0;
  double l_smooth = 0.0;
  std::vector<ConstraintSmoothness> constraints;
};

/// Quadratic objective f(x) = 1/2 x^T H x + c^T x + r with quadratic or
/// affine inequality constraints, valid over an operating box.
class StructuredProblem {
 public:
  StructuredProblem(Mat H, Vec c, double r,
                    std::vector<StructuredConstraint> constraints, Box box,
                    std::optional<DeclaredConstants> declared = std::nullopt);

  Index n() const { return c_.size(); }
  Index m() const { return static_cast<Index>(constraints_.size()); }
  const Mat& H() const { return H_; }
  const Vec& c() const { return c_; }
  double r() const { return r_; }
  const std::vector<StructuredConstraint>& constraints() const {
    return constraints_;
  }
  const Box& box() const { return box_; }
  const std::optional<DeclaredConstants>& declared() const { return declared_; }

  ValueGrad objective(const Vec& x) const;
  ValueGrad constraint(Index i, const Vec& x) const;

  /// mu = lambda_min(H), l = lambda_max(H), L_gi = lambda_max(A_i) (0 for
  /// affine), B_gi = upper bound of |A_i x + b_i| over the box from exact
  /// per-component interval ranges (|a_i| for affine).
  DerivedConstants derived_constants() const;

  /// Oracle view. Declared constants take precedence over derived ones.
  ProblemSpec spec() const;

 private:
  Mat H_;
  Vec c_;
  double r_;
  std::vector<StructuredConstraint> constraints_;
  Box box_;
  std::optional<DeclaredConstants> declared_;
};

/// Per-bus power-flow problem on x = (p_1..p_n, q_1..q_n):
///   f(x) = sum_i (p_i - p_v,i)^2 + q_i^2
///   g_i      = p_i^2 + q_i^2 - S_i   <= 0   (i = 0..n-1)
///   g_{n+i}  = -p_i                  <= 0
///   g_{2n+i} = p_i - p_v,i           <= 0
/// The operating box is the bounding box of the feasible set:
/// p_i in [0, min(sqrt(S_i), p_v,i)], q_i in [-sqrt(S_i), sqrt(S_i)].
StructuredProblem powerflow_problem(const Vec& S, const Vec& p_v);

}  // namespace augpdg
