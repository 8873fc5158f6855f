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

#include "augpdg/problem.hpp"

#include <algorithm>
#include <cmath>

namespace augpdg {

bool Box::contains(const Vec& x, double tol) const {
  if (x.size() != lo.size()) return false;
  return ((x.array() >= lo.array() - tol) && (x.array() <= hi.array() + tol))
      .all();
}

Vec Box::sample(Rng& rng) const {
  Vec x(dim());
  for (Index i = 0; i < dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

ProblemSpec::ProblemSpec(Index n, Oracle objective,
                         std::vector<Oracle> constraints, double mu,
                         double l_smooth,
                         std::vector<ConstraintSmoothness> constraint_smoothness,
                         std::optional<Box> box)
    : n_(n),
      objective_(std::move(objective)),
      constraints_(std::move(constraints)),
      mu_(mu),
      l_smooth_(l_smooth),
      smoothness_(std::move(constraint_smoothness)),
      box_(std::move(box)) {
  if (n_ < 1) throw InputError("problem: n must be >= 1");
  if (constraints_.empty()) throw InputError("problem: m must be >= 1");
  if (smoothness_.size() != constraints_.size()) {
    throw InputError("problem: one smoothness pair per constraint required");
  }
  if (!(mu_ > 0.0)) throw InputError("problem: mu must be positive");
  if (!(l_smooth_ > 0.0)) throw InputError("problem: l_smooth must be positive");
  for (std::size_t i = 0; i < smoothness_.size(); ++i) {
    // Zero is a valid bound (affine or constant constraints).
    if (!(smoothness_[i].lipschitz >= 0.0) || !(smoothness_[i].grad_bound >= 0.0)) {
      throw InputError("problem: constraint " + std::to_string(i) +
                       " smoothness constants must be nonnegative");
    }
  }
  if (box_ && (box_->lo.size() != n_ || box_->hi.size() != n_ ||
               (box_->lo.array() > box_->hi.array()).any())) {
    throw InputError("problem: box must have lo <= hi of length n");
  }
}

double ProblemSpec::L_g() const {
  double sum = 0.0;
  for (const auto& s : smoothness_) sum += s.lipschitz * s.lipschitz;
  return std::sqrt(sum);
}

double ProblemSpec::B_g() const {
  double sum = 0.0;
  for (const auto& s : smoothness_) sum += s.grad_bound * s.grad_bound;
  return std::sqrt(sum);
}

ValueGrad eval_objective(const ProblemSpec& p, const Vec& x) {
  require_size(x, p.n(), "eval_objective: x");
  ValueGrad out = p.objective()(x);
  require_size(out.grad, p.n(), "objective oracle gradient");
  return out;
}

ConstraintEval eval_constraints(const ProblemSpec& p, const Vec& x) {
  require_size(x, p.n(), "eval_constraints: x");
  ConstraintEval out{Vec(p.m()), Mat(p.m(), p.n())};
  for (Index i = 0; i < p.m(); ++i) {
    ValueGrad gi = p.constraint(i)(x);
    require_size(gi.grad, p.n(), "constraint oracle gradient");
    out.values[i] = gi.value;
    out.jacobian.row(i) = gi.grad.transpose();
  }
  return out;
}

Vec central_difference(const std::function<double(const Vec&)>& fn,
                       const Vec& x, double h) {
  Vec grad(x.size());
  Vec probe = x;
  for (Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double up = fn(probe);
    probe[j] = x[j] - h;
    const double down = fn(probe);
    probe[j] = x[j];
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

namespace {

double gradient_error(const Oracle& oracle, const Vec& x, double h) {
  const Vec fd = central_difference(
      [&](const Vec& y) { return oracle(y).value; }, x, h);
  const Vec exact = oracle(x).grad;
  return (fd - exact).norm() / std::max(exact.norm(), 1.0);
}

}  // namespace

FiniteDiffReport finite_diff_check(const ProblemSpec& p, const Vec& x,
                                   double h) {
  require_size(x, p.n(), "finite_diff_check: x");
  if (!(h > 0.0)) throw InputError("finite_diff_check: h must be positive");
  FiniteDiffReport report;
  report.objective_error = gradient_error(p.objective(), x, h);
  report.max_error = report.objective_error;
  for (Index i = 0; i < p.m(); ++i) {
    const double e = gradient_error(p.constraint(i), x, h);
    report.constraint_errors.push_back(e);
    report.max_error = std::max(report.max_error, e);
  }
  return report;
}

}  // namespace augpdg
