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

#include "augpdg/structured_problem.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "augpdg/linalg.hpp"

namespace augpdg {

namespace {

void check_psd(const Mat& M, Index n, const std::string& name) {
  if (M.rows() != n || M.cols() != n) {
    throw InputError(name + ": expected " + std::to_string(n) + "x" +
                     std::to_string(n) + " matrix");
  }
  EigExtremes ext;
  try {
    ext = sym_eig_extremes(M);
  } catch (const InputError&) {
    throw InputError(name + " is not symmetric");
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(ext.max));
  if (ext.min < -tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << name << " is not positive semidefinite: smallest eigenvalue "
        << ext.min;
    throw InputError(msg.str());
  }
}

// max |(A x + b)_j| over the box, per component, from interval arithmetic.
double gradient_bound(const Mat& A, const Vec& b, const Box& box) {
  double sum = 0.0;
  for (Index j = 0; j < A.rows(); ++j) {
    double lo = b[j];
    double hi = b[j];
    for (Index k = 0; k < A.cols(); ++k) {
      const double u = A(j, k) * box.lo[k];
      const double v = A(j, k) * box.hi[k];
      lo += std::min(u, v);
      hi += std::max(u, v);
    }
    const double peak = std::max(std::abs(lo), std::abs(hi));
    sum += peak * peak;
  }
  return std::sqrt(sum);
}

}  // namespace

StructuredProblem::StructuredProblem(Mat H, Vec c, double r,
                                     std::vector<StructuredConstraint> constraints,
                                     Box box,
                                     std::optional<DeclaredConstants> declared)
    : H_(std::move(H)),
      c_(std::move(c)),
      r_(r),
      constraints_(std::move(constraints)),
      box_(std::move(box)),
      declared_(std::move(declared)) {
  const Index dim = c_.size();
  if (dim < 1) throw InputError("objective: n must be >= 1");
  check_psd(H_, dim, "objective H");
  if (constraints_.empty()) throw InputError("at least one constraint required");
  for (Index i = 0; i < m(); ++i) {
    const std::string name = "constraint " + std::to_string(i);
    if (const auto* q = std::get_if<QuadraticConstraint>(&constraints_[i])) {
      check_psd(q->A, dim, name + " A");
      require_size(q->b, dim, (name + " b").c_str());
    } else {
      require_size(std::get<AffineConstraint>(constraints_[i]).a, dim,
                   (name + " a").c_str());
    }
  }
  if (box_.lo.size() != dim || box_.hi.size() != dim ||
      (box_.lo.array() > box_.hi.array()).any()) {
    throw InputError("box: lo and hi must have length n with lo <= hi");
  }
  if (declared_ && !declared_->constraints.empty() &&
      static_cast<Index>(declared_->constraints.size()) != m()) {
    throw InputError("declared_constants: need one entry per constraint");
  }
}

ValueGrad StructuredProblem::objective(const Vec& x) const {
  Vec Hx = H_ * x;
  return {0.5 * x.dot(Hx) + c_.dot(x) + r_, Hx + c_};
}

ValueGrad StructuredProblem::constraint(Index i, const Vec& x) const {
  if (const auto* q = std::get_if<QuadraticConstraint>(&constraints_[i])) {
    Vec Ax = q->A * x;
    return {0.5 * x.dot(Ax) + q->b.dot(x) + q->d, Ax + q->b};
  }
  const auto& a = std::get<AffineConstraint>(constraints_[i]);
  return {a.a.dot(x) - a.beta, a.a};
}

DerivedConstants StructuredProblem::derived_constants() const {
  DerivedConstants out;
  const EigExtremes h = sym_eig_extremes(H_);
  out.mu = h.min;
  out.l_smooth = h.max;
  for (const auto& con : constraints_) {
    if (const auto* q = std::get_if<QuadraticConstraint>(&con)) {
      out.constraints.push_back({std::max(0.0, sym_eig_extremes(q->A).max),
                                 gradient_bound(q->A, q->b, box_)});
    } else {
      out.constraints.push_back({0.0, std::get<AffineConstraint>(con).a.norm()});
    }
  }
  return out;
}

ProblemSpec StructuredProblem::spec() const {
  DerivedConstants k = derived_constants();
  if (declared_) {
    if (declared_->mu) k.mu = *declared_->mu;
    if (declared_->l_smooth) k.l_smooth = *declared_->l_smooth;
    if (!declared_->constraints.empty()) k.constraints = declared_->constraints;
  }
  // The oracles share one immutable copy of the problem data.
  auto self = std::make_shared<const StructuredProblem>(*this);
  std::vector<Oracle> cons;
  cons.reserve(constraints_.size());
  for (Index i = 0; i < m(); ++i) {
    cons.emplace_back([self, i](const Vec& x) { return self->constraint(i, x); });
  }
  return ProblemSpec(
      n(), [self](const Vec& x) { return self->objective(x); }, std::move(cons),
      k.mu, k.l_smooth, std::move(k.constraints), box_);
}

StructuredProblem powerflow_problem(const Vec& S, const Vec& p_v) {
  const Index n = S.size();
  if (n < 1 || p_v.size() != n) {
    throw InputError("powerflow_problem: S and p_v must have equal length >= 1");
  }
  if ((S.array() <= 0.0).any() || (p_v.array() <= 0.0).any()) {
    throw InputError("powerflow_problem: S and p_v must be positive");
  }
  const Index dim = 2 * n;
  Mat H = 2.0 * Mat::Identity(dim, dim);
  Vec c = Vec::Zero(dim);
  c.head(n) = -2.0 * p_v;
  const double r = p_v.squaredNorm();

  std::vector<StructuredConstraint> cons;
  for (Index i = 0; i < n; ++i) {
    QuadraticConstraint q{Mat::Zero(dim, dim), Vec::Zero(dim), -S[i]};
    q.A(i, i) = 2.0;
    q.A(n + i, n + i) = 2.0;
    cons.emplace_back(std::move(q));
  }
  for (Index i = 0; i < n; ++i) {
    Vec a = Vec::Zero(dim);
    a[i] = -1.0;
    cons.emplace_back(AffineConstraint{a, 0.0});
  }
  for (Index i = 0; i < n; ++i) {
    Vec a = Vec::Zero(dim);
    a[i] = 1.0;
    cons.emplace_back(AffineConstraint{a, p_v[i]});
  }

  const Vec root = S.array().sqrt();
  Box box{Vec(dim), Vec(dim)};
  box.lo.head(n).setZero();
  box.hi.head(n) = root.cwiseMin(p_v);
  box.lo.tail(n) = -root;
  box.hi.tail(n) = root;
  return StructuredProblem(std::move(H), std::move(c), r, std::move(cons),
                           std::move(box));
}

}  // namespace augpdg
