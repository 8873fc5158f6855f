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

#include "augpdg/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "augpdg/structured_problem.hpp"

namespace augpdg {

const char* to_string(ReferenceMethod m) {
  return m == ReferenceMethod::kAnalytic ? "analytic" : "grid";
}

ReferenceSolution solve_powerflow_analytic(const Vec& S, const Vec& p_v) {
  const StructuredProblem problem = powerflow_problem(S, p_v);
  const ProblemSpec spec = problem.spec();
  const Index n = S.size();

  ReferenceSolution ref;
  ref.x_star = Vec::Zero(2 * n);
  ref.lambda_star = Vec::Zero(3 * n);
  ref.method = ReferenceMethod::kAnalytic;
  for (Index i = 0; i < n; ++i) {
    const double root = std::sqrt(S[i]);
    if (p_v[i] > root) {
      ref.x_star[i] = root;
      ref.lambda_star[i] = (p_v[i] - root) / root;
      continue;
    }
    // Quadratic constraint not binding through the objective: solve the bus
    // on its own.
    ref.method = ReferenceMethod::kGrid;
    const StructuredProblem bus = powerflow_problem(S.segment(i, 1), p_v.segment(i, 1));
    Box box = bus.box();
    box.lo -= Vec::Constant(2, 0.1 * root);
    box.hi += Vec::Constant(2, 0.1 * root);
    const ReferenceSolution local = grid_solve(bus.spec(), box, 201);
    ref.x_star[i] = local.x_star[0];
    ref.x_star[n + i] = local.x_star[1];
    ref.lambda_star[i] = local.lambda_star[0];
    ref.lambda_star[n + i] = local.lambda_star[1];
    ref.lambda_star[2 * n + i] = local.lambda_star[2];
  }
  ref.residual = kkt_residual(spec, ref.x_star, ref.lambda_star, 1.0);
  return ref;
}

namespace {

struct KktCandidate {
  Vec x;
  double objective = 0.0;
};

// Gradient of the Lagrangian restricted to `set`.
Vec lagrangian_grad(const ProblemSpec& p, const std::vector<Index>& set,
                    const Vec& x, const Vec& nu) {
  Vec grad = eval_objective(p, x).grad;
  for (std::size_t j = 0; j < set.size(); ++j) {
    grad += nu[static_cast<Index>(j)] * p.constraint(set[j])(x).grad;
  }
  return grad;
}

// Newton's method on grad f + J_S^T nu = 0, g_S = 0 with a central-difference
// Hessian of the Lagrangian.
std::optional<KktCandidate> solve_active_set(const ProblemSpec& p,
                                             const std::vector<Index>& set,
                                             Vec x) {
  const Index n = p.n();
  const Index s = static_cast<Index>(set.size());
  auto jacobian = [&](const Vec& at) {
    Mat J(s, n);
    for (Index j = 0; j < s; ++j) J.row(j) = p.constraint(set[j])(at).grad.transpose();
    return J;
  };

  Vec nu = Vec::Zero(s);
  if (s > 0) {
    nu = jacobian(x).transpose().colPivHouseholderQr().solve(-eval_objective(p, x).grad);
  }
  for (int iter = 0; iter < 60; ++iter) {
    const Mat J = jacobian(x);
    Vec F(n + s);
    F.head(n) = lagrangian_grad(p, set, x, nu);
    for (Index j = 0; j < s; ++j) F[n + j] = p.constraint(set[j])(x).value;
    const double scale = std::max(1.0, eval_objective(p, x).grad.norm());
    if (!F.allFinite()) return std::nullopt;
    if (F.norm() <= 1e-13 * scale) break;

    Mat K = Mat::Zero(n + s, n + s);
    for (Index k = 0; k < n; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
      Vec up = x, down = x;
      up[k] += h;
      down[k] -= h;
      K.col(k).head(n) =
          (lagrangian_grad(p, set, up, nu) - lagrangian_grad(p, set, down, nu)) / (2 * h);
    }
    K.topLeftCorner(n, n) = 0.5 * (K.topLeftCorner(n, n) + K.topLeftCorner(n, n).transpose()).eval();
    K.topRightCorner(n, s) = J.transpose();
    K.bottomLeftCorner(s, n) = J;
    Eigen::FullPivLU<Mat> lu(K);
    if (!lu.isInvertible()) return std::nullopt;
    const Vec delta = lu.solve(-F);
    x += delta.head(n);
    nu += delta.tail(s);
  }

  const ConstraintEval g = eval_constraints(p, x);
  Vec F(n + s);
  F.head(n) = lagrangian_grad(p, set, x, nu);
  for (Index j = 0; j < s; ++j) F[n + j] = g.values[set[j]];
  const double scale = std::max(1.0, eval_objective(p, x).grad.norm());
  if (!(F.norm() <= 1e-9 * scale)) return std::nullopt;
  if (g.values.maxCoeff() > 1e-9) return std::nullopt;
  if (s > 0 && nu.minCoeff() < -1e-9) return std::nullopt;
  return KktCandidate{x, eval_objective(p, x).value};
}

// All subsets of `pool` with at most `max_size` elements, smallest first.
std::vector<std::vector<Index>> subsets(const std::vector<Index>& pool,
                                        std::size_t max_size) {
  std::vector<std::vector<Index>> out{{}};
  for (std::size_t size = 1; size <= std::min(max_size, pool.size()); ++size) {
    std::vector<bool> pick(pool.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(size), true);
    do {
      std::vector<Index> set;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pick[i]) set.push_back(pool[i]);
      }
      out.push_back(std::move(set));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

Vec fit_multipliers(const ProblemSpec& p, const Vec& x) {
  const ConstraintEval g = eval_constraints(p, x);
  std::vector<Index> near;
  for (Index i = 0; i < p.m(); ++i) {
    if (std::abs(g.values[i]) <= 1e-5) near.push_back(i);
  }
  Vec lambda = Vec::Zero(p.m());
  if (near.empty()) return lambda;
  const Mat JA = g.jacobian(near, Eigen::all);
  const Vec fit = JA.transpose().colPivHouseholderQr().solve(-eval_objective(p, x).grad);
  for (std::size_t j = 0; j < near.size(); ++j) {
    const double v = fit[static_cast<Index>(j)];
    // Rounding-level negatives are zero multipliers.
    lambda[near[j]] = (v < 0.0 && v > -1e-10) ? 0.0 : v;
  }
  return lambda;
}

}  // namespace

ReferenceSolution grid_solve(const ProblemSpec& p, const Box& box,
                             int resolution) {
  const Index n = p.n();
  if (n > 3) throw InputError("grid_solve: n must be <= 3");
  if (resolution < 2) throw InputError("grid_solve: resolution must be >= 2");
  if (box.dim() != n) throw InputError("grid_solve: box dimension mismatch");

  Index total = 1;
  for (Index k = 0; k < n; ++k) total *= resolution;
  const Vec spacing = (box.hi - box.lo) / static_cast<double>(resolution - 1);

  Vec best;
  double best_f = std::numeric_limits<double>::infinity();
  Vec x(n);
  for (Index flat = 0; flat < total; ++flat) {
    Index rest = flat;
    for (Index k = 0; k < n; ++k) {
      x[k] = box.lo[k] + spacing[k] * static_cast<double>(rest % resolution);
      rest /= resolution;
    }
    bool feasible = true;
    for (Index i = 0; i < p.m() && feasible; ++i) feasible = p.constraint(i)(x).value <= 0.0;
    if (!feasible) continue;
    const double f = p.objective()(x).value;
    if (f < best_f) {
      best_f = f;
      best = x;
    }
  }
  if (best.size() == 0) throw InputError("grid_solve: no feasible grid point");

  // Constraints that could be active within a couple of grid cells.
  const ConstraintEval g = eval_constraints(p, best);
  const double reach = 2.0 * spacing.norm() + 1e-12;
  std::vector<std::pair<double, Index>> ranked;
  for (Index i = 0; i < p.m(); ++i) {
    if (g.values[i] >= -(g.jacobian.row(i).norm() * reach + 1e-12)) {
      ranked.emplace_back(g.values[i], i);
    }
  }
  std::sort(ranked.begin(), ranked.end(), std::greater<>());
  if (ranked.size() > 12) ranked.resize(12);
  std::vector<Index> pool;
  for (const auto& r : ranked) pool.push_back(r.second);
  std::sort(pool.begin(), pool.end());

  std::optional<KktCandidate> chosen;
  for (const auto& set : subsets(pool, static_cast<std::size_t>(n))) {
    auto cand = solve_active_set(p, set, best);
    if (cand && (!chosen || cand->objective < chosen->objective)) chosen = std::move(cand);
  }

  ReferenceSolution ref;
  ref.method = ReferenceMethod::kGrid;
  ref.x_star = chosen ? chosen->x : best;
  ref.lambda_star = fit_multipliers(p, ref.x_star);
  ref.residual = kkt_residual(p, ref.x_star, ref.lambda_star, 1.0);
  return ref;
}

double estimate_mu(const ProblemSpec& p, const Vec& x_star, int samples,
                   double radius, std::uint64_t seed) {
  require_size(x_star, p.n(), "estimate_mu: x*");
  if (samples < 1) throw InputError("estimate_mu: samples must be >= 1");
  if (!(radius > 0.0)) throw InputError("estimate_mu: radius must be positive");
  Rng rng(seed);
  const Vec g_star = eval_objective(p, x_star).grad;
  const double dim = static_cast<double>(p.n());
  double est = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Vec dir = rng.unit_vector(p.n());
    double r = radius * std::pow(rng.uniform(), 1.0 / dim);
    if (r <= 0.0) r = radius;
    const Vec dx = r * dir;
    const Vec diff = eval_objective(p, x_star + dx).grad - g_star;
    est = std::min(est, diff.dot(dx) / dx.squaredNorm());
  }
  return est;
}

SmoothnessEstimate estimate_smoothness(const ProblemSpec& p, const Box& box,
                                       int samples, std::uint64_t seed) {
  if (samples < 2) throw InputError("estimate_smoothness: samples must be >= 2");
  if (box.dim() != p.n()) throw InputError("estimate_smoothness: box dimension mismatch");
  Rng rng(seed);
  SmoothnessEstimate est;
  est.constraints.assign(static_cast<std::size_t>(p.m()), {0.0, 0.0});
  for (int s = 0; s < samples; ++s) {
    const Vec x = box.sample(rng);
    const Vec y = box.sample(rng);
    const double dist = (x - y).norm();
    if (dist > 0.0) {
      est.l_smooth = std::max(
          est.l_smooth, (eval_objective(p, x).grad - eval_objective(p, y).grad).norm() / dist);
    }
    for (Index i = 0; i < p.m(); ++i) {
      const Vec gx = p.constraint(i)(x).grad;
      const Vec gy = p.constraint(i)(y).grad;
      auto& c = est.constraints[static_cast<std::size_t>(i)];
      if (dist > 0.0) c.lipschitz = std::max(c.lipschitz, (gx - gy).norm() / dist);
      c.grad_bound = std::max({c.grad_bound, gx.norm(), gy.norm()});
    }
  }
  return est;
}

}  // namespace augpdg
