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

#include <string>
#include <vector>

#include "augpdg/linalg.hpp"
#include "augpdg/lyapunov.hpp"
#include "augpdg/problem.hpp"

namespace augpdg {

/// Partition of the constraints at a reference point x*.
struct ActiveSetInfo {
  std::vector<Index> active;    // |g_i(x*)| <= act_tol
  std::vector<Index> inactive;
  Vec constraint_values;        // g(x*)
  Mat jacobian;                 // full m x n Jacobian at x*
  Mat jacobian_active;          // rows of `jacobian` in `active`
  double kappa = 0.0;           // lambda_min(J_I J_I^T)
};

/// Throws InputError if x* is infeasible beyond act_tol, CertificateError
/// ("kappa") if the active set is empty or its gradients are linearly
/// dependent.
ActiveSetInfo active_set(const ProblemSpec& p, const Vec& x_star,
                         double act_tol = 1e-7);

/// Which definition of a1 to use: kProof gives 2 l^2 + 4 theta1^2 (a bound on
/// the squared primal gradient difference), kStatement gives 2 l + 4 theta1^2.
enum class A1Variant { kProof, kStatement };

struct CertificateOptions {
  double safety = 0.9;   // delta and alpha are this fraction of their bounds
  double act_tol = 1e-7;
  double kkt_tol = 1e-8;  // reference pair must be KKT to this residual
  A1Variant a1 = A1Variant::kProof;
  int max_rounds = 100;   // fixed-point rounds for (pi*, delta, C)
};

/// Constants that do not depend on delta, alpha or pi*.
struct RateConstants {
  double mu = 0.0;
  double l_smooth = 0.0;
  double rho = 0.0;
  double kappa = 0.0;
  double L_g = 0.0;
  double B_g = 0.0;
  double lambda_star_norm = 0.0;
  double theta1 = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
  double b1 = 0.0, b2 = 0.0;
};

RateConstants rate_constants(const ProblemSpec& p,
                                   const ActiveSetInfo& info,
                                   const Vec& lambda_star, double rho,
                                   A1Variant a1 = A1Variant::kProof);

/// safety * min{mu / (2 a3), (1 - pi*) / (2 rho (kappa + 8 B_g^2 +
/// L_g^2 (1 - pi*))), 1 / B_g}. Throws CertificateError("delta") when the
/// bound is not positive.
double compute_delta(const RateConstants& k, double pi_star, double safety);

/// min{1, rho, 2 mu / (b1 + 2 a4 delta), kappa delta / (2 b2 + 4 a5 delta),
/// (1 - pi*) / (2 rho (b2 + 2 a5 delta))}.
double compute_alpha_max(const RateConstants& k, double delta,
                         double pi_star);

struct RateTerms {
  double gamma = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// c1, c2, c3 at stepsize alpha and gamma = min{c1, c2, c3}, kept below 1.
/// Throws CertificateError naming the first nonpositive c_i.
RateTerms compute_gamma(const RateConstants& k, double delta,
                        double pi_star, double alpha);

/// [rho max_{i inactive} g_i(x*) / (sqrt(C) d0) + 1]_+^2, or 0 when every
/// constraint is active.
double compute_pi_star(const ActiveSetInfo& info, double rho, double C,
                       double d0);

/// lambda_max(Q_delta) / lambda_min(Q_delta).
double conditioning_constant(const Mat& jacobian, double delta);

struct RateCertificate {
  RateConstants constants;
  double delta = 0.0;
  double alpha_max = 0.0;
  double alpha = 0.0;  // safety * alpha_max; gamma and c_i evaluated here
  RateTerms rate;
  double C = 1.0;
  double pi_star = 0.0;
  double d0 = 0.0;
  int rounds = 0;
  Index n_active = 0;
  Index n_inactive = 0;
  A1Variant a1_variant = A1Variant::kProof;

  /// C (1 - gamma)^k d0^2: bound on the squared stacked error at iteration k.
  double envelope(long k) const;

  /// One "name = value" line per constant, fixed order.
  std::string to_report() const;
};

/// Assembles every constant for the reference KKT pair (x*, lambda*) and
/// initial distance d0. pi* depends on C, C on delta and delta on pi*; the
/// three are iterated from the value of pi* at delta = B_g^{-1} / 2 until
/// pi* moves by less than 1e-12.
RateCertificate build_certificate(const ProblemSpec& p, const Vec& x_star,
                                  const Vec& lambda_star, double rho, double d0,
                                  const CertificateOptions& opts = {});

/// z^T Q_delta z for z = (x - x*, lambda - lambda*). Throws InputError
/// unless delta |J| < 1, i.e. Q_delta is positive definite.
double lyapunov_value(const Vec& x, const Vec& lambda, const Vec& x_star,
                      const Vec& lambda_star, const Mat& jacobian,
                      double delta);

}  // namespace augpdg
