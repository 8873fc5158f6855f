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

#include "augpdg/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "augpdg/report.hpp"
#include "augpdg/solver.hpp"

namespace augpdg {

ActiveSetInfo active_set(const ProblemSpec& p, const Vec& x_star,
                         double act_tol) {
  require_size(x_star, p.n(), "active_set: x*");
  ConstraintEval g = eval_constraints(p, x_star);
  if (g.values.maxCoeff() > act_tol) {
    throw InputError("active_set: x* is infeasible (max g_i = " +
                     format_double(g.values.maxCoeff()) + ")");
  }
  ActiveSetInfo info;
  for (Index i = 0; i < p.m(); ++i) {
    (std::abs(g.values[i]) <= act_tol ? info.active : info.inactive).push_back(i);
  }
  info.constraint_values = std::move(g.values);
  info.jacobian = std::move(g.jacobian);
  info.jacobian_active = info.jacobian(info.active, Eigen::all);

  if (info.active.empty()) {
    throw CertificateError("kappa", "no active constraints at x*: kappa undefined");
  }
  const Mat gram = info.jacobian_active * info.jacobian_active.transpose();
  const EigExtremes ext = sym_eig_extremes(gram);
  info.kappa = ext.min;
  if (info.kappa <= 1e-12 * std::max(1.0, ext.max)) {
    throw CertificateError("kappa", "LICQ violated: active constraint gradients "
                                    "are linearly dependent (kappa = " +
                                        format_double(info.kappa) + ")");
  }
  return info;
}

RateConstants rate_constants(const ProblemSpec& p,
                                   const ActiveSetInfo& info,
                                   const Vec& lambda_star, double rho,
                                   A1Variant a1) {
  require_size(lambda_star, p.m(), "rate_constants: lambda*");
  RateConstants k;
  k.mu = p.mu();
  k.l_smooth = p.l_smooth();
  k.rho = rho;
  k.kappa = info.kappa;
  k.L_g = p.L_g();
  k.B_g = p.B_g();
  k.lambda_star_norm = lambda_star.norm();

  const double l = k.l_smooth;
  const double B2 = k.B_g * k.B_g;
  const double r2 = rho * rho;
  k.theta1 = rho * B2 + k.L_g * k.lambda_star_norm;
  const double t2 = k.theta1 * k.theta1;
  k.a1 = (a1 == A1Variant::kProof ? 2.0 * l * l : 2.0 * l) + 4.0 * t2;
  k.a2 = 4.0 * B2;
  k.a3 = 2.0 * B2 * l * l / k.kappa + 2.0 * B2 * t2 / k.kappa +
         2.0 * B2 / (k.kappa * r2) + k.kappa * B2 * r2 / 4.0;
  k.a4 = B2 * l * l / 2.0 + B2 * t2 + 2.0 * B2;
  k.a5 = B2 + 2.0 / r2;
  k.b1 = k.a1 + 2.0 * B2;
  k.b2 = k.a2 + 2.0 / r2;

  const std::pair<const char*, double> positive[] = {
      {"mu", k.mu}, {"kappa", k.kappa}, {"B_g", k.B_g}, {"rho", rho},
      {"a3", k.a3}, {"b1", k.b1},       {"b2", k.b2}};
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw CertificateError(name, std::string("certificate constant ") + name +
                                       " must be positive and finite, got " +
                                       format_double(value));
    }
  }
  return k;
}

double compute_delta(const RateConstants& k, double pi_star, double safety) {
  if (!(safety > 0.0 && safety < 1.0)) {
    throw InputError("compute_delta: safety must lie in (0, 1)");
  }
  const double slack = 1.0 - pi_star;
  const double bound = std::min(
      {k.mu / (2.0 * k.a3),
       slack / (2.0 * k.rho *
                (k.kappa + 8.0 * k.B_g * k.B_g + k.L_g * k.L_g * slack)),
       1.0 / k.B_g});
  if (!(bound > 0.0)) {
    throw CertificateError("delta", "delta bound is not positive (" +
                                        format_double(bound) +
                                        "); pi* = " + format_double(pi_star));
  }
  return safety * bound;
}

double compute_alpha_max(const RateConstants& k, double delta,
                         double pi_star) {
  const double slack = 1.0 - pi_star;
  const std::pair<const char*, double> terms[] = {
      {"1", 1.0},
      {"rho", k.rho},
      {"2mu/(b1+2a4delta)", 2.0 * k.mu / (k.b1 + 2.0 * k.a4 * delta)},
      {"kappa*delta/(2b2+4a5delta)",
       k.kappa * delta / (2.0 * k.b2 + 4.0 * k.a5 * delta)},
      {"(1-pi*)/(2rho(b2+2a5delta))",
       slack / (2.0 * k.rho * (k.b2 + 2.0 * k.a5 * delta))}};
  double out = terms[0].second;
  for (const auto& [name, value] : terms) {
    if (!(value > 0.0)) {
      throw CertificateError("alpha_max", std::string("stepsize bound term ") +
                                              name + " is not positive (" +
                                              format_double(value) + ")");
    }
    out = std::min(out, value);
  }
  return out;
}

RateTerms compute_gamma(const RateConstants& k, double delta,
                        double pi_star, double alpha) {
  const double a = alpha;
  const double d = delta;
  RateTerms t;
  t.c1 = k.mu * a - k.a3 * d * a - k.b1 * a * a / 2.0 - k.a4 * d * a * a;
  t.c2 = k.kappa * d * a / 4.0 - k.b2 * a * a / 2.0 - k.a5 * d * a * a;
  t.c3 = a / (2.0 * k.rho) * (1.0 - pi_star) -
         (d * a * k.kappa + k.b2 * a * a + 2.0 * k.a5 * d * a * a) / 2.0 -
         4.0 * a * d * k.B_g * k.B_g;
  const std::pair<const char*, double> cs[] = {{"c1", t.c1}, {"c2", t.c2}, {"c3", t.c3}};
  for (const auto& [name, value] : cs) {
    if (!(value > 0.0)) {
      throw CertificateError(name, std::string("rate term ") + name +
                                       " is not positive (" + format_double(value) +
                                       "): alpha = " + format_double(alpha) +
                                       " is too large");
    }
  }
  t.gamma = std::min({t.c1, t.c2, t.c3, std::nextafter(1.0, 0.0)});
  return t;
}

double compute_pi_star(const ActiveSetInfo& info, double rho, double C,
                       double d0) {
  if (!(d0 > 0.0)) throw InputError("compute_pi_star: d0 must be positive");
  if (!(C >= 1.0)) throw InputError("compute_pi_star: C must be >= 1");
  if (info.inactive.empty()) return 0.0;
  double gmax = -std::numeric_limits<double>::infinity();
  for (Index i : info.inactive) gmax = std::max(gmax, info.constraint_values[i]);
  const double v = std::max(0.0, rho * gmax / (std::sqrt(C) * d0) + 1.0);
  return v * v;
}

double conditioning_constant(const Mat& jacobian, double delta) {
  const EigExtremes ext = sym_eig_extremes(q_delta(jacobian, delta));
  if (!(ext.min > 0.0)) {
    throw CertificateError("C", "Q_delta is not positive definite (lambda_min = " +
                                    format_double(ext.min) + ")");
  }
  return std::max(1.0, ext.max / ext.min);
}

double RateCertificate::envelope(long k) const {
  return C * std::pow(1.0 - rate.gamma, static_cast<double>(k)) * d0 * d0;
}

std::string RateCertificate::to_report() const {
  const RateConstants& k = constants;
  const std::pair<const char*, double> rows[] = {
      {"kappa", k.kappa},   {"theta1", k.theta1},   {"a1", k.a1},
      {"a2", k.a2},         {"a3", k.a3},           {"a4", k.a4},
      {"a5", k.a5},         {"b1", k.b1},           {"b2", k.b2},
      {"delta", delta},     {"alpha_max", alpha_max}, {"gamma", rate.gamma},
      {"c1", rate.c1},      {"c2", rate.c2},        {"c3", rate.c3},
      {"C", C},             {"pi_star", pi_star},   {"d0", d0},
      {"alpha", alpha},     {"mu", k.mu},           {"l_smooth", k.l_smooth},
      {"rho", k.rho},       {"L_g", k.L_g},         {"B_g", k.B_g},
      {"lambda_star_norm", k.lambda_star_norm}};
  std::ostringstream out;
  for (const auto& [name, value] : rows) {
    out << name << " = " << format_double(value) << '\n';
  }
  out << "active_constraints = " << n_active << '\n';
  out << "inactive_constraints = " << n_inactive << '\n';
  out << "fixed_point_rounds = " << rounds << '\n';
  out << "a1_variant = " << (a1_variant == A1Variant::kProof ? "proof" : "statement")
      << '\n';
  return out.str();
}

RateCertificate build_certificate(const ProblemSpec& p, const Vec& x_star,
                                  const Vec& lambda_star, double rho, double d0,
                                  const CertificateOptions& opts) {
  require_size(x_star, p.n(), "build_certificate: x*");
  require_size(lambda_star, p.m(), "build_certificate: lambda*");
  if (!(rho > 0.0)) throw InputError("build_certificate: rho must be positive");
  if (!(d0 > 0.0)) throw InputError("build_certificate: d0 must be positive");

  const KktResidual kkt = kkt_residual(p, x_star, lambda_star, rho);
  if (kkt.max() > opts.kkt_tol) {
    throw InputError("build_certificate: reference is not a KKT pair (residual " +
                     format_double(kkt.max()) + ")");
  }

  const ActiveSetInfo info = active_set(p, x_star, opts.act_tol);
  RateCertificate cert;
  cert.constants = rate_constants(p, info, lambda_star, rho, opts.a1);
  cert.a1_variant = opts.a1;
  cert.d0 = d0;
  cert.n_active = static_cast<Index>(info.active.size());
  cert.n_inactive = static_cast<Index>(info.inactive.size());
  const RateConstants& k = cert.constants;

  double pi = compute_pi_star(
      info, rho, conditioning_constant(info.jacobian, 0.5 / k.B_g), d0);
  bool settled = false;
  for (int round = 1; round <= opts.max_rounds; ++round) {
    const double delta = compute_delta(k, pi, opts.safety);
    const double C = conditioning_constant(info.jacobian, delta);
    const double next = compute_pi_star(info, rho, C, d0);
    cert.rounds = round;
    const bool done = std::abs(next - pi) < 1e-12;
    pi = next;
    if (done) {
      settled = true;
      break;
    }
  }
  if (!settled) {
    throw CertificateError("pi_star", "pi*/delta/C fixed point did not settle in " +
                                          std::to_string(opts.max_rounds) +
                                          " rounds");
  }

  cert.pi_star = pi;
  cert.delta = compute_delta(k, pi, opts.safety);
  cert.C = conditioning_constant(info.jacobian, cert.delta);
  cert.alpha_max = compute_alpha_max(k, cert.delta, pi);
  cert.alpha = opts.safety * cert.alpha_max;
  cert.rate = compute_gamma(k, cert.delta, pi, cert.alpha);
  return cert;
}

double lyapunov_value(const Vec& x, const Vec& lambda, const Vec& x_star,
                      const Vec& lambda_star, const Mat& jacobian,
                      double delta) {
  require_size(x, jacobian.cols(), "lyapunov_value: x");
  require_size(x_star, jacobian.cols(), "lyapunov_value: x*");
  require_size(lambda, jacobian.rows(), "lyapunov_value: lambda");
  require_size(lambda_star, jacobian.rows(), "lyapunov_value: lambda*");
  if (!(delta >= 0.0) || delta * spectral_norm(jacobian) >= 1.0) {
    throw InputError("lyapunov_value: Q_delta is not positive definite "
                     "(need 0 <= delta < 1/|J|)");
  }
  return lyapunov_form(x - x_star, lambda - lambda_star, jacobian, delta);
}

}  // namespace augpdg
