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


#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "augpdg/bench.hpp"
#include "augpdg/certificate.hpp"
#include "augpdg/oracle.hpp"
#include "augpdg/solver.hpp"
#include "support/planted.hpp"
#include "support/problems.hpp"

using namespace augpdg;
using testing::vec;

namespace {

SolverConfig config(double alpha, double rho) {
  SolverConfig c;
  c.alpha = alpha;
  c.rho = rho;
  return c;
}

}  // namespace

TEST_CASE("validate") {
  CHECK(validate(config(0.1, 0.1)).empty());
  CHECK(validate(config(0.2, 0.1)).size() == 1);
  CHECK_THROWS_AS(validate(config(0.0, 0.1)), InputError);
  CHECK_THROWS_AS(validate(config(0.1, -1.0)), InputError);
  SolverConfig c = config(0.1, 0.1);
  c.record_every = 0;
  CHECK_THROWS_AS(validate(c), InputError);
}

TEST_CASE("step examples on f = x^2, g = x - 1") {
  const ProblemSpec p = testing::one_dim(0.0).spec();
  const SolverConfig c = config(0.5, 1.0);

  const IterateState s0 = step(p, {0, vec({0.0}), vec({0.0})}, c);
  CHECK(s0.k == 1);
  CHECK(s0.x[0] == 0.0);
  CHECK(s0.lambda[0] == 0.0);

  const IterateState s2 = step(p, {0, vec({2.0}), vec({0.0})}, c);
  CHECK(s2.x[0] == -0.5);
  CHECK(s2.lambda[0] == 0.5);
}

TEST_CASE("step is the identity at a KKT pair") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    testing::PlantedOptions opts;
    opts.quadratic_share = 0.4;
    const auto pp = testing::make_planted_problem(rng, 3, 3, opts);
    const IterateState s =
        step(pp.problem.spec(), {0, pp.x_star, pp.lambda_star}, config(0.2, 0.5));
    CHECK(stacked_norm(s.x - pp.x_star, s.lambda - pp.lambda_star) < 1e-12);
  }
}

TEST_CASE("step reports non-finite oracle values with the iteration") {
  const ProblemSpec p = testing::scalar_spec(
      [](double x) { return x; }, [](double) { return std::nan(""); },
      [](double x) { return x; }, [](double) { return 1.0; });
  try {
    step(p, {7, vec({1.0}), vec({0.0})}, config(0.1, 0.1));
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.iteration() == 7);
  }
}

TEST_CASE("kkt_residual examples") {
  const ProblemSpec shifted = testing::one_dim(2.0).spec();
  const KktResidual r = kkt_residual(shifted, vec({1.0}), vec({2.0}), 1.0);
  CHECK(r.max() < 1e-12);
  CHECK(r.is_kkt(1e-12));

  // f = x^2 at the interior point x = 0.25
  const ProblemSpec p = testing::one_dim(0.0).spec();
  const KktResidual interior = kkt_residual(p, vec({0.25}), vec({0.0}), 1.0);
  CHECK(interior.stationarity == 0.5);
  CHECK(interior.primal_infeas == 0.0);
  CHECK(interior.dual_infeas == 0.0);
  CHECK(interior.complementarity == 0.0);
  CHECK(interior.fixed_point_gap == 0.0);

  const KktResidual neg = kkt_residual(p, vec({0.0}), vec({-0.5}), 1.0);
  CHECK(neg.dual_infeas == 0.5);
  CHECK_THROWS_AS(kkt_residual(p, vec({0.0}), vec({0.0, 1.0}), 1.0), InputError);
}

TEST_CASE("all five residual fields vanish exactly at KKT pairs") {
  Rng rng(22);
  for (int t = 0; t < 20; ++t) {
    const auto pp = testing::make_planted_problem(rng, 4, 4);
    const ProblemSpec spec = pp.problem.spec();
    CHECK(kkt_residual(spec, pp.x_star, pp.lambda_star, 0.3).max() < 1e-12);
    const Vec dx = 1e-2 * rng.unit_vector(4);
    CHECK(kkt_residual(spec, pp.x_star + dx, pp.lambda_star, 0.3).max() > 1e-6);
  }
}

TEST_CASE("fixed_point_gap equals rho |grad_lambda|") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const auto pp = testing::make_planted_problem(rng, 3, 5);
    const ProblemSpec spec = pp.problem.spec();
    const double rho = rng.uniform(0.05, 5.0);
    const Vec x = pp.problem.box().sample(rng);
    const Vec lam = 2.0 * rng.normal_vector(5).cwiseAbs();
    const double gap = kkt_residual(spec, x, lam, rho).fixed_point_gap;
    const double g = rho * grad_lambda(spec, x, lam, Penalty(rho)).norm();
    CHECK(gap == doctest::Approx(g).epsilon(1e-12));
  }
}

TEST_CASE("run: start at a KKT pair terminates at k = 0") {
  Rng rng(24);
  const auto pp = testing::make_planted_problem(rng, 3, 2);
  const Trace tr = run(pp.problem.spec(), config(0.1, 0.1), pp.x_star, pp.lambda_star);
  CHECK(tr.status == RunStatus::kConverged);
  CHECK(tr.final_state.k == 0);
  REQUIRE(tr.entries.size() == 1);
  CHECK(tr.entries[0].kkt.max() < 1e-12);
}

TEST_CASE("run: one-dimensional problems approach their KKT pair") {
  const Trace a = run(testing::one_dim(2.0).spec(), config(0.1, 0.1), vec({2.0}), vec({0.0}));
  CHECK(a.status == RunStatus::kConverged);
  CHECK(a.final_state.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(a.final_state.lambda[0] == doctest::Approx(2.0).epsilon(1e-8));

  const Trace b = run(testing::one_dim(0.0).spec(), config(0.1, 0.1), vec({2.0}), vec({0.0}));
  CHECK(b.status == RunStatus::kConverged);
  CHECK(std::abs(b.final_state.x[0]) < 1e-8);
  CHECK(b.final_state.lambda[0] < 1e-8);
}

TEST_CASE("run: power-flow instance from a nearby random start") {
  const PowerFlowInstance inst = build_paper_instance();
  const ReferenceSolution ref = solve_powerflow_analytic(inst.S, inst.p_v);
  const InitialPoint init = sample_initial(ref, 0.1 * ref.norm(), 1);
  const Trace tr = run(inst.spec, config(0.1, 0.1), init.x0, init.lambda0,
                       RunReference{ref.x_star, ref.lambda_star, {}});
  CHECK(tr.status == RunStatus::kConverged);
  CHECK((tr.final_state.x - ref.x_star).norm() < 1e-6);
  REQUIRE(tr.entries.front().dist_to_ref.has_value());
  CHECK(*tr.entries.front().dist_to_ref == doctest::Approx(0.1 * ref.norm()).epsilon(1e-9));
}

TEST_CASE("run: trace bookkeeping") {
  Rng rng(25);
  const auto pp = testing::make_planted_problem(rng, 2, 2);
  SolverConfig c = config(0.05, 0.1);
  c.record_every = 7;
  c.max_iters = 100;
  c.stop_tol = 0.0;
  const Vec x0 = pp.x_star + rng.unit_vector(2);
  const Trace tr = run(pp.problem.spec(), c, x0, Vec::Zero(2));
  CHECK(tr.status == RunStatus::kMaxIterations);
  CHECK(tr.entries.front().k == 0);
  CHECK(tr.entries.back().k == 100);
  CHECK(tr.entries[1].k == 7);
  for (std::size_t i = 1; i < tr.entries.size(); ++i) {
    CHECK(tr.entries[i].k > tr.entries[i - 1].k);
  }
  for (const TraceEntry& e : tr.entries) {
    CHECK(e.kkt.stationarity >= 0.0);
    CHECK(e.kkt.fixed_point_gap >= 0.0);
    CHECK_FALSE(e.dist_to_ref.has_value());
  }
}

TEST_CASE("run: rejects negative lambda0") {
  const ProblemSpec p = testing::one_dim(0.0).spec();
  CHECK_THROWS_AS(run(p, config(0.1, 0.1), vec({0.0}), vec({-1e-300})), InputError);
}

TEST_CASE("run: divergence is reported, not thrown") {
  const PowerFlowInstance inst = build_paper_instance();
  const Trace tr = run(inst.spec, config(1e3, 0.1), Vec::Zero(20), Vec::Zero(30));
  CHECK(tr.status == RunStatus::kDiverged);
  CHECK(tr.diagnostic.find("alpha") != std::string::npos);
  CHECK(tr.left_box);
  CHECK(tr.warnings.size() >= 2);  // alpha > rho and left the box
}

TEST_CASE("lambda stays nonnegative when alpha <= rho") {
  Rng rng(26);
  for (int t = 0; t < 20; ++t) {
    testing::PlantedOptions opts;
    opts.quadratic_share = 0.5;
    const Index n = 1 + t % 6;
    const Index m = 1 + (t * 5) % 8;
    const auto pp = testing::make_planted_problem(rng, n, m, opts);
    const double rho = rng.uniform(0.01, 1.0);
    SolverConfig c = config(rho, rho);
    c.max_iters = 300;
    c.stop_tol = 0.0;
    c.divergence_bound = std::numeric_limits<double>::max();
    const Vec lam0 = 2.0 * rng.normal_vector(m).cwiseAbs();
    const Trace tr = run(pp.problem.spec(), c, pp.problem.box().sample(rng), lam0);
    for (const TraceEntry& e : tr.entries) {
      if (!e.lambda.allFinite()) break;
      REQUIRE((e.lambda.array() >= 0.0).all());
    }
  }
}

TEST_CASE("trace CSV layout") {
  Rng rng(27);
  const auto pp = testing::make_planted_problem(rng, 2, 1);
  SolverConfig c = config(0.1, 0.1);
  c.max_iters = 3;
  c.stop_tol = 0.0;
  const Trace plain = run(pp.problem.spec(), c, pp.x_star + Vec::Ones(2), Vec::Zero(1));
  std::ostringstream out;
  write_trace_csv(plain, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,fixed_point_gap,stationarity,primal_infeas,complementarity,dist_to_ref,lyapunov");
  std::getline(in, line);
  CHECK(line.rfind("0,", 0) == 0);
  CHECK(line.substr(line.size() - 2) == ",,");

  const Trace withref = run(pp.problem.spec(), c, pp.x_star + Vec::Ones(2), Vec::Zero(1),
                            RunReference{pp.x_star, pp.lambda_star, {}});
  std::ostringstream out2;
  write_trace_csv(withref, out2);
  CHECK(out2.str().find(std::to_string(0) + ",") != std::string::npos);
  int rows = 0;
  for (char ch : out2.str()) rows += ch == '\n';
  CHECK(rows == 5);
}

TEST_CASE("Lyapunov value decays by (1 - gamma) under the certified stepsize") {
  Rng rng(28);
  for (int t = 0; t < 3; ++t) {
    const auto pp = testing::make_planted_problem(rng, 2, 1);
    const ProblemSpec spec = pp.problem.spec();
    const double rho = 1.0;
    const double d0 = 0.5 * stacked_norm(pp.x_star, pp.lambda_star);
    const RateCertificate cert = build_certificate(spec, pp.x_star, pp.lambda_star, rho, d0);
    ReferenceSolution ref;
    ref.x_star = pp.x_star;
    ref.lambda_star = pp.lambda_star;
    const InitialPoint init = sample_initial(ref, d0, 40 + t);
    SolverConfig c = config(cert.alpha, rho);
    c.max_iters = 5000;
    const ActiveSetInfo info = active_set(spec, pp.x_star);
    const Trace tr = run(spec, c, init.x0, init.lambda0,
                         RunReference{pp.x_star, pp.lambda_star,
                                      LyapunovSpec{info.jacobian, cert.delta}});
    for (std::size_t i = 1; i < tr.entries.size(); ++i) {
      REQUIRE(*tr.entries[i].lyapunov <=
              (1.0 - cert.rate.gamma) * *tr.entries[i - 1].lyapunov * (1 + 1e-9));
    }
  }
}
