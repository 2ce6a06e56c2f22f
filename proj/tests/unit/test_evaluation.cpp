#include <gtest/gtest.h>

#include <ihoc/errors.hpp>
#include <ihoc/evaluation.hpp>
#include <ihoc/solver.hpp>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace ihoc;
using ihoc::testing::Gen;

namespace {

ReducedProblem scalar_problem(ScalarMap phi, VectorMap f, double beta = 0.9) {
  ReducedProblem red;
  red.n = 1;
  red.d = 1;
  red.beta = beta;
  red.sigma = Vec::Ones(1);
  red.origin_shift = Vec::Zero(1);
  red.phi = std::move(phi);
  red.f = std::move(f);
  red.control_set = ControlSet::box(Vec::Constant(1, -1.0), Vec::Ones(1), Vec::Zero(1));
  return red;
}

Process constant_process(int T, double x, double u) {
  Process p;
  p.states.assign(static_cast<std::size_t>(T) + 1, Vec::Constant(1, x));
  p.controls.assign(static_cast<std::size_t>(T), Vec::Constant(1, u));
  return p;
}

}  // namespace

TEST(EvalJ, ConstantPayoffGeometricSeries) {
  const ReducedProblem red =
      scalar_problem([](const Vec&, const Vec&) { return 1.0; }, [](const Vec& x, const Vec&) { return x; }, 0.5);
  const ObjectiveEstimate est = eval_J(red, constant_process(3, 1.0, 0.0));
  EXPECT_DOUBLE_EQ(est.partial_sum, 1.875);
  EXPECT_DOUBLE_EQ(est.tail_bound, 0.125);
}

TEST(EvalJ, ZeroPayoff) {
  const ReducedProblem red =
      scalar_problem([](const Vec&, const Vec&) { return 0.0; }, [](const Vec& x, const Vec&) { return x; });
  const ObjectiveEstimate est = eval_J(red, constant_process(5, 1.0, 0.0));
  EXPECT_EQ(est.partial_sum, 0.0);
  EXPECT_EQ(est.tail_bound, 0.0);
}

TEST(EvalJ, HalvingTrajectoryClosedForm) {
  const double beta = 0.9;
  const ReducedProblem red = scalar_problem(
      [](const Vec& x, const Vec& u) { return -(x[0] * x[0] + u[0] * u[0]); },
      [](const Vec& x, const Vec&) { return Vec(0.5 * x); }, beta);
  for (const int T : {1, 5, 20}) {
    const Process p = rollout(red, std::vector<Vec>(static_cast<std::size_t>(T), Vec::Zero(1)));
    const double expect = -(1.0 - std::pow(0.25 * beta, T + 1)) / (1.0 - 0.25 * beta);
    EXPECT_NEAR(partial_objective(red, p), expect, 1e-15);
  }
}

TEST(DynamicsResidual, RolloutIsConsistent) {
  Gen gen(41);
  const ReducedProblem red = ihoc::testing::random_smooth_problem(gen, 3, 2);
  std::vector<Vec> us;
  for (int t = 0; t < 15; ++t) {
    us.push_back(gen.vec(2));
  }
  EXPECT_LE(dynamics_residual(red, rollout(red, us)).max_residual, 1e-14);
}

TEST(DynamicsResidual, PerturbedStateWithZeroDynamics) {
  const ReducedProblem red = scalar_problem([](const Vec&, const Vec&) { return 0.0; },
                                            [](const Vec& x, const Vec&) { return Vec(Vec::Zero(x.size())); });
  Process p = constant_process(5, 0.0, 0.0);
  p.states[0] = Vec::Ones(1);
  p.states[3] = Vec::Constant(1, 0.25);
  const ResidualReport rep = dynamics_residual(red, p);
  EXPECT_EQ(rep.max_residual, 0.25);
  EXPECT_EQ(rep.argmax_t, 2);
}

TEST(DynamicsResidual, MatchesHandLoop) {
  Gen gen(42);
  const LQParams prm = ihoc::testing::reference_lq();
  const ReducedProblem red = ihoc::testing::lq_problem(prm);
  Process p;
  for (int t = 0; t <= 10; ++t) {
    p.states.push_back(gen.vec(1));
  }
  for (int t = 0; t < 10; ++t) {
    p.controls.push_back(gen.vec(1));
  }
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    worst = std::max(worst, std::abs(p.states[t + 1][0] - (prm.a * p.states[t][0] + prm.b * p.controls[t][0])));
  }
  EXPECT_NEAR(dynamics_residual(red, p).max_residual, worst, 1e-15);
  EXPECT_FALSE(is_feasible(red, p));
}

TEST(Rollout, AutonomousContraction) {
  const ReducedProblem red = scalar_problem([](const Vec&, const Vec&) { return 0.0; },
                                            [](const Vec& x, const Vec&) { return Vec(0.5 * x); });
  const Process p = rollout(red, std::vector<Vec>(8, Vec::Constant(1, 0.3)));
  for (int t = 0; t <= 8; ++t) {
    EXPECT_EQ(p.state(t)[0], std::pow(0.5, t));
  }
}

TEST(Rollout, DirectControl) {
  const ReducedProblem red =
      scalar_problem([](const Vec&, const Vec&) { return 0.0; }, [](const Vec&, const Vec& u) { return u; });
  const std::vector<Vec> us{Vec::Constant(1, 0.1), Vec::Constant(1, -0.7), Vec::Constant(1, 0.9)};
  const Process p = rollout(red, us);
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(p.state(t + 1), us[static_cast<std::size_t>(t)]);
  }
}

TEST(Rollout, RiccatiClosedLoopDecaysAtClosedLoopRate) {
  const LQParams prm = ihoc::testing::reference_lq();
  const RiccatiSolution sol = lq_riccati(prm);
  const ReducedProblem red = ihoc::testing::lq_problem(prm);
  const Process cl = lq_closed_loop(prm, 30);
  const Process p = rollout(red, cl.controls);
  for (int t = 0; t < 30; ++t) {
    EXPECT_NEAR(p.state(t + 1)[0], sol.closed_loop * p.state(t)[0], 1e-15);
  }
}

TEST(Rollout, ControlOutsideSetThrows) {
  const ReducedProblem red = ihoc::testing::lq_problem(ihoc::testing::reference_lq(), 1.0);
  EXPECT_THROW((void)rollout(red, {Vec::Constant(1, 2.0)}), PreconditionError);
}

TEST(GradJ, NoControlSensitivity) {
  const ReducedProblem red = scalar_problem([](const Vec& x, const Vec&) { return -x[0] * x[0]; },
                                            [](const Vec& x, const Vec&) { return Vec(0.5 * x); });
  const Process p = rollout(red, std::vector<Vec>(6, Vec::Constant(1, 0.2)));
  for (const Vec& g : grad_J_controls(red, p)) {
    EXPECT_EQ(g.norm(), 0.0);
  }
}

TEST(GradJ, SingleControlMatchesFiniteDifferences) {
  Gen gen(43);
  const ReducedProblem red = ihoc::testing::random_smooth_problem(gen, 2, 2);
  const std::vector<Vec> us{gen.vec(2, -0.5, 0.5)};
  const std::vector<Vec> g = grad_J_controls(red, rollout(red, us));
  const std::vector<Vec> fd = ihoc::testing::fd_objective_gradient(red, us);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_LE((g[0] - fd[0]).norm(), 1e-6 * fd[0].norm());
}

TEST(GradJ, VanishesAtRiccatiOptimum) {
  const LQParams prm = ihoc::testing::reference_lq();
  const ReducedProblem red = ihoc::testing::lq_problem(prm);
  const Process p = lq_closed_loop(prm, 60);
  double sq = 0.0;
  for (const Vec& g : grad_J_controls(red, p)) {
    sq += g.squaredNorm();
  }
  EXPECT_LE(std::sqrt(sq), 1e-6);
}

TEST(GradJ, InfeasibleThrows) {
  const ReducedProblem red = ihoc::testing::lq_problem();
  EXPECT_THROW((void)grad_J_controls(red, constant_process(3, 1.0, 0.0)), PreconditionError);
}

TEST(GradJ, TerminalPenaltyMatchesFiniteDifferences) {
  Gen gen(44);
  const ReducedProblem red = ihoc::testing::random_smooth_problem(gen, 2, 1);
  std::vector<Vec> us;
  for (int t = 0; t < 6; ++t) {
    us.push_back(gen.vec(1, -0.5, 0.5));
  }
  const double c = 0.7;
  const std::vector<Vec> g = grad_J_controls(red, rollout(red, us), c);
  const double h = 1e-5;
  for (std::size_t t = 0; t < us.size(); ++t) {
    auto plus = us;
    auto minus = us;
    plus[t][0] += h;
    minus[t][0] -= h;
    const Process pp = rollout(red, plus);
    const Process pm = rollout(red, minus);
    const double jp = partial_objective(red, pp) - c * pp.states.back().squaredNorm();
    const double jm = partial_objective(red, pm) - c * pm.states.back().squaredNorm();
    EXPECT_NEAR(g[t][0], (jp - jm) / (2 * h), 1e-7);
  }
}
