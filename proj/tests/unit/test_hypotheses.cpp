#include <gtest/gtest.h>

#include <ihoc/errors.hpp>
#include <ihoc/hypotheses.hpp>
#include <ihoc/transform.hpp>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>

using namespace ihoc;

namespace {

ControlSet unit_box(int d) { return ControlSet::box(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0), Vec::Zero(d)); }

ReducedProblem problem_with(int n, int d, VectorMap f, ControlSet set) {
  ReducedProblem red;
  red.n = n;
  red.d = d;
  red.beta = 0.9;
  red.sigma = Vec::Zero(n);
  red.origin_shift = Vec::Zero(n);
  red.phi = [](const Vec&, const Vec&) { return 0.0; };
  red.f = std::move(f);
  red.control_set = std::move(set);
  return red;
}

}  // namespace

TEST(VanishingSup, LinearInStatePasses) {
  const VectorMap F = [](const Vec& x, const Vec& u) { return Vec(x * (1.0 + u.norm())); };
  const HypothesisReport rep = check_vanishing_sup(F, 2, unit_box(1));
  EXPECT_EQ(rep.status, HypothesisStatus::WindowCertified);
  for (const auto& [r, s] : rep.profile) {
    EXPECT_NEAR(s / r, 2.0, 1e-12);
  }
}

TEST(VanishingSup, StateIndependentFails) {
  const VectorMap F = [](const Vec&, const Vec& u) { return u; };
  const HypothesisReport rep = check_vanishing_sup(F, 1, unit_box(1));
  EXPECT_EQ(rep.status, HypothesisStatus::Fail);
  EXPECT_GT(rep.worst_value, rep.tolerance);
  EXPECT_NEAR(rep.worst_value, 1.0, 1e-12);
}

TEST(VanishingSup, QuadraticProfileMatchesDenseGrid) {
  const auto scalar = [](double x, double u) { return std::sin(x * x) * u; };
  const VectorMap F = [&scalar](const Vec& x, const Vec& u) { return Vec::Constant(1, scalar(x[0], u[0])); };
  const ControlSet set = ControlSet::box(Vec::Zero(1), Vec::Ones(1));
  VanishingSupOptions opts;
  opts.radii = {1e-1, 1e-2, 1e-3, 1e-4};
  const HypothesisReport rep = check_vanishing_sup(F, 1, set, opts);
  EXPECT_TRUE(rep.passed());
  for (const auto& [r, s] : rep.profile) {
    const double oracle = ihoc::testing::dense_sup_scalar(scalar, r, 0.0, 1.0);
    EXPECT_NEAR(s, oracle, 1e-9 * oracle);
    EXPECT_NEAR(s / (r * r), 1.0, 1e-2);
  }
}

TEST(VanishingSup, ZeroMapAlwaysPasses) {
  const VectorMap F = [](const Vec& x, const Vec&) { return Vec(Vec::Zero(x.size())); };
  EXPECT_TRUE(check_vanishing_sup(F, 3, unit_box(2)).passed());
}

TEST(VanishingSup, RejectsUnboundedSetAndBadRadii) {
  const double inf = std::numeric_limits<double>::infinity();
  const VectorMap F = [](const Vec& x, const Vec&) { return x; };
  EXPECT_THROW((void)check_vanishing_sup(F, 1, ControlSet::box(Vec::Constant(1, -inf), Vec::Zero(1))),
               PreconditionError);
  VanishingSupOptions opts;
  opts.radii = {1e-2, 1e-1};
  EXPECT_THROW((void)check_vanishing_sup(F, 1, unit_box(1), opts), PreconditionError);
  opts.radii = {1e-1, 1e-9};
  EXPECT_THROW((void)check_vanishing_sup(F, 1, unit_box(1), opts), PreconditionError);
}

TEST(FixedPoint, PassesAtOrigin) {
  const ReducedProblem red =
      problem_with(1, 1, [](const Vec& x, const Vec& u) { return Vec(0.5 * x + 0.0 * u); }, unit_box(1));
  EXPECT_EQ(check_fixed_point(red).status, HypothesisStatus::Pass);
}

TEST(FixedPoint, FailsWithOffset) {
  const ReducedProblem red = problem_with(
      1, 1, [](const Vec& x, const Vec& u) { return Vec(0.5 * x + u); },
      ControlSet::box(Vec::Constant(1, -1.0), Vec::Ones(1), Vec::Constant(1, 0.3)));
  const HypothesisReport rep = check_fixed_point(red);
  EXPECT_EQ(rep.status, HypothesisStatus::Fail);
  EXPECT_DOUBLE_EQ(rep.worst_value, 0.3);
}

TEST(FixedPoint, ReducedShiftedQuadraticDynamics) {
  Vec y_inf(2);
  y_inf << 1.5, -2.0;
  Mat A(2, 2);
  A << 0.5, 0.1, 0.0, 0.3;
  const Vec B = Vec::Ones(2);
  ProblemSpec spec;
  spec.n = 2;
  spec.d = 1;
  spec.beta = 0.9;
  spec.eta = Vec::Zero(2);
  spec.y_inf = y_inf;
  spec.psi = [](const Vec&, const Vec&) { return 0.0; };
  spec.g = [=](const Vec& y, const Vec& u) -> Vec {
    return y_inf + A * (y - y_inf) + B * u[0] * (y - y_inf).squaredNorm();
  };
  spec.control_set = ControlSet::box(Vec::Constant(1, -1.0), Vec::Ones(1), Vec::Constant(1, 0.7));
  EXPECT_EQ(check_fixed_point(reduce(spec)).status, HypothesisStatus::Pass);
}

TEST(FixedPoint, Preconditions) {
  const VectorMap f = [](const Vec& x, const Vec&) { return x; };
  EXPECT_THROW((void)check_fixed_point(problem_with(1, 1, f, ControlSet::box(Vec::Zero(1), Vec::Ones(1)))),
               PreconditionError);
  const ReducedProblem grid = problem_with(1, 1, f, ControlSet::grid({Vec::Zero(1), Vec::Ones(1)}, Vec::Zero(1)));
  EXPECT_THROW((void)check_fixed_point(grid), PreconditionError);
  const HypothesisReport rep = check_fixed_point(grid, 1e-8, true);
  EXPECT_EQ(rep.status, HypothesisStatus::Pass);
  EXPECT_FALSE(rep.note.empty());
}

TEST(DerivativeVanishing, ConstantStatePartialFails) {
  Vec c(2);
  c << 0.5, -0.25;
  ReducedProblem red =
      problem_with(2, 2, [c](const Vec& x, const Vec& u) { return Vec(x * c.dot(u)); }, unit_box(2));
  red.f_jac = [c](const Vec& x, const Vec& u) {
    return VectorPartials{c.dot(u) * Mat::Identity(2, 2), x * c.transpose()};
  };
  const HypothesisReport rep = check_derivative_vanishing(red, DerivativeVariant::FullJacobian);
  EXPECT_EQ(rep.status, HypothesisStatus::Fail);
  EXPECT_NEAR(rep.worst_value, 0.75, 5e-3);
  EXPECT_NE(rep.note.find("A4"), std::string::npos);
  EXPECT_EQ(check_derivative_vanishing(red, DerivativeVariant::StateJacobian).status, HypothesisStatus::Fail);
}

TEST(DerivativeVanishing, QuadraticPasses) {
  ReducedProblem red = problem_with(
      2, 1, [](const Vec& x, const Vec& u) { return Vec(Vec::Constant(2, x.squaredNorm() * std::cos(u[0]))); },
      unit_box(1));
  red.f_jac = [](const Vec& x, const Vec& u) {
    Mat dx(2, 2);
    dx.row(0) = 2.0 * std::cos(u[0]) * x.transpose();
    dx.row(1) = dx.row(0);
    return VectorPartials{dx, Mat::Constant(2, 1, -x.squaredNorm() * std::sin(u[0]))};
  };
  const HypothesisReport rep = check_derivative_vanishing(red, DerivativeVariant::StateJacobian);
  EXPECT_TRUE(rep.passed());
  for (const auto& [r, s] : rep.profile) {
    EXPECT_NEAR(s / r, 2.0 * std::sqrt(2.0), 1e-3);
  }
}

TEST(DerivativeVanishing, TanhProfileAgainstDenseGrid) {
  const auto f = [](double x, double u) { return std::tanh(std::abs(x)) * x * (1.0 + std::abs(u)); };
  const ReducedProblem red =
      problem_with(1, 1, [&f](const Vec& x, const Vec& u) { return Vec::Constant(1, f(x[0], u[0])); }, unit_box(1));
  const HypothesisReport rep = check_derivative_vanishing(red, DerivativeVariant::FullJacobian);
  EXPECT_TRUE(rep.passed());
  for (const auto& [r, s] : rep.profile) {
    // |Df| = sqrt(fx² + fu²) sampled densely with analytic partials.
    const auto jac_norm = [](double x, double u) {
      const double t = std::tanh(std::abs(x));
      const double fx = (t + std::abs(x) * (1.0 - t * t)) * (1.0 + std::abs(u));
      const double fu = t * x * (u >= 0.0 ? 1.0 : -1.0);
      return std::hypot(fx, fu);
    };
    const double oracle = ihoc::testing::dense_sup_scalar(jac_norm, r, -1.0, 1.0);
    EXPECT_NEAR(s, oracle, 0.05 * oracle);
  }
}

TEST(Convexlike, AffineConcaveUsesMix) {
  const ReducedProblem red = ihoc::testing::lq_problem();
  const Vec x = Vec::Constant(1, 0.4);
  const Vec u1 = Vec::Constant(1, -2.0);
  const Vec u2 = Vec::Constant(1, 3.0);
  double viol = 1.0;
  const auto w = find_convexlike_witness(red, x, u1, u2, 0.25, {}, &viol);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR((*w)[0], 0.75 * -2.0 + 0.25 * 3.0, 1e-15);
  EXPECT_TRUE(check_convexlike(red).passed());
}

TEST(Convexlike, SquareDynamicsWitnessAtEndpoint) {
  ReducedProblem red = problem_with(
      1, 1, [](const Vec&, const Vec& u) { return Vec::Constant(1, u[0] * u[0]); }, unit_box(1));
  red.phi = [](const Vec&, const Vec& u) { return u[0]; };
  const auto w = find_convexlike_witness(red, Vec::Zero(1), Vec::Constant(1, -1.0), Vec::Ones(1), 0.5);
  ASSERT_TRUE(w.has_value());
  EXPECT_DOUBLE_EQ((*w)[0], 1.0);
}

TEST(Convexlike, DisconnectedGridFails) {
  const ReducedProblem red = problem_with(
      1, 1, [](const Vec&, const Vec& u) { return u; }, ControlSet::grid({Vec::Zero(1), Vec::Ones(1)}));
  double viol = 0.0;
  EXPECT_FALSE(find_convexlike_witness(red, Vec::Zero(1), Vec::Zero(1), Vec::Ones(1), 0.5, {}, &viol));
  EXPECT_NEAR(viol, 0.5, 1e-12);
  const HypothesisReport rep = check_convexlike(red);
  EXPECT_EQ(rep.status, HypothesisStatus::Fail);
  EXPECT_GT(rep.worst_value, rep.tolerance);
}

TEST(ValidateJacobian, RandomCubic) {
  ihoc::testing::Gen gen(32);
  const Vec a = gen.vec(3);
  const Vec b = gen.vec(3);
  const VecFunction map = [a, b](const Vec& z) {
    Vec out(2);
    out[0] = a.dot(z.cwiseProduct(z).cwiseProduct(z)) + z[0] * z[1] * z[2];
    out[1] = b.dot(z) * z.squaredNorm();
    return out;
  };
  const MatFunction jac = [a, b](const Vec& z) {
    Mat j(2, 3);
    for (int i = 0; i < 3; ++i) {
      j(0, i) = 3.0 * a[i] * z[i] * z[i];
      j(1, i) = b[i] * z.squaredNorm() + 2.0 * b.dot(z) * z[i];
    }
    j(0, 0) += z[1] * z[2];
    j(0, 1) += z[0] * z[2];
    j(0, 2) += z[0] * z[1];
    return j;
  };
  std::vector<Vec> pts;
  for (int k = 0; k < 20; ++k) {
    pts.push_back(gen.vec(3, -2, 2));
  }
  const HypothesisReport rep = validate_jacobian(jac, map, pts, 1e-6);
  EXPECT_EQ(rep.status, HypothesisStatus::Pass);
  EXPECT_LE(rep.worst_value, 1e-6);

  const MatFunction wrong = [&jac](const Vec& z) {
    Mat j = jac(z);
    j(1, 2) += 1e-2;
    return j;
  };
  EXPECT_EQ(validate_jacobian(wrong, map, pts).status, HypothesisStatus::Fail);
}
