#include <gtest/gtest.h>

#include <ihoc/errors.hpp>
#include <ihoc/lindiff.hpp>
#include <ihoc/solver.hpp>

#include "generators.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace ihoc;
using ihoc::testing::Gen;

namespace {

LinearSystem scalar_system(double a, std::function<double(int)> e, double zeta) {
  LinearSystem sys;
  sys.n = 1;
  sys.A = [a](int) { return Mat::Constant(1, 1, a); };
  sys.e = [e = std::move(e)](int t) { return Vec::Constant(1, e(t)); };
  sys.zeta = Vec::Constant(1, zeta);
  return sys;
}

}  // namespace

TEST(SolveCauchy, NilpotentOneStep) {
  LinearSystem sys;
  sys.n = 2;
  sys.A = [](int) { return Mat::Zero(2, 2); };
  sys.e = [](int) { return Vec::Zero(2); };
  sys.zeta = Vec::Constant(2, 3.0);
  const Sequence z = solve_cauchy(sys, 5);
  EXPECT_EQ(z.first_index, 1);
  EXPECT_EQ(z.at(1), sys.zeta);
  for (int t = 2; t <= 6; ++t) {
    EXPECT_EQ(z.at(t), Vec::Zero(2));
  }
}

TEST(SolveCauchy, Geometric) {
  const Sequence z = solve_cauchy(scalar_system(0.5, [](int) { return 0.0; }, 1.0), 30);
  for (int t = 1; t <= 31; ++t) {
    EXPECT_EQ(z.at(t)[0], std::pow(0.5, t - 1));
  }
}

TEST(SolveCauchy, MatchesIndependentLoop) {
  const LinearSystem sys = scalar_system(0.5, [](int t) { return std::pow(2.0, -t); }, 0.0);
  const Sequence z = solve_cauchy(sys, 20);
  const auto ref = ihoc::testing::naive_recursion(sys.A, sys.e, sys.zeta, 20);
  for (int t = 1; t <= 21; ++t) {
    EXPECT_NEAR(z.at(t)[0], ref[static_cast<std::size_t>(t - 1)][0], 1e-14);
  }
}

TEST(SolveCauchy, RejectsBadInput) {
  LinearSystem sys = scalar_system(0.5, [](int) { return 0.0; }, 1.0);
  EXPECT_THROW((void)solve_cauchy(sys, 0), PreconditionError);
  sys.A = [](int) { return Mat::Zero(2, 2); };
  EXPECT_THROW((void)solve_cauchy(sys, 3), DimensionError);
}

TEST(ClosedForm, SingleStep) {
  Gen gen(21);
  const Mat A1 = gen.mat(3, 3);
  const Vec e1 = gen.vec(3);
  LinearSystem sys;
  sys.n = 3;
  sys.A = [A1](int) { return A1; };
  sys.e = [e1](int) { return e1; };
  sys.zeta = gen.vec(3);
  EXPECT_LE((closed_form(sys, 1) - (A1 * sys.zeta + e1)).norm(), 1e-15);
}

TEST(ClosedForm, Homogeneous) {
  Gen gen(22);
  std::vector<Mat> as;
  for (int t = 0; t < 6; ++t) {
    as.push_back(gen.mat(2, 2));
  }
  LinearSystem sys;
  sys.n = 2;
  sys.A = [as](int t) { return as[static_cast<std::size_t>(t - 1)]; };
  sys.e = [](int) { return Vec::Zero(2); };
  sys.zeta = gen.vec(2);
  Mat prod = Mat::Identity(2, 2);
  for (int t = 1; t <= 5; ++t) {
    prod = as[static_cast<std::size_t>(t - 1)] * prod;
  }
  EXPECT_LE((closed_form(sys, 5) - prod * sys.zeta).norm(), 1e-13);
}

TEST(ClosedForm, MatchesRecursionRandomContractive) {
  Gen gen(23);
  std::vector<Mat> as;
  std::vector<Vec> es;
  for (int t = 0; t < 12; ++t) {
    as.push_back(gen.with_norm(3, 0.8));
    es.push_back(gen.vec(3));
  }
  LinearSystem sys;
  sys.n = 3;
  sys.A = [as](int t) { return as[static_cast<std::size_t>(t - 1)]; };
  sys.e = [es](int t) { return es[static_cast<std::size_t>(t - 1)]; };
  sys.zeta = gen.vec(3);
  const Sequence z = solve_cauchy(sys, 12);
  EXPECT_LE((closed_form(sys, 12) - z.at(13)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DecayBound, UnitDataHalfContraction) {
  LinearSystem sys = scalar_system(0.5, [](int) { return 1.0; }, 1.0);
  sys.M = 0.5;
  sys.e_sup = 1.0;
  const DecayBound b = decay_bound(sys);
  EXPECT_DOUBLE_EQ(b.value, 2.0);
  EXPECT_FALSE(b.window_certified);
}

TEST(DecayBound, ZeroData) {
  LinearSystem sys = scalar_system(0.5, [](int) { return 0.0; }, 0.0);
  sys.M = 0.5;
  EXPECT_EQ(decay_bound(sys, 50).value, 0.0);
  for (const Vec& z : solve_cauchy(sys, 50).values) {
    EXPECT_EQ(z[0], 0.0);
  }
}

TEST(DecayBound, LongRunStaysBelowBound) {
  LinearSystem sys = scalar_system(0.9, [](int) { return 0.1; }, 1.0);
  sys.M = 0.9;
  const DecayBound b = decay_bound(sys, 500);
  EXPECT_NEAR(b.value, 10.0, 1e-12);
  EXPECT_TRUE(b.window_certified);
  double mx = 0.0;
  for (const Vec& z : solve_cauchy(sys, 500).values) {
    mx = std::max(mx, z.norm());
  }
  EXPECT_LE(mx, b.value);
}

TEST(DecayBound, RejectsNonContraction) {
  LinearSystem sys = scalar_system(0.5, [](int) { return 0.0; }, 1.0);
  EXPECT_THROW((void)decay_bound(sys), PreconditionError);
  sys.M = 1.0;
  EXPECT_THROW((void)decay_bound(sys), PreconditionError);
}

TEST(ContractionStart, StepProfile) {
  LinearSystem sys;
  sys.n = 1;
  sys.A = [](int t) { return Mat::Constant(1, 1, t < 5 ? 2.0 : 0.5); };
  sys.e = [](int) { return Vec::Zero(1); };
  sys.zeta = Vec::Ones(1);
  EXPECT_EQ(find_contraction_start(sys, 40), 5);
}

TEST(ContractionStart, UniformContraction) {
  const LinearSystem sys = scalar_system(0.99, [](int) { return 0.0; }, 1.0);
  EXPECT_EQ(find_contraction_start(sys, 40), 1);
}

TEST(ContractionStart, NotFound) {
  const LinearSystem sys = scalar_system(1.5, [](int) { return 0.0; }, 1.0);
  EXPECT_FALSE(find_contraction_start(sys, 40).has_value());
}

TEST(ContractionStart, LqClosedLoopAgainstBruteForce) {
  // Time-varying closed loop x ↦ (a − bK_t) x in a 2-state non-normal form.
  const RiccatiSolution sol = lq_riccati(LQParams{});
  const double rho = sol.closed_loop;
  LinearSystem sys;
  sys.n = 2;
  sys.A = [rho](int t) {
    Mat a(2, 2);
    a << rho, 3.0 * std::pow(0.7, t), 0.0, rho;
    return a;
  };
  sys.e = [](int) { return Vec::Zero(2); };
  sys.zeta = Vec::Ones(2);
  const int T = 40;
  int brute = -1;
  for (int s = 1; s <= T && brute < 0; ++s) {
    double mx = 0.0;
    for (int t = s; t <= T; ++t) {
      mx = std::max(mx, Eigen::JacobiSVD<Mat>(sys.A(t)).singularValues()(0));
    }
    if (mx <= 1.0 - 1e-6) {
      brute = s;
    }
  }
  ASSERT_GT(brute, 1);
  EXPECT_EQ(find_contraction_start(sys, T), brute);
}

TEST(VerifyDecay, Geometric) {
  Sequence z{1, {}};
  for (int t = 1; t <= 40; ++t) {
    z.values.push_back(Vec::Constant(1, std::pow(0.5, t)));
  }
  EXPECT_TRUE(verify_decay(z, 1e-3, 10).decayed);
}

TEST(VerifyDecay, Constant) {
  Sequence z{1, std::vector<Vec>(40, Vec::Ones(1))};
  EXPECT_FALSE(verify_decay(z, 1e-3, 10).decayed);
}

TEST(VerifyDecay, BoundDrivenHorizon) {
  LinearSystem sys = scalar_system(0.5, [](int) { return 0.0; }, 1.0);
  sys.M = 0.5;
  const double bound = decay_bound(sys, 1).value;
  const int T = horizon_for_tail(0.5, bound, 1e-8);
  EXPECT_LE(std::pow(0.5, T) * bound, 1e-8);
  EXPECT_TRUE(verify_decay(solve_cauchy(sys, T), 1e-8, 1).decayed);
}

TEST(Shifted, ReproducesSuffix) {
  Gen gen(24);
  std::vector<Mat> as;
  std::vector<Vec> es;
  for (int t = 0; t < 30; ++t) {
    as.push_back(gen.mat(2, 2));
    es.push_back(gen.vec(2));
  }
  LinearSystem sys;
  sys.n = 2;
  sys.A = [as](int t) { return as[static_cast<std::size_t>(t - 1)]; };
  sys.e = [es](int t) { return es[static_cast<std::size_t>(t - 1)]; };
  sys.zeta = gen.vec(2);
  const Sequence z = solve_cauchy(sys, 25);
  const int off = 7;
  const Sequence w = solve_cauchy(shifted(sys, off, z.at(off + 1)), 25 - off);
  for (int t = 1; t <= 25 - off + 1; ++t) {
    EXPECT_EQ(w.at(t), z.at(t + off));
  }
}
