#include <benchmark/benchmark.h>

#include <ihoc/adjoint.hpp>
#include <ihoc/certifier.hpp>
#include <ihoc/evaluation.hpp>
#include <ihoc/lindiff.hpp>
#include <ihoc/solver.hpp>

#include <cmath>

using namespace ihoc;

namespace {

LQParams params() { return LQParams{}; }

ReducedProblem lq() {
  return make_lq_problem(params(), ControlSet::box(Vec::Constant(1, -5.0), Vec::Constant(1, 5.0)));
}

/// x' = A x + B u + 0.1 sin(x) with a quadratic payoff, n states and n controls.
ReducedProblem smooth(int n) {
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 0.6;
    if (i + 1 < n) {
      A(i, i + 1) = 0.1;
    }
  }
  const Mat B = Mat::Identity(n, n);
  ReducedProblem red;
  red.n = n;
  red.d = n;
  red.beta = 0.9;
  red.sigma = Vec::Ones(n);
  red.origin_shift = Vec::Zero(n);
  red.f = [A, B](const Vec& x, const Vec& u) -> Vec { return A * x + B * u + 0.1 * x.array().sin().matrix(); };
  red.phi = [](const Vec& x, const Vec& u) { return -x.squaredNorm() - u.squaredNorm(); };
  red.f_jac = [A, B](const Vec& x, const Vec&) {
    return VectorPartials{Mat(A + Mat(0.1 * x.array().cos().matrix().asDiagonal())), B};
  };
  red.phi_jac = [](const Vec& x, const Vec& u) { return ScalarPartials{-2.0 * x, -2.0 * u}; };
  red.control_set = ControlSet::box(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0), Vec::Zero(n));
  return red;
}

std::vector<Vec> controls(int n, int T) {
  std::vector<Vec> us;
  for (int t = 0; t < T; ++t) {
    us.push_back(Vec::Constant(n, 0.5 * std::sin(0.3 * t)));
  }
  return us;
}

void BM_RolloutAndGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int T = static_cast<int>(state.range(1));
  const ReducedProblem red = smooth(n);
  const std::vector<Vec> us = controls(n, T);
  for (auto _ : state) {
    const Process p = rollout(red, us);
    benchmark::DoNotOptimize(grad_J_controls(red, p));
  }
}
BENCHMARK(BM_RolloutAndGradient)->Args({1, 60})->Args({4, 60})->Args({4, 500});

void BM_Costates(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ReducedProblem red = smooth(n);
  const Process p = rollout(red, controls(n, 200));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_costates(red, p));
  }
}
BENCHMARK(BM_Costates)->Arg(1)->Arg(4);

void BM_Certify(benchmark::State& state) {
  const ReducedProblem red = lq();
  const Process p = lq_closed_loop(params(), 60);
  const CostateSeq c = compute_costates(red, p);
  CertifyConfig cfg;
  cfg.parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify(red, p, c, cfg));
  }
}
BENCHMARK(BM_Certify)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_Riccati(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(lq_riccati(params()));
  }
}
BENCHMARK(BM_Riccati);

void BM_SolveTruncated(benchmark::State& state) {
  const ReducedProblem red = lq();
  SolveOptions opts;
  opts.T = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_truncated(red, opts));
  }
}
BENCHMARK(BM_SolveTruncated)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveSearch(benchmark::State& state) {
  const ReducedProblem red = lq();
  const int T = static_cast<int>(state.range(0));
  std::vector<Vec> grid;
  for (const double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    grid.push_back(Vec::Constant(1, v));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(exhaustive_search(red, T, grid));
  }
}
BENCHMARK(BM_ExhaustiveSearch)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_SolveCauchy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  LinearSystem sys;
  sys.n = n;
  const Mat A = 0.5 * Mat::Identity(n, n);
  sys.A = [A](int) { return A; };
  sys.e = [n](int t) { return Vec::Constant(n, std::pow(0.9, t)); };
  sys.zeta = Vec::Ones(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cauchy(sys, 1000));
  }
}
BENCHMARK(BM_SolveCauchy)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
