#include "fixtures.hpp"

#include <cmath>

namespace ihoc::testing {

LQParams reference_lq() { return LQParams{0.9, 1.0, 1.0, 1.0, 0.95, 1.0}; }

ReducedProblem lq_problem(const LQParams& p, double half_width) {
  return make_lq_problem(p, ControlSet::box(Vec::Constant(1, -half_width), Vec::Constant(1, half_width),
                                            Vec::Zero(1)));
}

ProblemSpec shifted_lq_spec(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double beta,
                            const Vec& eta, const Vec& y_inf, double half_width) {
  const auto n = static_cast<int>(A.rows());
  const auto d = static_cast<int>(B.cols());
  ProblemSpec spec;
  spec.n = n;
  spec.d = d;
  spec.beta = beta;
  spec.eta = eta;
  spec.y_inf = y_inf;
  spec.g = [A, B, y_inf](const Vec& y, const Vec& u) -> Vec { return y_inf + A * (y - y_inf) + B * u; };
  spec.psi = [Q, R, y_inf](const Vec& y, const Vec& u) {
    const Vec z = y - y_inf;
    return -z.dot(Q * z) - u.dot(R * u);
  };
  spec.g_jac = [A, B](const Vec&, const Vec&) { return VectorPartials{A, B}; };
  spec.psi_jac = [Q, R, y_inf](const Vec& y, const Vec& u) {
    const Vec z = y - y_inf;
    return ScalarPartials{-(Q + Q.transpose()) * z, -(R + R.transpose()) * u};
  };
  spec.control_set = ControlSet::box(Vec::Constant(d, -half_width), Vec::Constant(d, half_width), Vec::Zero(d));
  spec.validate();
  return spec;
}

ReducedProblem random_smooth_problem(Gen& gen, int n, int d, double beta) {
  const Mat A = gen.with_norm(n, 0.6);
  const Mat B = gen.mat(n, d);
  const Mat C = gen.mat(n, n);
  const Mat D = gen.mat(n, d);
  const Mat Lq = gen.mat(n, n);
  const Mat Lr = gen.mat(d, d);
  const Mat Q = Lq * Lq.transpose() + 0.1 * Mat::Identity(n, n);
  const Mat R = Lr * Lr.transpose() + 0.1 * Mat::Identity(d, d);
  const Vec w = gen.vec(n);
  const Vec v = gen.vec(d);

  ReducedProblem red;
  red.n = n;
  red.d = d;
  red.beta = beta;
  red.sigma = gen.vec(n);
  red.origin_shift = Vec::Zero(n);
  red.f = [A, B, C, D](const Vec& x, const Vec& u) -> Vec {
    return A * x + B * u + 0.1 * (C * x + D * u).array().sin().matrix();
  };
  red.f_jac = [A, B, C, D](const Vec& x, const Vec& u) {
    const Vec c = 0.1 * (C * x + D * u).array().cos().matrix();
    return VectorPartials{A + c.asDiagonal() * C, B + c.asDiagonal() * D};
  };
  red.phi = [Q, R, w, v](const Vec& x, const Vec& u) {
    return -x.dot(Q * x) - u.dot(R * u) + 0.1 * std::cos(w.dot(x) + v.dot(u));
  };
  red.phi_jac = [Q, R, w, v](const Vec& x, const Vec& u) {
    const double s = 0.1 * std::sin(w.dot(x) + v.dot(u));
    return ScalarPartials{-2.0 * Q * x - s * w, -2.0 * R * u - s * v};
  };
  red.control_set = ControlSet::box(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0), Vec::Zero(d));
  red.validate();
  return red;
}

ReducedProblem strip_partials(ReducedProblem red) {
  red.phi_jac = nullptr;
  red.f_jac = nullptr;
  return red;
}

}  // namespace ihoc::testing
