#include "ihoc/lindiff.hpp"

#include "ihoc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ihoc {

namespace {

Mat matrix_at(const LinearSystem& sys, int t) {
  Mat a = sys.A(t);
  require_shape(a, sys.n, sys.n, "A_" + std::to_string(t));
  return a;
}

Vec forcing_at(const LinearSystem& sys, int t) {
  if (!sys.e) {
    return Vec::Zero(sys.n);
  }
  Vec e = sys.e(t);
  require_size(e, sys.n, "e_" + std::to_string(t));
  return e;
}

}  // namespace

void LinearSystem::validate() const {
  if (n <= 0) {
    throw DimensionError("linear system dimension must be positive");
  }
  if (!A) {
    throw PreconditionError("linear system needs a matrix sequence");
  }
  require_size(zeta, n, "zeta");
}

Sequence solve_cauchy(const LinearSystem& sys, int T) {
  sys.validate();
  if (T < 1) {
    throw PreconditionError("solve_cauchy needs T >= 1");
  }
  Sequence z;
  z.first_index = 1;
  z.values.reserve(static_cast<std::size_t>(T) + 1);
  z.values.push_back(sys.zeta);
  for (int t = 1; t <= T; ++t) {
    const Vec& prev = z.values.back();
    z.values.push_back(matrix_at(sys, t) * prev + forcing_at(sys, t));
  }
  return z;
}

Vec closed_form(const LinearSystem& sys, int t) {
  sys.validate();
  if (t < 1) {
    throw PreconditionError("closed_form needs t >= 1");
  }
  // product holds A_t⋯A_{i+1} while i walks down from t-1 to 1.
  Mat product = Mat::Identity(sys.n, sys.n);
  Vec acc = forcing_at(sys, t);
  for (int i = t - 1; i >= 1; --i) {
    product = product * matrix_at(sys, i + 1);
    acc += product * forcing_at(sys, i);
  }
  product = product * matrix_at(sys, 1);
  return product * sys.zeta + acc;
}

DecayBound decay_bound(const LinearSystem& sys, int window) {
  sys.validate();
  if (!sys.M) {
    throw PreconditionError("decay bound needs a contraction constant M");
  }
  const double m = *sys.M;
  if (!(m >= 0.0 && m < 1.0)) {
    throw PreconditionError("decay bound undefined for M >= 1");
  }
  DecayBound out;
  if (sys.e_sup) {
    out.e_sup = *sys.e_sup;
  } else {
    if (window < 1 && sys.e) {
      throw PreconditionError("decay bound needs a window to measure sup ||e_t||");
    }
    for (int t = 1; t <= window; ++t) {
      out.e_sup = std::max(out.e_sup, forcing_at(sys, t).norm());
    }
    out.window_certified = static_cast<bool>(sys.e);
  }
  out.value = std::max(sys.zeta.norm(), out.e_sup) / (1.0 - m);
  return out;
}

std::optional<int> find_contraction_start(const LinearSystem& sys, int T, double margin) {
  sys.validate();
  if (T < 1) {
    throw PreconditionError("contraction scan needs a window >= 1");
  }
  const double threshold = 1.0 - margin;
  std::optional<int> start;
  for (int t = T; t >= 1; --t) {
    if (spectral_norm(matrix_at(sys, t)) > threshold) {
      break;
    }
    start = t;
  }
  return start;
}

LinearSystem shifted(const LinearSystem& sys, int offset, Vec new_zeta) {
  sys.validate();
  require_size(new_zeta, sys.n, "shifted zeta");
  LinearSystem out;
  out.n = sys.n;
  out.A = [a = sys.A, offset](int t) { return a(t + offset); };
  if (sys.e) {
    out.e = [e = sys.e, offset](int t) { return e(t + offset); };
  }
  out.zeta = std::move(new_zeta);
  out.M = sys.M;
  out.e_sup = sys.e_sup;
  return out;
}

DecayCheck verify_decay(const Sequence& z, double tail_tol, int tail_window) {
  DecayCheck out;
  const auto len = static_cast<int>(z.size());
  if (tail_window < 1 || len <= tail_window) {
    return out;
  }
  const int tail_begin = len - tail_window;
  const int prev_begin = std::max(0, tail_begin - tail_window);
  for (int k = tail_begin; k < len; ++k) {
    out.tail_max = std::max(out.tail_max, z.values[static_cast<std::size_t>(k)].norm());
  }
  for (int k = prev_begin; k < tail_begin; ++k) {
    out.preceding_max = std::max(out.preceding_max, z.values[static_cast<std::size_t>(k)].norm());
  }
  out.decayed = out.tail_max <= tail_tol && out.tail_max <= out.preceding_max;
  return out;
}

int horizon_for_tail(double rate, double bound, double tail_tol) {
  if (!(rate >= 0.0 && rate < 1.0) || !(tail_tol > 0.0)) {
    throw PreconditionError("horizon_for_tail needs 0 <= rate < 1 and tail_tol > 0");
  }
  if (bound <= tail_tol || rate == 0.0) {
    return 1;
  }
  const double t = std::ceil(std::log(tail_tol / bound) / std::log(rate));
  return std::max(1, static_cast<int>(t));
}

}  // namespace ihoc
