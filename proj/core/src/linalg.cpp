#include "ihoc/linalg.hpp"

#include "ihoc/errors.hpp"

#include <cmath>
#include <string>

namespace ihoc {

namespace {

constexpr int kPowerIterations = 50;
constexpr double kPowerRelTol = 1e-12;

double power_method(const Mat& ata, Vec v) {
  double estimate = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Vec w = ata * v;
    const double wn = w.norm();
    if (wn == 0.0) {
      return 0.0;
    }
    // Rayleigh quotient of the symmetric PSD matrix AᵀA.
    const double next = v.dot(w);
    v = w / wn;
    if (it > 0 && std::abs(next - estimate) <= kPowerRelTol * std::abs(next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace

double norm(const Vec& v) { return v.norm(); }

double spectral_norm(const Mat& a) {
  if (a.size() == 0) {
    return 0.0;
  }
  if (a.rows() == 1 || a.cols() == 1) {
    return a.norm();
  }
  const Mat ata = a.transpose() * a;
  const Eigen::Index n = ata.rows();
  Vec start = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = power_method(ata, start);
  if (lambda == 0.0 && ata.squaredNorm() > 0.0) {
    for (Eigen::Index i = 0; i < n && lambda == 0.0; ++i) {
      lambda = power_method(ata, Vec::Unit(n, i));
    }
  }
  return std::sqrt(std::max(lambda, 0.0));
}

void require_size(const Vec& v, Eigen::Index expected, std::string_view what) {
  if (v.size() != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(v.size()));
  }
}

void require_shape(const Mat& m, Eigen::Index rows, Eigen::Index cols, std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

bool all_finite(const Vec& v) { return v.allFinite(); }
bool all_finite(const Mat& m) { return m.allFinite(); }

Vec halton(std::size_t index, Eigen::Index dim) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  constexpr Eigen::Index kMaxDim = sizeof(kPrimes) / sizeof(kPrimes[0]);
  if (dim > kMaxDim) {
    throw DimensionError("halton: dimension above " + std::to_string(kMaxDim) + " unsupported");
  }
  Vec out(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const int base = kPrimes[k];
    double f = 1.0;
    double r = 0.0;
    std::size_t i = index;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    out[k] = r;
  }
  return out;
}

const Vec& Sequence::at(int t) const {
  if (t < first_index || t > last_index()) {
    throw DimensionError("sequence index " + std::to_string(t) + " outside [" +
                         std::to_string(first_index) + ", " + std::to_string(last_index()) + "]");
  }
  return values[static_cast<std::size_t>(t - first_index)];
}

Vec& Sequence::at(int t) {
  return const_cast<Vec&>(static_cast<const Sequence&>(*this).at(t));
}

}  // namespace ihoc
