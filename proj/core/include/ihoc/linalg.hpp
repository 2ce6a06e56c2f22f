#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <vector>

namespace ihoc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Euclidean norm; the single vector norm used throughout the library.
double norm(const Vec& v);

/// Induced 2-norm estimated by a power method on AᵀA.
///
/// Deterministic: starts from the normalized all-ones vector and runs at most
/// 50 iterations or until the relative change of the estimate drops below
/// 1e-12. If the start vector lies in the null space of AᵀA the unit basis
/// vectors are tried in turn.
double spectral_norm(const Mat& a);

/// Throws DimensionError when `v.size() != expected`.
void require_size(const Vec& v, Eigen::Index expected, std::string_view what);
void require_shape(const Mat& m, Eigen::Index rows, Eigen::Index cols, std::string_view what);

bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

/// Radical-inverse Halton point in [0,1)^dim, index >= 1.
Vec halton(std::size_t index, Eigen::Index dim);

/// A sequence of vectors indexed from `first_index` (z_1, z_2, ... or x_0, x_1, ...).
struct Sequence {
  int first_index = 0;
  std::vector<Vec> values;

  [[nodiscard]] int last_index() const { return first_index + static_cast<int>(values.size()) - 1; }
  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] bool empty() const { return values.empty(); }
  [[nodiscard]] const Vec& at(int t) const;
  [[nodiscard]] Vec& at(int t);
};

}  // namespace ihoc
