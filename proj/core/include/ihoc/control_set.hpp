#pragma once

#include "ihoc/linalg.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace ihoc {

enum class ControlSetKind { Box, ConvexPolytope, FiniteGrid };

std::string_view to_string(ControlSetKind kind);

/// The admissible control set U ⊂ R^d.
///
/// Three representations are supported: an axis-aligned box (bounds may be
/// infinite, in which case the set is not compact), a convex polytope given by
/// halfspaces G·u ≤ h together with its vertex list, and a finite list of grid
/// points. An optional distinguished point u⁰ (the star center) must belong to
/// the set.
class ControlSet {
 public:
  ControlSet() = default;

  static ControlSet box(Vec lower, Vec upper, std::optional<Vec> star_center = std::nullopt);
  /// `vertices` may be empty for an unbounded polyhedron; the set is then
  /// flagged non-compact and cannot be sampled.
  static ControlSet polytope(Mat halfspace_normals, Vec halfspace_offsets, std::vector<Vec> vertices,
                             std::optional<Vec> star_center = std::nullopt);
  static ControlSet grid(std::vector<Vec> points, std::optional<Vec> star_center = std::nullopt);

  [[nodiscard]] ControlSetKind kind() const { return kind_; }
  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] bool compact() const { return compact_; }
  /// Smallest R with U inside the closed Euclidean ball of radius R (infinite
  /// when the set is unbounded).
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] const std::optional<Vec>& star_center() const { return star_center_; }
  [[nodiscard]] bool convex() const { return kind_ != ControlSetKind::FiniteGrid; }
  [[nodiscard]] bool projectable() const { return convex(); }

  [[nodiscard]] const Vec& lower() const { return lower_; }
  [[nodiscard]] const Vec& upper() const { return upper_; }
  [[nodiscard]] const Mat& halfspace_normals() const { return normals_; }
  [[nodiscard]] const Vec& halfspace_offsets() const { return offsets_; }
  [[nodiscard]] const std::vector<Vec>& points() const { return points_; }

  [[nodiscard]] bool contains(const Vec& u, double tol = 1e-12) const;

  /// Euclidean projection. Boxes clamp componentwise (exact); polytopes use
  /// Dykstra's alternating halfspace projections (at most 200 sweeps). Throws
  /// PreconditionError for finite grids.
  [[nodiscard]] Vec project(const Vec& u) const;

  /// Corners of a box, polytope vertices, or every grid point.
  [[nodiscard]] std::vector<Vec> vertices() const;

  /// Deterministic sample of about `count` points.
  ///
  /// Boxes: the largest tensor lattice with at most `count` nodes (at least two
  /// per axis, so every corner is included) topped up with Halton points.
  /// Polytopes: vertices, their centroid, then Halton points of the bounding box
  /// that pass the membership test. Grids: every point regardless of `count`.
  [[nodiscard]] std::vector<Vec> sample(std::size_t count) const;

  /// Uniform draw for boxes, random convex combination of vertices for
  /// polytopes, uniform pick for grids.
  [[nodiscard]] Vec random_point(std::mt19937_64& rng) const;

  /// Componentwise hull of the set (the box itself, or the vertex hull).
  [[nodiscard]] Vec hull_lower() const;
  [[nodiscard]] Vec hull_upper() const;

 private:
  void finish(std::optional<Vec> star_center);

  ControlSetKind kind_ = ControlSetKind::Box;
  Eigen::Index dim_ = 0;
  bool compact_ = true;
  double radius_ = 0.0;
  std::optional<Vec> star_center_;
  Vec lower_;
  Vec upper_;
  Mat normals_;
  Vec offsets_;
  std::vector<Vec> points_;  // polytope vertices or grid points
};

}  // namespace ihoc
