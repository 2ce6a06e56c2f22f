#include "ihoc/control_set.hpp"

#include "ihoc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ihoc {

namespace {

constexpr int kDykstraSweeps = 200;
constexpr Eigen::Index kMaxCornerDim = 16;

std::vector<Vec> box_corners(const Vec& lo, const Vec& hi) {
  const Eigen::Index d = lo.size();
  if (d > kMaxCornerDim) {
    throw CapExceeded("box corner enumeration limited to dimension " + std::to_string(kMaxCornerDim));
  }
  std::vector<Vec> out;
  const std::size_t count = std::size_t{1} << d;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vec c(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      c[i] = ((mask >> i) & 1U) ? hi[i] : lo[i];
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::string_view to_string(ControlSetKind kind) {
  switch (kind) {
    case ControlSetKind::Box:
      return "box";
    case ControlSetKind::ConvexPolytope:
      return "convex-polytope";
    case ControlSetKind::FiniteGrid:
      return "finite-grid";
  }
  return "unknown";
}

ControlSet ControlSet::box(Vec lower, Vec upper, std::optional<Vec> star_center) {
  if (lower.size() == 0) {
    throw DimensionError("box control set needs dimension >= 1");
  }
  require_size(upper, lower.size(), "box upper bound");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
      throw PreconditionError("box control set requires lower <= upper componentwise");
    }
  }
  ControlSet s;
  s.kind_ = ControlSetKind::Box;
  s.dim_ = lower.size();
  s.compact_ = lower.allFinite() && upper.allFinite();
  if (s.compact_) {
    s.radius_ = lower.cwiseAbs().cwiseMax(upper.cwiseAbs()).norm();
  } else {
    s.radius_ = std::numeric_limits<double>::infinity();
  }
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  s.finish(std::move(star_center));
  return s;
}

ControlSet ControlSet::polytope(Mat halfspace_normals, Vec halfspace_offsets,
                                std::vector<Vec> vertices, std::optional<Vec> star_center) {
  if (halfspace_normals.cols() == 0) {
    throw DimensionError("polytope control set needs dimension >= 1");
  }
  require_size(halfspace_offsets, halfspace_normals.rows(), "polytope offsets");
  ControlSet s;
  s.kind_ = ControlSetKind::ConvexPolytope;
  s.dim_ = halfspace_normals.cols();
  s.normals_ = std::move(halfspace_normals);
  s.offsets_ = std::move(halfspace_offsets);
  for (const Vec& v : vertices) {
    require_size(v, s.dim_, "polytope vertex");
  }
  s.points_ = std::move(vertices);
  for (const Vec& v : s.points_) {
    if (!s.contains(v, 1e-9)) {
      throw PreconditionError("polytope vertex violates the halfspace description");
    }
  }
  s.compact_ = !s.points_.empty();
  if (s.compact_) {
    s.radius_ = 0.0;
    for (const Vec& v : s.points_) {
      s.radius_ = std::max(s.radius_, v.norm());
    }
    s.lower_ = s.points_.front();
    s.upper_ = s.points_.front();
    for (const Vec& v : s.points_) {
      s.lower_ = s.lower_.cwiseMin(v);
      s.upper_ = s.upper_.cwiseMax(v);
    }
  } else {
    s.radius_ = std::numeric_limits<double>::infinity();
    s.lower_ = Vec::Constant(s.dim_, -std::numeric_limits<double>::infinity());
    s.upper_ = Vec::Constant(s.dim_, std::numeric_limits<double>::infinity());
  }
  s.finish(std::move(star_center));
  return s;
}

ControlSet ControlSet::grid(std::vector<Vec> points, std::optional<Vec> star_center) {
  if (points.empty()) {
    throw PreconditionError("finite-grid control set must be nonempty");
  }
  ControlSet s;
  s.kind_ = ControlSetKind::FiniteGrid;
  s.dim_ = points.front().size();
  if (s.dim_ == 0) {
    throw DimensionError("grid control set needs dimension >= 1");
  }
  s.radius_ = 0.0;
  s.lower_ = points.front();
  s.upper_ = points.front();
  for (const Vec& p : points) {
    require_size(p, s.dim_, "grid point");
    if (!p.allFinite()) {
      throw PreconditionError("grid points must be finite");
    }
    s.radius_ = std::max(s.radius_, p.norm());
    s.lower_ = s.lower_.cwiseMin(p);
    s.upper_ = s.upper_.cwiseMax(p);
  }
  s.compact_ = true;
  s.points_ = std::move(points);
  s.finish(std::move(star_center));
  return s;
}

void ControlSet::finish(std::optional<Vec> star_center) {
  if (star_center) {
    require_size(*star_center, dim_, "star center");
    if (!contains(*star_center, 1e-12)) {
      throw PreconditionError("star center is not a member of the control set");
    }
  }
  star_center_ = std::move(star_center);
}

bool ControlSet::contains(const Vec& u, double tol) const {
  if (u.size() != dim_ || u.hasNaN()) {
    return false;
  }
  switch (kind_) {
    case ControlSetKind::Box:
      return ((u - lower_).array() >= -tol).all() && ((upper_ - u).array() >= -tol).all();
    case ControlSetKind::ConvexPolytope:
      return ((normals_ * u - offsets_).array() <= tol).all();
    case ControlSetKind::FiniteGrid:
      return std::any_of(points_.begin(), points_.end(), [&](const Vec& p) {
        return (p - u).cwiseAbs().maxCoeff() <= tol;
      });
  }
  return false;
}

Vec ControlSet::project(const Vec& u) const {
  require_size(u, dim_, "control");
  switch (kind_) {
    case ControlSetKind::Box:
      return u.cwiseMax(lower_).cwiseMin(upper_);
    case ControlSetKind::ConvexPolytope: {
      if (contains(u, 0.0)) {
        return u;
      }
      const Eigen::Index m = normals_.rows();
      Vec x = u;
      std::vector<Vec> corrections(static_cast<std::size_t>(m), Vec::Zero(dim_));
      for (int sweep = 0; sweep < kDykstraSweeps; ++sweep) {
        const Vec before = x;
        for (Eigen::Index i = 0; i < m; ++i) {
          auto& c = corrections[static_cast<std::size_t>(i)];
          const Vec y = x + c;
          const auto a = normals_.row(i).transpose();
          const double an2 = a.squaredNorm();
          const double excess = a.dot(y) - offsets_[i];
          Vec projected = y;
          if (excess > 0.0 && an2 > 0.0) {
            projected = y - (excess / an2) * a;
          }
          c = y - projected;
          x = projected;
        }
        if ((x - before).norm() <= 1e-15 * (1.0 + x.norm())) {
          break;
        }
      }
      return x;
    }
    case ControlSetKind::FiniteGrid:
      break;
  }
  throw PreconditionError("projection onto a finite-grid control set is not defined");
}

std::vector<Vec> ControlSet::vertices() const {
  switch (kind_) {
    case ControlSetKind::Box:
      if (!compact_) {
        throw PreconditionError("unbounded box has no vertex enumeration");
      }
      return box_corners(lower_, upper_);
    case ControlSetKind::ConvexPolytope:
    case ControlSetKind::FiniteGrid:
      return points_;
  }
  return {};
}

std::vector<Vec> ControlSet::sample(std::size_t count) const {
  if (kind_ == ControlSetKind::FiniteGrid) {
    return points_;
  }
  if (!compact_) {
    throw PreconditionError("cannot sample a non-compact control set");
  }
  std::vector<Vec> out;
  if (kind_ == ControlSetKind::Box) {
    const auto d = static_cast<double>(dim_);
    std::size_t per_axis = 2;
    while (std::pow(static_cast<double>(per_axis + 1), d) <= static_cast<double>(count)) {
      ++per_axis;
    }
    const double total = std::pow(static_cast<double>(per_axis), d);
    if (total > 1e7) {
      throw CapExceeded("control lattice too large");
    }
    const auto nodes = static_cast<std::size_t>(total);
    out.reserve(std::max(nodes, count));
    for (std::size_t idx = 0; idx < nodes; ++idx) {
      Vec p(dim_);
      std::size_t rem = idx;
      for (Eigen::Index i = 0; i < dim_; ++i) {
        const std::size_t k = rem % per_axis;
        rem /= per_axis;
        if (k == 0) {
          p[i] = lower_[i];
        } else if (k + 1 == per_axis) {
          p[i] = upper_[i];
        } else {
          p[i] = lower_[i] + (upper_[i] - lower_[i]) * static_cast<double>(k) /
                                 static_cast<double>(per_axis - 1);
        }
      }
      out.push_back(std::move(p));
    }
    for (std::size_t h = 1; out.size() < count; ++h) {
      out.push_back(lower_ + (upper_ - lower_).cwiseProduct(halton(h, dim_)));
    }
    return out;
  }
  // convex polytope
  out = points_;
  Vec centroid = Vec::Zero(dim_);
  for (const Vec& v : points_) {
    centroid += v;
  }
  centroid /= static_cast<double>(points_.size());
  out.push_back(centroid);
  const std::size_t max_tries = 50 * std::max<std::size_t>(count, 1);
  for (std::size_t h = 1; out.size() < count && h <= max_tries; ++h) {
    Vec p = lower_ + (upper_ - lower_).cwiseProduct(halton(h, dim_));
    if (contains(p, 0.0)) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

Vec ControlSet::random_point(std::mt19937_64& rng) const {
  switch (kind_) {
    case ControlSetKind::Box: {
      if (!compact_) {
        throw PreconditionError("cannot draw from a non-compact control set");
      }
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      Vec p(dim_);
      for (Eigen::Index i = 0; i < dim_; ++i) {
        p[i] = lower_[i] + (upper_[i] - lower_[i]) * unit(rng);
      }
      return p;
    }
    case ControlSetKind::ConvexPolytope: {
      if (!compact_) {
        throw PreconditionError("cannot draw from a non-compact control set");
      }
      std::exponential_distribution<double> expo(1.0);
      Vec p = Vec::Zero(dim_);
      double total = 0.0;
      for (const Vec& v : points_) {
        const double w = expo(rng);
        p += w * v;
        total += w;
      }
      return p / total;
    }
    case ControlSetKind::FiniteGrid: {
      std::uniform_int_distribution<std::size_t> pick(0, points_.size() - 1);
      return points_[pick(rng)];
    }
  }
  return {};
}

Vec ControlSet::hull_lower() const { return lower_; }
Vec ControlSet::hull_upper() const { return upper_; }

}  // namespace ihoc
