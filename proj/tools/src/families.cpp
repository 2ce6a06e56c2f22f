#include "ihoc_cli/families.hpp"

#include <ihoc/errors.hpp>

#include <map>
#include <mutex>

namespace ihoc::cli {

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, FamilyFactory> factories;
};

ProblemSpec make_lq_scalar(const YAML::Node& params);
ProblemSpec make_lq_nd(const YAML::Node& params);

Registry& registry() {
  static Registry* r = [] {
    auto* fresh = new Registry;
    fresh->factories.emplace("lq-scalar", make_lq_scalar);
    fresh->factories.emplace("linear-quadratic-nd", make_lq_nd);
    return fresh;
  }();
  return *r;
}

double as_double(const YAML::Node& node, const std::string& what) {
  if (!node || !node.IsScalar()) {
    throw UsageError("'" + what + "' must be a number");
  }
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    throw UsageError("'" + what + "' must be a number");
  }
}

ProblemSpec linear_quadratic(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double beta,
                             const Vec& eta, const Vec& y_inf, ControlSet set) {
  const auto n = A.rows();
  const auto d = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != d ||
      R.cols() != d || eta.size() != n || y_inf.size() != n || set.dim() != d) {
    throw UsageError("problem dimensions are inconsistent");
  }
  ProblemSpec spec;
  spec.n = static_cast<int>(n);
  spec.d = static_cast<int>(d);
  spec.beta = beta;
  spec.eta = eta;
  spec.y_inf = y_inf;
  spec.control_set = std::move(set);
  const Mat Qs = Q + Q.transpose();
  const Mat Rs = R + R.transpose();
  spec.g = [A, B, y_inf](const Vec& y, const Vec& u) -> Vec { return y_inf + A * (y - y_inf) + B * u; };
  spec.psi = [Q, R, y_inf](const Vec& y, const Vec& u) {
    const Vec z = y - y_inf;
    return -z.dot(Q * z) - u.dot(R * u);
  };
  spec.g_jac = [A, B](const Vec&, const Vec&) { return VectorPartials{A, B}; };
  spec.psi_jac = [Qs, Rs, y_inf](const Vec& y, const Vec& u) {
    return ScalarPartials{-(Qs * (y - y_inf)), -(Rs * u)};
  };
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("invalid problem: ") + e.what());
  }
  return spec;
}

ProblemSpec make_lq_scalar(const YAML::Node& p) {
  const auto one = [](double v) { return Mat::Constant(1, 1, v); };
  const Vec eta = Vec::Constant(1, require_double(p, "eta"));
  const Vec y_inf = Vec::Constant(1, require_double(p, "y_inf"));
  return linear_quadratic(one(require_double(p, "a")), one(require_double(p, "b")),
                          one(require_double(p, "q")), one(require_double(p, "r")),
                          require_double(p, "beta"), eta, y_inf, read_control_set(p["control"], 1));
}

ProblemSpec make_lq_nd(const YAML::Node& p) {
  const Mat A = read_matrix(p["A"], "A");
  const Mat B = read_matrix(p["B"], "B");
  return linear_quadratic(A, B, read_matrix(p["Q"], "Q"), read_matrix(p["R"], "R"),
                          require_double(p, "beta"), read_vector(p["eta"], "eta"),
                          read_vector(p["y_inf"], "y_inf"),
                          read_control_set(p["control"], static_cast<int>(B.cols())));
}

}  // namespace

double require_double(const YAML::Node& params, const std::string& key) {
  if (!params[key]) {
    throw UsageError("missing problem parameter '" + key + "'");
  }
  return as_double(params[key], key);
}

Vec read_vector(const YAML::Node& node, const std::string& what) {
  if (!node) {
    throw UsageError("missing problem parameter '" + what + "'");
  }
  if (node.IsScalar()) {
    return Vec::Constant(1, as_double(node, what));
  }
  if (!node.IsSequence() || node.size() == 0) {
    throw UsageError("'" + what + "' must be a number or a nonempty list");
  }
  Vec v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = as_double(node[i], what);
  }
  return v;
}

Mat read_matrix(const YAML::Node& node, const std::string& what) {
  if (!node) {
    throw UsageError("missing problem parameter '" + what + "'");
  }
  if (node.IsScalar()) {
    return Mat::Constant(1, 1, as_double(node, what));
  }
  if (!node.IsSequence() || node.size() == 0) {
    throw UsageError("'" + what + "' must be a list of rows");
  }
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < node.size(); ++i) {
    rows.push_back(read_vector(node[i], what));
  }
  const Eigen::Index cols = rows.front().size();
  Mat m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw UsageError("rows of '" + what + "' have different lengths");
    }
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

ControlSet read_control_set(const YAML::Node& node, int d) {
  if (!node || !node.IsMap()) {
    throw UsageError("missing 'control' section with bounds or grid points");
  }
  std::optional<Vec> star;
  if (node["star"]) {
    star = read_vector(node["star"], "control.star");
  }
  try {
    if (node["points"]) {
      const YAML::Node pts = node["points"];
      if (!pts.IsSequence() || pts.size() == 0) {
        throw UsageError("'control.points' must be a nonempty list");
      }
      std::vector<Vec> points;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        points.push_back(read_vector(pts[i], "control.points"));
      }
      return ControlSet::grid(std::move(points), std::move(star));
    }
    Vec lower = read_vector(node["lower"], "control.lower");
    Vec upper = read_vector(node["upper"], "control.upper");
    if (lower.size() == 1 && d > 1) {
      lower = Vec::Constant(d, lower[0]);
    }
    if (upper.size() == 1 && d > 1) {
      upper = Vec::Constant(d, upper[0]);
    }
    if (!star) {
      star = Vec(Vec::Zero(lower.size()).cwiseMax(lower).cwiseMin(upper));
    }
    return ControlSet::box(std::move(lower), std::move(upper), std::move(star));
  } catch (const Error& e) {
    throw UsageError(std::string("invalid control set: ") + e.what());
  }
}

void register_family(const std::string& name, FamilyFactory factory) {
  Registry& r = registry();
  const std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

std::vector<std::string> registered_families() {
  Registry& r = registry();
  const std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& entry : r.factories) {
    names.push_back(entry.first);
  }
  return names;
}

ProblemSpec make_problem(const std::string& family, const YAML::Node& params) {
  FamilyFactory factory;
  {
    Registry& r = registry();
    const std::lock_guard lock(r.mutex);
    const auto it = r.factories.find(family);
    if (it == r.factories.end()) {
      throw UsageError("unknown problem family '" + family + "'");
    }
    factory = it->second;
  }
  return factory(params);
}

std::optional<LQParams> scalar_lq_params(const std::string& family, const YAML::Node& params) {
  if (family != "lq-scalar") {
    return std::nullopt;
  }
  LQParams lq;
  lq.a = require_double(params, "a");
  lq.b = require_double(params, "b");
  lq.q = require_double(params, "q");
  lq.r = require_double(params, "r");
  lq.beta = require_double(params, "beta");
  lq.sigma = require_double(params, "eta") - require_double(params, "y_inf");
  return lq;
}

}  // namespace ihoc::cli
