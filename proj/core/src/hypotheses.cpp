#include "ihoc/hypotheses.hpp"

#include "ihoc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ihoc {

std::string_view to_string(HypothesisStatus status) {
  switch (status) {
    case HypothesisStatus::Pass:
      return "pass";
    case HypothesisStatus::Fail:
      return "fail";
    case HypothesisStatus::WindowCertified:
      return "window-certified";
  }
  return "unknown";
}

namespace {

using NormFunction = std::function<double(const Vec& x, const Vec& u)>;

std::vector<Vec> sphere_directions(int n, std::size_t count) {
  std::vector<Vec> dirs;
  dirs.reserve(count);
  for (int i = 0; i < n && dirs.size() < count; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    if (dirs.size() < count) {
      dirs.push_back(-Vec::Unit(n, i));
    }
  }
  for (std::size_t h = 1; dirs.size() < count; ++h) {
    Vec v = 2.0 * halton(h, n).array() - 1.0;
    const double len = v.norm();
    if (len > 1e-12) {
      dirs.push_back(v / len);
    }
  }
  return dirs;
}

void validate_radii(const std::vector<double>& radii) {
  if (radii.empty()) {
    throw PreconditionError("radius schedule is empty");
  }
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] >= 1e-8) || !std::isfinite(radii[k])) {
      throw PreconditionError("radii must be finite and >= 1e-8");
    }
    if (k > 0 && !(radii[k] < radii[k - 1])) {
      throw PreconditionError("radii must be strictly decreasing");
    }
  }
}

HypothesisReport sup_profile(const NormFunction& value, int n, const ControlSet& set,
                             const VanishingSupOptions& opts, std::string name) {
  validate_radii(opts.radii);
  if (n <= 0) {
    throw DimensionError("state dimension must be positive");
  }
  if (!set.compact() || !std::isfinite(set.radius())) {
    throw PreconditionError("vanishing-sup check needs a bounded control set");
  }
  const std::vector<Vec> dirs = sphere_directions(n, std::max<std::size_t>(opts.samples_per_radius, 1));
  const std::vector<Vec> controls = set.sample(opts.control_samples);

  HypothesisReport rep;
  rep.name = std::move(name);
  rep.tolerance = opts.tolerance;

  struct Arg {
    double s = 0.0;
    Vec x;
    Vec u;
  };
  std::vector<Arg> per_radius;
  for (const double r : opts.radii) {
    Arg best;
    best.s = -1.0;
    for (const Vec& dir : dirs) {
      const Vec x = r * dir;
      for (const Vec& u : controls) {
        const double v = value(x, u);
        if (!std::isfinite(v)) {
          throw EvaluationError("non-finite value while sampling " + rep.name);
        }
        if (v > best.s) {
          best = {v, x, u};
        }
        ++rep.samples_used;
      }
    }
    rep.profile.emplace_back(r, best.s);
    per_radius.push_back(std::move(best));
  }

  std::size_t worst = per_radius.size() - 1;
  bool ok = per_radius.back().s <= opts.tolerance;
  if (ok) {
    for (std::size_t k = 1; k < per_radius.size(); ++k) {
      if (per_radius[k].s > (1.0 + opts.slack) * per_radius[k - 1].s + opts.tolerance) {
        ok = false;
        worst = k;
        rep.note = "sampled sup increases as the radius shrinks";
        break;
      }
    }
  }
  rep.worst_value = per_radius[worst].s;
  rep.worst_radius = opts.radii[worst];
  rep.worst_state = per_radius[worst].x;
  rep.worst_control = per_radius[worst].u;
  rep.status = ok ? HypothesisStatus::WindowCertified : HypothesisStatus::Fail;
  return rep;
}

double violation(const ReducedProblem& red, const Vec& x, const Vec& u, const Vec& mix_f,
                 double mix_phi) {
  const double eq = (red.dynamics(x, u) - mix_f).norm();
  const double shortfall = mix_phi - red.payoff(x, u);
  return std::max(eq, shortfall);
}

}  // namespace

HypothesisReport check_vanishing_sup(const VectorMap& F, int n, const ControlSet& set,
                                     const VanishingSupOptions& opts, std::string name) {
  return sup_profile([&F](const Vec& x, const Vec& u) { return F(x, u).norm(); }, n, set, opts,
                     std::move(name));
}

HypothesisReport check_fixed_point(const ReducedProblem& red, double tolerance,
                                   bool grid_star_attested) {
  red.validate();
  const auto& center = red.control_set.star_center();
  if (!center) {
    throw PreconditionError("fixed-point check needs a star center u0");
  }
  if (red.control_set.kind() == ControlSetKind::FiniteGrid && !grid_star_attested) {
    throw PreconditionError("finite-grid control set needs an explicit star-shape attestation");
  }
  HypothesisReport rep;
  rep.name = "A3";
  rep.tolerance = tolerance;
  rep.samples_used = 1;
  rep.worst_state = Vec::Zero(red.n);
  rep.worst_control = *center;
  rep.worst_value = red.dynamics(Vec::Zero(red.n), *center).norm();
  rep.status = rep.worst_value <= tolerance ? HypothesisStatus::Pass : HypothesisStatus::Fail;
  if (red.control_set.kind() == ControlSetKind::FiniteGrid) {
    rep.note = "star shape attested by the user";
  }
  return rep;
}

HypothesisReport check_derivative_vanishing(const ReducedProblem& red, DerivativeVariant variant,
                                            const VanishingSupOptions& opts) {
  red.validate();
  const bool full = variant == DerivativeVariant::FullJacobian;
  const NormFunction value = [&red, full](const Vec& x, const Vec& u) {
    const VectorPartials j = red.dynamics_partials(x, u);
    if (!full) {
      return spectral_norm(j.dx);
    }
    Mat both(j.dx.rows(), j.dx.cols() + j.du.cols());
    both << j.dx, j.du;
    return spectral_norm(both);
  };
  HypothesisReport rep = sup_profile(value, red.n, red.control_set, opts, full ? "A4" : "C6");
  const std::string variant_note = full ? "variant: ||Df|| (A4)" : "variant: ||D1 f|| (C6)";
  rep.note = rep.note.empty() ? variant_note : variant_note + "; " + rep.note;
  if (!red.f_jac) {
    rep.note += "; finite-difference Jacobians";
  }
  return rep;
}

std::optional<Vec> find_convexlike_witness(const ReducedProblem& red, const Vec& x, const Vec& u1,
                                           const Vec& u2, double theta,
                                           const ConvexlikeOptions& opts, double* best_violation) {
  const ControlSet& set = red.control_set;
  if (set.kind() == ControlSetKind::ConvexPolytope) {
    throw PreconditionError("convex-likeness search supports box and finite-grid control sets");
  }
  if (!set.compact()) {
    throw PreconditionError("convex-likeness search needs a bounded control set");
  }
  const Vec mix_f = (1.0 - theta) * red.dynamics(x, u1) + theta * red.dynamics(x, u2);
  const double mix_phi = (1.0 - theta) * red.payoff(x, u1) + theta * red.payoff(x, u2);

  std::vector<Vec> candidates;
  const Vec mix_u = (1.0 - theta) * u1 + theta * u2;
  if (set.contains(mix_u)) {
    candidates.push_back(mix_u);
  }
  candidates.push_back(u1);
  candidates.push_back(u2);
  for (Vec& s : set.sample(opts.search_samples)) {
    candidates.push_back(std::move(s));
  }

  double best = std::numeric_limits<double>::infinity();
  Vec best_u;
  for (const Vec& u : candidates) {
    const double v = violation(red, x, u, mix_f, mix_phi);
    if (v < best) {
      best = v;
      best_u = u;
    }
    if (best <= opts.tolerance) {
      break;
    }
  }

  if (best > opts.tolerance && set.kind() == ControlSetKind::Box) {
    // Compass search around the incumbent.
    Vec step = (set.upper() - set.lower()) / 4.0;
    for (int round = 0; round < opts.refine_rounds && best > opts.tolerance; ++round) {
      bool improved = true;
      for (int moves = 0; improved && best > opts.tolerance && moves < 64; ++moves) {
        improved = false;
        for (Eigen::Index i = 0; i < best_u.size(); ++i) {
          for (const double sign : {1.0, -1.0}) {
            Vec trial = best_u;
            trial[i] += sign * step[i];
            trial = set.project(trial);
            const double v = violation(red, x, trial, mix_f, mix_phi);
            if (v < best) {
              best = v;
              best_u = trial;
              improved = true;
            }
          }
        }
      }
      step /= 2.0;
    }
  }
  if (best_violation != nullptr) {
    *best_violation = best;
  }
  if (best <= opts.tolerance) {
    return best_u;
  }
  return std::nullopt;
}

HypothesisReport check_convexlike(const ReducedProblem& red, const ConvexlikeOptions& opts) {
  red.validate();
  if (red.control_set.kind() == ControlSetKind::ConvexPolytope) {
    throw PreconditionError("convex-likeness check supports box and finite-grid control sets");
  }
  const Vec center = opts.region_center.value_or(Vec::Zero(red.n));
  require_size(center, red.n, "region center");

  std::vector<Vec> states{center};
  for (std::size_t h = 1; states.size() < std::max<std::size_t>(opts.state_samples, 1); ++h) {
    states.push_back(center + opts.region_radius * (2.0 * halton(h, red.n).array() - 1.0).matrix());
  }
  const std::vector<Vec> pool = red.control_set.sample(std::max<std::size_t>(opts.pair_samples, 2));
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);

  HypothesisReport rep;
  rep.name = "C7";
  rep.tolerance = opts.tolerance;
  rep.worst_value = 0.0;
  for (const Vec& x : states) {
    for (std::size_t k = 0; k < opts.pair_samples; ++k) {
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (pool.size() > 1) {
        while (j == i) {
          j = pick(rng);
        }
      }
      for (const double theta : opts.thetas) {
        double v = 0.0;
        (void)find_convexlike_witness(red, x, pool[i], pool[j], theta, opts, &v);
        ++rep.samples_used;
        if (v > rep.worst_value) {
          rep.worst_value = v;
          rep.worst_state = x;
          rep.worst_control = pool[i];
        }
      }
    }
  }
  rep.status = rep.worst_value <= opts.tolerance ? HypothesisStatus::WindowCertified
                                                 : HypothesisStatus::Fail;
  rep.note = "states sampled in a box of radius " + std::to_string(opts.region_radius);
  return rep;
}

HypothesisReport validate_jacobian(const MatFunction& analytic, const VecFunction& map,
                                   const std::vector<Vec>& points, double tolerance, double step) {
  HypothesisReport rep;
  rep.name = "jacobian";
  rep.tolerance = tolerance;
  for (const Vec& p : points) {
    const Mat fd = fd_jacobian(map, p, step);
    const Mat a = analytic(p);
    require_shape(a, fd.rows(), fd.cols(), "analytic Jacobian");
    const double scale = fd.cwiseAbs().maxCoeff();
    const double diff = (a - fd).cwiseAbs().maxCoeff();
    const double err = scale > 0.0 ? diff / scale : diff;
    if (!(err <= rep.worst_value) || rep.samples_used == 0) {
      rep.worst_value = err;
      rep.worst_state = p;
    }
    ++rep.samples_used;
  }
  rep.status = rep.worst_value <= tolerance ? HypothesisStatus::Pass : HypothesisStatus::Fail;
  return rep;
}

}  // namespace ihoc
