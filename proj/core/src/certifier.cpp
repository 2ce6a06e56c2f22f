#include "ihoc/certifier.hpp"

#include "ihoc/errors.hpp"
#include "ihoc/evaluation.hpp"
#include "ihoc/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <random>

namespace ihoc {

std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::Feasibility:
      return "feasibility";
    case ConditionId::Smoothness:
      return "smoothness";
    case ConditionId::Boundedness:
      return "boundedness";
    case ConditionId::Adjoint:
      return "adjoint";
    case ConditionId::WeakMax:
      return "weak-max";
    case ConditionId::Concavity:
      return "concavity";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Certified:
      return "certified";
    case Verdict::Refuted:
      return "refuted";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

CertifyConfig CertifyConfig::scaled(double factor) const {
  CertifyConfig c = *this;
  c.tol_feasibility *= factor;
  c.tol_smoothness *= factor;
  c.tol_adjoint *= factor;
  c.tol_weak *= factor;
  c.tol_concavity *= factor;
  return c;
}

const ConditionResult& CertificateReport::condition(ConditionId id) const {
  const auto it = std::find_if(conditions.begin(), conditions.end(),
                               [id](const ConditionResult& c) { return c.id == id; });
  if (it == conditions.end()) {
    throw PreconditionError("condition not present in report");
  }
  return *it;
}

Verdict decide(const std::vector<ConditionResult>& conditions) {
  bool all_pass = true;
  for (const ConditionResult& c : conditions) {
    if (!c.passed()) {
      all_pass = false;
      if (c.worst_residual > 10.0 * c.tolerance) {
        return Verdict::Refuted;
      }
    }
  }
  return all_pass ? Verdict::Certified : Verdict::Inconclusive;
}

namespace {

constexpr std::array<const char*, 6> kLabels{"(i) feasibility",  "(ii) smoothness",
                                             "(iii) boundedness", "(iv) adjoint",
                                             "(v) weak-max",      "(vi) concavity"};

ConditionResult make_result(ConditionId id, double residual, double tol, bool sampled) {
  ConditionResult r;
  r.id = id;
  r.label = kLabels[static_cast<std::size_t>(id)];
  r.worst_residual = residual;
  r.tolerance = tol;
  if (residual <= tol) {
    r.status = sampled ? HypothesisStatus::WindowCertified : HypothesisStatus::Pass;
  } else {
    r.status = HypothesisStatus::Fail;
  }
  return r;
}

double max_state_norm(const Process& proc) {
  double m = 0.0;
  for (const Vec& x : proc.states) {
    m = std::max(m, x.norm());
  }
  return m;
}

/// Control samples for sampled checks; non-compact sets are replaced by their
/// intersection with a box around the candidate's controls.
std::vector<Vec> control_samples(const ControlSet& set, const Process& proc, std::size_t count) {
  if (set.compact()) {
    return set.sample(count);
  }
  Vec lo = proc.controls.front();
  Vec hi = lo;
  for (const Vec& u : proc.controls) {
    lo = lo.cwiseMin(u);
    hi = hi.cwiseMax(u);
  }
  lo.array() -= 1.0;
  hi.array() += 1.0;
  if (set.kind() == ControlSetKind::Box) {
    lo = lo.cwiseMax(set.lower());
    hi = hi.cwiseMin(set.upper());
  }
  std::vector<Vec> out = ControlSet::box(lo, hi).sample(count);
  for (Vec& u : out) {
    u = set.project(u);
  }
  return out;
}

Vec random_in_box(std::mt19937_64& rng, double radius, Eigen::Index n) {
  std::uniform_real_distribution<double> dist(-radius, radius);
  Vec x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = dist(rng);
  }
  return x;
}

ConditionResult check_feasibility(const ReducedProblem& red, const Process& proc,
                                  const CertifyConfig& cfg) {
  const ResidualReport res = dynamics_residual(red, proc);
  const double start = (proc.state(0) - red.sigma).norm();
  ConditionResult r = make_result(ConditionId::Feasibility, std::max(res.max_residual, start),
                                  cfg.tol_feasibility, false);
  r.time_index = start > res.max_residual ? 0 : res.argmax_t;
  if (start > cfg.tol_feasibility) {
    r.note = "initial state differs from sigma by " + std::to_string(start);
  }
  return r;
}

ConditionResult check_smoothness(const ReducedProblem& red, const Process& proc,
                                 const CertifyConfig& cfg) {
  const Eigen::Index n = red.n;
  const Eigen::Index d = red.d;
  const VecFunction stacked = [&red, n, d](const Vec& z) {
    Vec out(n + 1);
    out[0] = red.payoff(z.head(n), z.tail(d));
    out.tail(n) = red.dynamics(z.head(n), z.tail(d));
    return out;
  };
  std::vector<Vec> points;
  const int T = proc.horizon();
  const std::size_t count = std::max<std::size_t>(cfg.smoothness_points, 1);
  for (std::size_t k = 0; k < count; ++k) {
    const int t = count == 1 ? 0 : static_cast<int>(std::lround(static_cast<double>(k) * T / (count - 1)));
    Vec z(n + d);
    z << proc.state(t), proc.control(t);
    points.push_back(std::move(z));
  }

  if (red.has_analytic_partials()) {
    const MatFunction analytic = [&red, n, d](const Vec& z) {
      const ScalarPartials sp = red.payoff_partials(z.head(n), z.tail(d));
      const VectorPartials vp = red.dynamics_partials(z.head(n), z.tail(d));
      Mat j(n + 1, n + d);
      j.row(0) << sp.dx.transpose(), sp.du.transpose();
      j.bottomRows(n) << vp.dx, vp.du;
      return j;
    };
    const HypothesisReport rep = validate_jacobian(analytic, stacked, points, cfg.tol_smoothness);
    ConditionResult r = make_result(ConditionId::Smoothness, rep.worst_value, cfg.tol_smoothness, false);
    r.note = "analytic partials against central differences at " + std::to_string(points.size()) +
             " trajectory points";
    return r;
  }
  // Without analytic partials, compare central differences at two step sizes.
  const MatFunction coarse = [&stacked](const Vec& z) { return fd_jacobian(stacked, z, 10.0 * default_fd_step(z)); };
  const HypothesisReport rep = validate_jacobian(coarse, stacked, points, cfg.tol_smoothness);
  ConditionResult r = make_result(ConditionId::Smoothness, rep.worst_value, cfg.tol_smoothness, true);
  r.note = "no analytic partials: finite differences at two step sizes compared";
  return r;
}

ConditionResult check_boundedness(const ReducedProblem& red, const Process& proc,
                                  const CertifyConfig& cfg, double region) {
  const std::vector<Vec> us = control_samples(red.control_set, proc, cfg.boundedness_samples);
  double sup = 0.0;
  bool finite = true;
  std::size_t h = 1;
  for (const double scale : {1.0, 2.0, 4.0}) {
    for (std::size_t k = 0; k < cfg.boundedness_samples && finite; ++k, ++h) {
      const Vec x = scale * region * (2.0 * halton(h, red.n).array() - 1.0).matrix();
      const Vec& u = us[k % us.size()];
      try {
        sup = std::max(sup, std::abs(red.payoff(x, u)));
      } catch (const EvaluationError&) {
        finite = false;
      }
    }
  }
  ConditionResult r = make_result(ConditionId::Boundedness, finite ? 0.0 : std::numeric_limits<double>::infinity(),
                                  0.0, true);
  r.note = finite ? "sampled sup |phi| = " + std::to_string(sup) + " on boxes up to radius " +
                        std::to_string(4.0 * region)
                  : "payoff not finite on a bounded sample";
  return r;
}

ConditionResult check_adjoint(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                              const CertifyConfig& cfg) {
  const PrincipleReport rep = check_AE(red, proc, costates, cfg.tol_adjoint);
  ConditionResult r = make_result(ConditionId::Adjoint, rep.worst, cfg.tol_adjoint, false);
  r.time_index = rep.worst_t;
  return r;
}

ConditionResult check_weak(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                           const CertifyConfig& cfg) {
  const int T = proc.horizon();
  const std::vector<Vec> us = control_samples(red.control_set, proc, cfg.weak_samples);
  double worst = 0.0;
  int worst_t = 0;
  for (int t = 0; t < T; ++t) {
    const Vec& x = proc.state(t);
    const Vec& u_hat = proc.control(t);
    const VectorPartials df = red.dynamics_partials(x, u_hat);
    const ScalarPartials dphi = red.payoff_partials(x, u_hat);
    const Vec dir = discount(red.beta, t) * dphi.du + df.du.transpose() * costates.at(t + 1);
    for (const Vec& u : us) {
      const double v = dir.dot(u - u_hat);
      if (v > worst) {
        worst = v;
        worst_t = t;
      }
    }
  }
  ConditionResult r = make_result(ConditionId::WeakMax, worst, cfg.tol_weak, true);
  r.time_index = worst_t;
  return r;
}

ConditionResult check_concavity(const ReducedProblem& red, const Process& proc,
                                const CostateSeq& costates, const CertifyConfig& cfg, double region) {
  std::mt19937_64 rng(cfg.seed + 6);
  const std::vector<Vec> pool = control_samples(red.control_set, proc, 4 * cfg.concavity_pairs + 2);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const bool can_draw = red.control_set.compact();
  const auto draw_u = [&]() -> Vec {
    return can_draw ? red.control_set.random_point(rng) : pool[pick(rng)];
  };

  double worst = 0.0;
  int worst_t = 0;
  const int T = proc.horizon();
  for (int t = 0; t <= T; ++t) {
    const Vec& p_next = costates.at(t + 1);
    const auto h = [&](const Vec& x, const Vec& u) { return hamiltonian(red, t, x, u, p_next); };
    for (std::size_t k = 0; k < cfg.concavity_pairs; ++k) {
      Vec xa;
      Vec ua;
      if (k == 0) {
        xa = proc.state(t);
        ua = proc.control(t);
      } else {
        xa = random_in_box(rng, region, red.n);
        ua = draw_u();
      }
      const Vec xb = random_in_box(rng, region, red.n);
      const Vec ub = draw_u();
      const double ha = h(xa, ua);
      const double hb = h(xb, ub);
      for (const double theta : {0.25, 0.5, 0.75}) {
        const Vec xm = (1.0 - theta) * xa + theta * xb;
        const Vec um = (1.0 - theta) * ua + theta * ub;
        const double gap = (1.0 - theta) * ha + theta * hb - h(xm, um);
        if (gap > worst) {
          worst = gap;
          worst_t = t;
        }
      }
    }
  }
  ConditionResult r = make_result(ConditionId::Concavity, worst, cfg.tol_concavity, true);
  r.time_index = worst_t;
  r.note = "midpoint concavity sampled on |x|_inf <= " + std::to_string(region) + " times U";
  return r;
}

}  // namespace

CertificateReport certify(const ReducedProblem& red, const Process& proc, const CostateSeq& costates,
                          const CertifyConfig& config) {
  red.validate();
  proc.validate(red.n, red.d);
  if (!red.control_set.convex()) {
    throw PreconditionError("sufficiency certificate needs a convex control set");
  }
  if (costates.p.empty() || costates.p.first_index != 1 || costates.horizon() != proc.horizon()) {
    throw PreconditionError("costates p_1..p_{T+1} missing or horizon mismatch with the process");
  }

  double region = config.region_factor * max_state_norm(proc);
  if (!(region > 0.0)) {
    region = 1.0;
  }

  using Task = std::function<ConditionResult()>;
  const std::array<Task, 6> tasks{
      [&] { return check_feasibility(red, proc, config); },
      [&] { return check_smoothness(red, proc, config); },
      [&] { return check_boundedness(red, proc, config, region); },
      [&] { return check_adjoint(red, proc, costates, config); },
      [&] { return check_weak(red, proc, costates, config); },
      [&] { return check_concavity(red, proc, costates, config, region); },
  };

  CertificateReport rep;
  rep.config = config;
  if (config.parallel) {
    std::vector<std::future<ConditionResult>> futures;
    futures.reserve(tasks.size());
    for (const Task& task : tasks) {
      futures.push_back(std::async(std::launch::async, task));
    }
    for (auto& f : futures) {
      rep.conditions.push_back(f.get());
    }
  } else {
    for (const Task& task : tasks) {
      rep.conditions.push_back(task());
    }
  }
  rep.verdict = decide(rep.conditions);
  rep.notes.push_back("the control at t = T is held equal to u_{T-1}; costates use p_{T+1} = 0");
  rep.notes.push_back("sampled conditions (iii), (v), (vi) are window-certified only");
  rep.notes.push_back(
      "the same conditions also cover competitors whose states are merely bounded");
  return rep;
}

CertificateReport certify_original(const ProblemSpec& spec, const Process& proc,
                                   const CostateSeq& costates, const CertifyConfig& config) {
  spec.validate();
  if (proc.tail != TailConvention::StatesToTarget) {
    throw PreconditionError("certify_original expects a process in original coordinates");
  }
  const ReducedProblem red = reduce(spec);
  CertificateReport rep = certify(red, to_reduced(proc, spec), costates, config);
  static constexpr std::array<const char*, 6> kOriginal{"(i) feasibility",  "(ii) smoothness",
                                                        "(iii) boundedness", "(v) adjoint",
                                                        "(vi) weak-max",     "(vii) concavity"};
  for (ConditionResult& c : rep.conditions) {
    c.label = kOriginal[static_cast<std::size_t>(c.id)];
  }
  rep.notes.push_back(
      "original-problem numbering runs (i)-(vii) without (iv); conditions are matched by content");
  return rep;
}

TelescopingReport check_telescoping(const ReducedProblem& red, const Process& candidate,
                                    const Process& competitor, const CostateSeq& costates, int T,
                                    double tol) {
  red.validate();
  candidate.validate(red.n, red.d);
  competitor.validate(red.n, red.d);
  for (const Process* p : {&candidate, &competitor}) {
    if (!is_feasible(red, *p)) {
      throw PreconditionError("telescoping check needs feasible processes");
    }
    if ((p->state(0) - red.sigma).norm() > 1e-12 * (1.0 + red.sigma.norm())) {
      throw PreconditionError("telescoping check needs both processes to start at sigma");
    }
  }
  const int K = std::min({T, candidate.horizon(), competitor.horizon()});
  if (K < 1) {
    throw PreconditionError("telescoping check needs a horizon >= 1");
  }
  if (costates.p.first_index != 1 || costates.p.last_index() < K + 1) {
    throw PreconditionError("costates do not cover the requested horizon");
  }
  const auto next_state = [&red](const Process& p, int k) -> Vec {
    if (k + 1 <= p.horizon()) {
      return p.state(k + 1);
    }
    return red.dynamics(p.state(k), p.control(k));
  };

  TelescopingReport rep;
  rep.tolerance = tol;
  rep.horizon = K;
  rep.min_margin = std::numeric_limits<double>::infinity();
  double lhs = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double w = discount(red.beta, k);
    lhs += w * (red.payoff(candidate.state(k), candidate.control(k)) -
                red.payoff(competitor.state(k), competitor.control(k)));
    if (k == 0) {
      continue;
    }
    const double pairing = costates.at(k + 1).dot(next_state(candidate, k) - next_state(competitor, k));
    const double margin = lhs + pairing;
    rep.margins.push_back(margin);
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.argmin_prefix = k;
    }
  }
  rep.passed = rep.min_margin >= -tol;
  return rep;
}

}  // namespace ihoc
