#include "ihoc_cli/run.hpp"

#include "ihoc_cli/families.hpp"

#include <ihoc/adjoint.hpp>
#include <ihoc/certifier.hpp>
#include <ihoc/csv.hpp>
#include <ihoc/errors.hpp>
#include <ihoc/evaluation.hpp>
#include <ihoc/hypotheses.hpp>
#include <ihoc/solver.hpp>
#include <ihoc/transform.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace ihoc::cli {

namespace {

namespace fs = std::filesystem;

/// Non-finite values are written as strings; JSON has no literal for them.
Json num(double v) {
  if (std::isfinite(v)) {
    return v;
  }
  if (std::isnan(v)) {
    return "nan";
  }
  return v > 0 ? "inf" : "-inf";
}

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(num(v[i]));
  }
  return out;
}

Json yaml_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Sequence: {
      Json out = Json::array();
      for (const auto& item : node) {
        out.push_back(yaml_json(item));
      }
      return out;
    }
    case YAML::NodeType::Map: {
      Json out = Json::object();
      for (const auto& item : node) {
        out[item.first.as<std::string>()] = yaml_json(item.second);
      }
      return out;
    }
    case YAML::NodeType::Scalar: {
      const std::string text = node.Scalar();
      double v = 0.0;
      if (YAML::convert<double>::decode(node, v) && std::isfinite(v)) {
        return v;
      }
      bool b = false;
      if (YAML::convert<bool>::decode(node, b)) {
        return b;
      }
      return text;
    }
    default:
      return nullptr;
  }
}

Json config_echo(const RunConfig& cfg) {
  const Tolerances tol = effective_tolerances(cfg);
  Json j;
  j["command"] = to_string(cfg.command);
  j["problem"] = yaml_json(cfg.params);
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["tol_scale"] = cfg.tol_scale;
  j["tolerances"] = {{"feasibility", tol.feasibility}, {"smoothness", tol.smoothness},
                     {"adjoint", tol.adjoint},         {"weak", tol.weak},
                     {"strong", tol.strong},           {"concavity", tol.concavity},
                     {"hypotheses", tol.hypotheses},   {"oracle", tol.oracle}};
  j["sampling"] = {{"control_samples", cfg.sampling.control_samples},
                   {"concavity_pairs", cfg.sampling.concavity_pairs},
                   {"region_factor", cfg.sampling.region_factor},
                   {"samples_per_radius", cfg.sampling.samples_per_radius}};
  j["solver"] = {{"max_iters", cfg.solver.max_iters},
                 {"rule", cfg.solver.rule},
                 {"step_size", cfg.solver.step_size},
                 {"stop_tol", cfg.solver.stop_tol},
                 {"terminal_penalty",
                  cfg.solver.terminal_penalty ? Json(*cfg.solver.terminal_penalty) : Json("auto")}};
  if (cfg.exhaustive) {
    j["oracle"] = {{"exhaustive", {{"horizon", cfg.exhaustive->horizon}, {"grid", cfg.exhaustive->grid}}}};
  }
  j["candidate"] = {{"source", cfg.candidate.source}};
  if (!cfg.candidate.path.empty()) {
    j["candidate"]["path"] = cfg.candidate.path;
  }
  return j;
}

Json principle_json(const PrincipleReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["passed"] = rep.passed;
  j["worst"] = num(rep.worst);
  j["worst_t"] = rep.worst_t;
  j["tolerance"] = rep.tolerance;
  j["samples_used"] = rep.samples_used;
  if (rep.worst_control) {
    j["worst_control"] = vec_json(*rep.worst_control);
  }
  if (!rep.maximizers.empty()) {
    Json m = Json::array();
    for (const Vec& u : rep.maximizers) {
      m.push_back(vec_json(u));
    }
    j["maximizers"] = m;
  }
  Json table = Json::array();
  for (const double r : rep.per_t) {
    table.push_back(num(r));
  }
  j["per_t"] = table;
  if (!rep.note.empty()) {
    j["note"] = rep.note;
  }
  return j;
}

Json hypothesis_json(const HypothesisReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["status"] = std::string(to_string(rep.status));
  j["worst_value"] = num(rep.worst_value);
  j["tolerance"] = rep.tolerance;
  j["samples_used"] = rep.samples_used;
  if (rep.worst_radius) {
    j["worst_radius"] = *rep.worst_radius;
  }
  if (rep.worst_state) {
    j["worst_state"] = vec_json(*rep.worst_state);
  }
  if (rep.worst_control) {
    j["worst_control"] = vec_json(*rep.worst_control);
  }
  if (!rep.profile.empty()) {
    Json p = Json::array();
    for (const auto& [r, s] : rep.profile) {
      p.push_back({{"radius", r}, {"sup", num(s)}});
    }
    j["profile"] = p;
  }
  if (!rep.note.empty()) {
    j["note"] = rep.note;
  }
  return j;
}

Json condition_json(const ConditionResult& c) {
  Json j;
  j["id"] = std::string(to_string(c.id));
  j["label"] = c.label;
  j["status"] = std::string(to_string(c.status));
  j["worst_residual"] = num(c.worst_residual);
  j["tolerance"] = c.tolerance;
  if (c.time_index) {
    j["time_index"] = *c.time_index;
  }
  if (!c.note.empty()) {
    j["note"] = c.note;
  }
  return j;
}

Json costates_json(const CostateSeq& cs) {
  Json j;
  j["horizon"] = cs.horizon();
  j["l1_partial"] = num(cs.l1_partial);
  j["terminal_sensitivity"] = num(cs.terminal_sensitivity);
  j["l1_tail_bound"] = num(cs.l1_tail_bound());
  if (cs.tail) {
    j["tail_certificate"] = {{"rate", cs.tail->rate},
                             {"constant", num(cs.tail->constant)},
                             {"onset", cs.tail->onset},
                             {"contraction", cs.tail->contraction}};
  } else {
    j["tail_certificate"] = nullptr;
  }
  Json norms = Json::array();
  for (const Vec& p : cs.p.values) {
    norms.push_back(num(p.norm()));
  }
  j["norms"] = norms;
  return j;
}

/// Artifacts produced alongside the report.
struct Sidecars {
  std::map<std::string, std::string> files;
};

struct Context {
  const RunConfig& cfg;
  Tolerances tol;
  ProblemSpec spec;
  ReducedProblem red;
  Sidecars sidecars;
  std::ostringstream summary;
};

SolveOptions solve_options(const RunConfig& cfg, int T) {
  SolveOptions o;
  o.T = T;
  o.max_iters = cfg.solver.max_iters;
  o.rule = cfg.solver.rule == "fixed" ? StepRule::Fixed : StepRule::Backtracking;
  o.step_size = cfg.solver.step_size;
  o.stop_tol = cfg.solver.stop_tol;
  o.terminal_penalty = cfg.solver.terminal_penalty;
  return o;
}

Json solve_json(const SolveResult& s) {
  return {{"iterations", s.iterations},
          {"converged", s.converged},
          {"objective", num(s.objective)},
          {"projected_gradient_norm", num(s.projected_gradient_norm)},
          {"terminal_penalty", s.terminal_penalty}};
}

std::string process_csv(const Process& proc) {
  std::ostringstream os;
  csv::write_process(os, proc);
  return os.str();
}

/// Candidate in reduced coordinates.
struct Candidate {
  Process process;
  Json info;
};

Candidate make_candidate(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Candidate c;
  c.info["source"] = cfg.candidate.source;
  if (cfg.candidate.source == "riccati") {
    const std::optional<LQParams> lq = scalar_lq_params(cfg.family, cfg.params);
    if (!lq) {
      throw UsageError("candidate source 'riccati' needs the lq-scalar family");
    }
    const RiccatiSolution ric = lq_riccati(*lq);
    c.process = lq_closed_loop(*lq, cfg.horizon);
    for (const Vec& u : c.process.controls) {
      if (!ctx.red.control_set.contains(u)) {
        throw PreconditionError("Riccati feedback control leaves the control set");
      }
    }
    c.info["riccati"] = {{"P", ric.P}, {"K", ric.K}, {"iterations", ric.iterations}};
  } else if (cfg.candidate.source == "file") {
    fs::path path = cfg.candidate.path;
    if (path.is_relative()) {
      path = fs::path(cfg.base_dir) / path;
    }
    std::ifstream in(path);
    if (!in) {
      throw UsageError("cannot open candidate file '" + path.string() + "'");
    }
    Process original = csv::read_process(in, TailConvention::StatesToTarget);
    original.validate(ctx.spec.n, ctx.spec.d);
    c.process = to_reduced(original, ctx.spec);
    c.info["path"] = cfg.candidate.path;
  } else {
    const SolveResult s = solve_truncated(ctx.red, solve_options(cfg, cfg.horizon));
    c.process = s.process;
    c.info["solver"] = solve_json(s);
  }
  c.info["horizon"] = c.process.horizon();
  c.info["partial_objective"] = num(partial_objective(ctx.red, c.process));
  c.info["dynamics_residual"] = num(dynamics_residual(ctx.red, c.process).max_residual);
  return c;
}

int pass_fail(bool ok) { return ok ? kPass : kFail; }

int cmd_reduce(Context& ctx, Json& results) {
  const ReducedProblem& red = ctx.red;
  results["n"] = red.n;
  results["d"] = red.d;
  results["beta"] = red.beta;
  results["sigma"] = vec_json(red.sigma);
  results["origin_shift"] = vec_json(red.origin_shift);
  results["control_set"] = {{"kind", std::string(to_string(red.control_set.kind()))},
                            {"compact", red.control_set.compact()},
                            {"radius", num(red.control_set.radius())}};
  Vec u0 = red.control_set.star_center().value_or(Vec::Zero(red.d));
  if (!red.control_set.contains(u0) && red.control_set.projectable()) {
    u0 = red.control_set.project(u0);
  }
  results["f_at_origin"] = vec_json(red.dynamics(Vec::Zero(red.n), u0));
  ctx.summary << "sigma = " << csv::format_double(red.sigma.norm()) << " (norm)\n";
  return kPass;
}

int cmd_solve(Context& ctx, Json& results) {
  const SolveResult s = solve_truncated(ctx.red, solve_options(ctx.cfg, ctx.cfg.horizon));
  results["solver"] = solve_json(s);
  const ObjectiveEstimate est = eval_J(ctx.red, s.process);
  results["partial_objective"] = num(est.partial_sum);
  results["tail_bound"] = num(est.tail_bound);
  results["final_state_norm"] = num(s.process.states.back().norm());
  const Process lifted = lift_process(s.process, ctx.spec);
  ctx.sidecars.files["process.csv"] = process_csv(lifted);
  std::ostringstream trace;
  csv::write_trace(trace, s.trace);
  ctx.sidecars.files["trace.csv"] = trace.str();
  ctx.summary << "solver " << (s.converged ? "converged" : "did not converge") << " after "
              << s.iterations << " iterations, objective " << csv::format_double(s.objective) << "\n";
  return s.converged ? kPass : kInconclusive;
}

int cmd_costates(Context& ctx, Json& results) {
  const Candidate c = make_candidate(ctx);
  const CostateSeq cs = compute_costates(ctx.red, c.process);
  results["candidate"] = c.info;
  results["costates"] = costates_json(cs);
  ctx.sidecars.files["process.csv"] = process_csv(lift_process(c.process, ctx.spec));
  std::ostringstream os;
  csv::write_costates(os, cs);
  ctx.sidecars.files["costates.csv"] = os.str();
  ctx.summary << "costates p_1..p_" << cs.horizon() + 1 << ", l1 partial "
              << csv::format_double(cs.l1_partial) << "\n";
  return kPass;
}

int cmd_check(Context& ctx, Json& results, bool strong) {
  const Candidate c = make_candidate(ctx);
  const CostateSeq cs = compute_costates(ctx.red, c.process);
  results["candidate"] = c.info;
  const auto samples = static_cast<std::size_t>(ctx.cfg.sampling.control_samples);
  const PrincipleReport ae = check_AE(ctx.red, c.process, cs, ctx.tol.adjoint);
  const PrincipleReport mp = strong ? check_MP(ctx.red, c.process, cs, ctx.tol.strong, samples)
                                    : check_WM(ctx.red, c.process, cs, ctx.tol.weak, samples);
  results["checks"] = Json::array({principle_json(ae), principle_json(mp)});
  for (const PrincipleReport* r : {&ae, &mp}) {
    ctx.summary << r->name << ": " << (r->passed ? "pass" : "fail") << ", worst "
                << csv::format_double(r->worst) << " at t = " << r->worst_t << "\n";
  }
  return pass_fail(ae.passed && mp.passed);
}

int cmd_certify(Context& ctx, Json& results) {
  const Candidate c = make_candidate(ctx);
  const CostateSeq cs = compute_costates(ctx.red, c.process);
  CertifyConfig cc;
  cc.tol_feasibility = ctx.tol.feasibility;
  cc.tol_smoothness = ctx.tol.smoothness;
  cc.tol_adjoint = ctx.tol.adjoint;
  cc.tol_weak = ctx.tol.weak;
  cc.tol_concavity = ctx.tol.concavity;
  cc.weak_samples = static_cast<std::size_t>(ctx.cfg.sampling.control_samples);
  cc.concavity_pairs = static_cast<std::size_t>(ctx.cfg.sampling.concavity_pairs);
  cc.region_factor = ctx.cfg.sampling.region_factor;
  cc.seed = ctx.cfg.seed;
  const CertificateReport rep = certify_original(ctx.spec, lift_process(c.process, ctx.spec), cs, cc);
  results["candidate"] = c.info;
  results["verdict"] = std::string(to_string(rep.verdict));
  Json conds = Json::array();
  for (const ConditionResult& r : rep.conditions) {
    conds.push_back(condition_json(r));
    ctx.summary << r.label << ": " << to_string(r.status) << ", residual "
                << csv::format_double(r.worst_residual) << "\n";
  }
  results["conditions"] = conds;
  results["notes"] = rep.notes;
  results["costates"] = costates_json(cs);
  ctx.summary << "verdict: " << to_string(rep.verdict) << "\n";
  switch (rep.verdict) {
    case Verdict::Certified:
      return kPass;
    case Verdict::Refuted:
      return kFail;
    case Verdict::Inconclusive:
      break;
  }
  return kInconclusive;
}

int cmd_hypotheses(Context& ctx, Json& results) {
  const ReducedProblem& red = ctx.red;
  VanishingSupOptions vs;
  vs.tolerance = ctx.tol.hypotheses;
  vs.samples_per_radius = static_cast<std::size_t>(ctx.cfg.sampling.samples_per_radius);
  vs.control_samples = static_cast<std::size_t>(ctx.cfg.sampling.control_samples);

  std::vector<HypothesisReport> reps;
  reps.push_back(check_fixed_point(red, ctx.tol.feasibility * 100.0));
  if (red.control_set.compact()) {
    reps.push_back(check_derivative_vanishing(red, DerivativeVariant::FullJacobian, vs));
    reps.push_back(check_derivative_vanishing(red, DerivativeVariant::StateJacobian, vs));
  }
  const bool convexlike_ok = red.control_set.compact() &&
                             (red.control_set.kind() == ControlSetKind::Box ||
                              red.control_set.kind() == ControlSetKind::FiniteGrid);
  if (convexlike_ok) {
    ConvexlikeOptions co;
    co.tolerance = ctx.tol.concavity;
    co.seed = ctx.cfg.seed;
    co.region_radius = ctx.cfg.sampling.region_factor * std::max(1.0, red.sigma.norm());
    reps.push_back(check_convexlike(red, co));
  }
  if (red.has_analytic_partials()) {
    const Eigen::Index n = red.n;
    const Eigen::Index d = red.d;
    const VecFunction stacked = [&red, n, d](const Vec& z) {
      Vec out(n + 1);
      out[0] = red.payoff(z.head(n), z.tail(d));
      out.tail(n) = red.dynamics(z.head(n), z.tail(d));
      return out;
    };
    const MatFunction analytic = [&red, n, d](const Vec& z) {
      const ScalarPartials sp = red.payoff_partials(z.head(n), z.tail(d));
      const VectorPartials vp = red.dynamics_partials(z.head(n), z.tail(d));
      Mat j(n + 1, n + d);
      j.row(0) << sp.dx.transpose(), sp.du.transpose();
      j.bottomRows(n) << vp.dx, vp.du;
      return j;
    };
    std::mt19937_64 rng(ctx.cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double radius = std::max(1.0, red.sigma.norm());
    std::vector<Vec> points;
    const bool sampleable = red.control_set.compact();
    for (int k = 0; k < 8; ++k) {
      Vec z(n + d);
      for (Eigen::Index i = 0; i < n; ++i) {
        z[i] = radius * unit(rng);
      }
      Vec u = sampleable ? red.control_set.random_point(rng) : Vec(Vec::Zero(d));
      if (!sampleable && red.control_set.projectable()) {
        for (Eigen::Index i = 0; i < d; ++i) {
          u[i] = unit(rng);
        }
        u = red.control_set.project(u);
      }
      z.tail(d) = u;
      points.push_back(z);
    }
    HypothesisReport jac = validate_jacobian(analytic, stacked, points, ctx.tol.smoothness);
    jac.name = "jacobian";
    reps.push_back(jac);
  }

  Json arr = Json::array();
  bool all = true;
  for (const HypothesisReport& r : reps) {
    arr.push_back(hypothesis_json(r));
    all = all && r.passed();
    ctx.summary << r.name << ": " << to_string(r.status) << ", worst "
                << csv::format_double(r.worst_value) << "\n";
  }
  results["hypotheses"] = arr;
  if (!red.control_set.compact()) {
    results["skipped"] = "derivative and convex-likeness checks need a compact control set";
  }
  return pass_fail(all);
}

int cmd_oracle_compare(Context& ctx, Json& results) {
  const std::optional<LQParams> lq = scalar_lq_params(ctx.cfg.family, ctx.cfg.params);
  if (!lq) {
    throw UsageError("oracle-compare supports the lq-scalar family only");
  }
  const RiccatiSolution ric = lq_riccati(*lq);
  const int T = ctx.cfg.horizon;
  const Process closed = lq_closed_loop(*lq, T);
  for (const Vec& u : closed.controls) {
    if (!ctx.red.control_set.contains(u)) {
      throw PreconditionError("Riccati feedback control leaves the control set");
    }
  }
  const double j_riccati = partial_objective(ctx.red, closed);
  const SolveResult s = solve_truncated(ctx.red, solve_options(ctx.cfg, T));
  const double j_solver = partial_objective(ctx.red, s.process);
  const double gap = std::abs(j_solver - j_riccati);
  const double value = -ric.P * lq->sigma * lq->sigma;
  results["riccati"] = {{"P", ric.P},
                        {"K", ric.K},
                        {"closed_loop", ric.closed_loop},
                        {"iterations", ric.iterations},
                        {"infinite_horizon_value", value},
                        {"partial_objective", j_riccati}};
  results["solver"] = solve_json(s);
  results["solver"]["partial_objective"] = j_solver;
  results["gap"] = gap;
  results["tolerance"] = ctx.tol.oracle;
  ctx.summary << "Riccati " << csv::format_double(j_riccati) << ", solver "
              << csv::format_double(j_solver) << ", gap " << csv::format_double(gap) << "\n";
  bool ok = gap <= ctx.tol.oracle;

  if (const auto& ex = ctx.cfg.exhaustive) {
    const int Tx = ex->horizon;
    std::vector<Vec> grid;
    for (const double v : ex->grid) {
      grid.push_back(Vec::Constant(1, v));
    }
    const SearchResult best = exhaustive_search(ctx.red, Tx, grid);
    SolveOptions small = solve_options(ctx.cfg, Tx);
    small.terminal_penalty = 0.0;
    const double j_small = partial_objective(ctx.red, solve_truncated(ctx.red, small).process);
    const bool dominated = best.objective <= j_small + ctx.tol.oracle;
    results["exhaustive"] = {{"horizon", Tx},
                             {"evaluated", best.evaluated},
                             {"best_objective", best.objective},
                             {"solver_objective", j_small},
                             {"dominated", dominated}};
    ctx.summary << "exhaustive best " << csv::format_double(best.objective) << " over "
                << best.evaluated << " sequences\n";
    ok = ok && dominated;
  }
  return pass_fail(ok);
}

std::string status_name(int status) {
  switch (status) {
    case kPass:
      return "pass";
    case kFail:
      return "fail";
    case kInconclusive:
      return "inconclusive";
    default:
      return "error";
  }
}

}  // namespace

RunResult execute(const RunConfig& config) {
  config.validate();
  Context ctx{config, effective_tolerances(config), make_problem(config.family, config.params), {}, {}, {}};
  ctx.red = reduce(ctx.spec);

  RunResult out;
  Json results = Json::object();
  switch (config.command) {
    case Command::Reduce:
      out.status = cmd_reduce(ctx, results);
      break;
    case Command::Solve:
      out.status = cmd_solve(ctx, results);
      break;
    case Command::Costates:
      out.status = cmd_costates(ctx, results);
      break;
    case Command::CheckWeak:
      out.status = cmd_check(ctx, results, false);
      break;
    case Command::CheckStrong:
      out.status = cmd_check(ctx, results, true);
      break;
    case Command::Certify:
      out.status = cmd_certify(ctx, results);
      break;
    case Command::Hypotheses:
      out.status = cmd_hypotheses(ctx, results);
      break;
    case Command::OracleCompare:
      out.status = cmd_oracle_compare(ctx, results);
      break;
  }

  out.report["provenance"] = {{"tool", "ihoc"}, {"version", kToolVersion}, {"seed", config.seed}};
  out.report["config"] = config_echo(config);
  out.report["results"] = results;
  out.report["status"] = status_name(out.status);
  out.report["exit_code"] = out.status;
  Json side = Json::array();
  if (config.write_csv) {
    for (const auto& entry : ctx.sidecars.files) {
      side.push_back(entry.first);
    }
  }
  out.report["sidecars"] = side;

  std::ostringstream summary;
  summary << "ihoc " << to_string(config.command) << " (" << config.family << ", T = " << config.horizon
          << ")\n"
          << ctx.summary.str() << "status: " << status_name(out.status) << "\n";
  out.summary = summary.str();
  out.sidecars = std::move(ctx.sidecars.files);
  return out;
}

RunResult run(const RunConfig& config) {
  RunResult out = execute(config);
  const fs::path dir = config.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw UsageError("cannot create output directory '" + dir.string() + "'");
  }
  const auto write = [&dir](const std::string& name, const std::string& text) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) {
      throw UsageError("cannot write '" + (dir / name).string() + "'");
    }
    os << text;
  };
  write("report.json", out.report.dump(2) + "\n");
  write("summary.txt", out.summary);
  if (config.write_csv) {
    for (const auto& [name, text] : out.sidecars) {
      write(name, text);
    }
  }
  return out;
}

}  // namespace ihoc::cli
