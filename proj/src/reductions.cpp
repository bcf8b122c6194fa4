#include <cmath>

#include "solver_common.hpp"

namespace vropt {

namespace {

// Stitch a stage trace onto the combined one: epochs and oracle calls become
// cumulative, and the duplicate epoch-0 record of later stages is dropped so
// oracle counts stay strictly increasing.
void append_stage(SolveResult& total, const SolveResult& stage, bool first_stage) {
  const int epoch_base = total.trace.records.empty() ? 0 : total.trace.records.back().epoch;
  const double time_base =
      total.trace.records.empty() ? 0.0 : total.trace.records.back().elapsed_s;
  for (std::size_t k = 0; k < stage.trace.records.size(); ++k) {
    if (!first_stage && k == 0) continue;
    TraceRecord rec = stage.trace.records[k];
    rec.epoch += epoch_base;
    rec.oracle_calls += total.oracle_calls;
    rec.elapsed_s += time_base;
    total.trace.records.push_back(rec);
  }
  total.oracle_calls += stage.oracle_calls;
  if (stage.best_objective < total.best_objective) {
    total.best_objective = stage.best_objective;
    total.best_x = stage.best_x;
  }
}

bool reached_stop(const SolveResult& total, const RunOptions& opts) {
  if (!(opts.stop_gap > 0.0) || !opts.f_star || total.trace.records.empty()) return false;
  return total.trace.records.back().gap <= opts.stop_gap;
}

}  // namespace

// Stage s minimizes F(x) + (sigma_s/2)||x - x0||^2 with the strongly convex
// solver, warm-started from the previous stage; sigma halves per stage.
SolveResult adapt_reg(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                      const RunOptions& opts) {
  detail::check_x0(p, x0);
  detail::require_smooth_loss(p, "adapt_reg");
  if (cfg.stages < 1) throw config_error("adapt_reg needs at least one stage");
  const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
  double sigma = cfg.sigma0 > 0.0 ? cfg.sigma0
                                  : dist.l_tilde() / static_cast<double>(p.size());

  RunOptions stage_opts = opts;
  if (!stage_opts.objective_fn)
    stage_opts.objective_fn = [&p](const vec& x) { return objective_value(p, x); };
  stage_opts.on_snapshot = nullptr;  // reported per stage boundary below

  SolveResult total;
  total.method = method_name(method_kind::adapt_reg);
  vec x = x0;
  for (int stage = 0; stage < cfg.stages; ++stage) {
    CompositeProblem pa = augment_problem(p, sigma, x0);
    SolverConfig inner = cfg;
    inner.method = method_kind::asvrg_sc;
    inner.seed = cfg.seed + static_cast<std::uint64_t>(stage);
    const SolveResult r = asvrg_sc(pa, inner, x, stage_opts);
    append_stage(total, r, stage == 0);
    x = r.x;
    if (stage == 0) {
      total.eta = r.eta;
      total.omega0 = r.omega0;
      total.m = r.m;
    }
    if (opts.on_snapshot) opts.on_snapshot(stage, x);
    sigma *= 0.5;
    if (reached_stop(total, opts)) break;
  }
  total.x = x;
  return total;
}

// Stage s minimizes the delta_s-smoothed problem, doubling delta per stage.
// With a strongly convex g each stage runs asvrg_sc; otherwise the adaptive
// regularization reduction is composed on top.
SolveResult adapt_smooth(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                         const RunOptions& opts) {
  detail::check_x0(p, x0);
  if (p.loss.kind != loss_kind::hinge)
    throw config_error("adapt_smooth applies to the raw hinge loss");
  if (cfg.stages < 1) throw config_error("adapt_smooth needs at least one stage");
  const double g = p.g_lipschitz;
  double delta = cfg.delta0 > 0.0 ? cfg.delta0 : std::max(g * g, 1e-8);

  RunOptions stage_opts = opts;
  if (!stage_opts.objective_fn)
    stage_opts.objective_fn = [&p](const vec& x) { return objective_value(p, x); };
  stage_opts.on_snapshot = nullptr;

  SolveResult total;
  total.method = method_name(method_kind::adapt_smooth);
  vec x = x0;
  for (int stage = 0; stage < cfg.stages; ++stage) {
    CompositeProblem ps = smoothed_problem(p, delta);
    SolverConfig inner = cfg;
    inner.seed = cfg.seed + static_cast<std::uint64_t>(stage);
    SolveResult r;
    if (ps.mu > 0.0) {
      inner.method = method_kind::asvrg_sc;
      r = asvrg_sc(ps, inner, x, stage_opts);
    } else {
      inner.method = method_kind::adapt_reg;
      r = adapt_reg(ps, inner, x, stage_opts);
    }
    append_stage(total, r, stage == 0);
    x = r.x;
    if (stage == 0) {
      total.eta = r.eta;
      total.omega0 = r.omega0;
      total.m = r.m;
    }
    if (opts.on_snapshot) opts.on_snapshot(stage, x);
    delta *= 2.0;
    if (reached_stop(total, opts)) break;
  }
  total.x = x;
  return total;
}

}  // namespace vropt
