#include <cassert>
#include <cmath>

#include "solver_common.hpp"

namespace vropt {

namespace {

using detail::TraceBuilder;

struct AsvrgParams {
  double eta = 0.0;
  double omega = 0.0;  // omega_0 for the non-SC solver
  std::size_t m = 0;
  std::size_t m1 = 0;
  double tau_b = 1.0;
  int restart_every = 0;
};

std::size_t inner_iterations(std::size_t m_s, std::size_t b) {
  return b == 1 ? m_s : m_s / b;
}

void check_batch(const SolverConfig& cfg, std::size_t n) {
  if (cfg.batch < 1 || cfg.batch > n)
    throw config_error("batch size must satisfy 1 <= b <= n");
  // subsets are drawn uniformly; per-element reweighting under a non-uniform
  // law would bias the mini-batch estimator
  if (cfg.batch > 1 && cfg.sampling != dist_kind::uniform)
    throw config_error("weighted mini-batch sampling is unsupported; use uniform sampling");
}

AsvrgParams resolve_sc(const CompositeProblem& p, const SolverConfig& cfg, double l_tilde) {
  if (!(p.mu > 0.0))
    throw config_error("asvrg_sc needs a strongly convex objective (mu > 0); use asvrg_nsc");
  detail::require_smooth_loss(p, "asvrg_sc");
  const std::size_t n = p.size();
  check_batch(cfg, n);

  AsvrgParams out;
  out.m = detail::default_m(cfg, n);
  out.tau_b = tau(n, cfg.batch);

  switch (cfg.omega_rule) {
    case omega_rule_kind::table_preset: {
      const PresetParams pr = table_preset(cfg.option, out.m, p.mu, l_tilde);
      out.eta = cfg.eta > 0.0 ? cfg.eta : pr.eta;
      out.omega = cfg.omega > 0.0 ? cfg.omega : pr.omega;
      out.m = pr.m;
      break;
    }
    case omega_rule_kind::fixed:
      out.eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (3.0 * l_tilde);
      if (!(cfg.omega > 0.0)) throw config_error("fixed omega rule needs omega > 0");
      out.omega = cfg.omega;
      break;
    case omega_rule_kind::optimal:
      out.eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (3.0 * l_tilde);
      out.omega = omega_optimal(out.m, p.mu, out.eta, l_tilde);
      break;
  }

  const double bound = momentum_bound(l_tilde, out.eta, out.tau_b);
  if (!(bound > 0.0))
    throw config_error("step size too large: the momentum bound is non-positive");
  if (!(out.omega > 0.0) || out.omega > bound * (1.0 + 1e-12) || out.omega > 1.0)
    throw config_error("momentum weight violates 0 < omega <= 1 - tau(b)*L~*eta/(1 - L~*eta)");

  out.m1 = detail::default_m1(cfg, n, out.m);
  if (inner_iterations(out.m1, cfg.batch) == 0 || inner_iterations(out.m, cfg.batch) == 0)
    throw config_error("epoch length too small for the batch size");

  if (cfg.restart) {
    if (cfg.restart_every > 0) {
      out.restart_every = cfg.restart_every;
    } else {
      const double s = 2.0 * ((1.0 - out.omega) / out.omega +
                              out.omega / (out.eta * static_cast<double>(out.m) * p.mu));
      out.restart_every = static_cast<int>(std::ceil(s - 1e-12));
    }
    if (out.restart_every < 1) out.restart_every = 1;
  }
  return out;
}

AsvrgParams resolve_nsc(const CompositeProblem& p, const SolverConfig& cfg, double l_tilde) {
  detail::require_smooth_loss(p, "asvrg_nsc");
  const std::size_t n = p.size();
  check_batch(cfg, n);

  AsvrgParams out;
  out.m = detail::default_m(cfg, n);
  out.m1 = detail::default_m1(cfg, n, out.m);
  out.tau_b = tau(n, cfg.batch);
  out.eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (3.0 * l_tilde);
  if (!(l_tilde * out.eta < 0.5))
    throw config_error("asvrg_nsc needs eta < 1/(2 L~) so that omega_0 is positive");
  out.omega = momentum_bound(l_tilde, out.eta, out.tau_b);  // omega_0
  if (inner_iterations(out.m1, cfg.batch) == 0 || inner_iterations(out.m, cfg.batch) == 0)
    throw config_error("epoch length too small for the batch size");
  return out;
}

struct InnerBuffers {
  vec grad, s1, s2, ytmp;
  std::vector<std::uint32_t> batch;
};

// one epoch of stochastic steps shared by the SC and non-SC variants:
//   y_t = prox_{g, eta/omega}(y_{t-1} - (eta/omega) * vr_grad)
//   x_t = x~ + omega (y_t - x~)
void inner_loop(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
                double omega, double eta, std::size_t iters, std::size_t b, Rng& rng, vec& x,
                vec& y, vec& sum_x, OracleCounter& oc, InnerBuffers& bu) {
  const std::size_t d = x.size();
  const double step = eta / omega;
  for (std::size_t t = 0; t < iters; ++t) {
    if (b == 1) {
      const std::size_t i = dist.sample(rng);
      vr_grad(p, dist, snap, i, x, bu.s1, bu.grad, oc);
    } else {
      bu.batch = sample_batch(p.size(), b, rng);
      vr_grad_batch(p, dist, snap, bu.batch, x, bu.s1, bu.s2, bu.grad, oc);
    }
    for (std::size_t j = 0; j < d; ++j) bu.ytmp[j] = y[j] - step * bu.grad[j];
    reg_prox(p.reg, bu.ytmp, step, y);
    for (std::size_t j = 0; j < d; ++j)
      x[j] = snap.anchor[j] + omega * (y[j] - snap.anchor[j]);
#ifndef NDEBUG
    for (std::size_t j = 0; j < d; ++j)
      assert(x[j] == snap.anchor[j] + omega * (y[j] - snap.anchor[j]));
#endif
    axpy(1.0, x, sum_x);
  }
}

}  // namespace

SolveResult asvrg_sc(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                     const RunOptions& opts) {
  detail::check_x0(p, x0);
  const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
  const AsvrgParams prm = resolve_sc(p, cfg, dist.l_tilde());
  const std::size_t d = p.dim();

  SolveResult res;
  res.method = method_name(method_kind::asvrg_sc);
  res.eta = prm.eta;
  res.omega0 = prm.omega;
  res.m = prm.m;
  res.restart_every = prm.restart_every;

  Rng rng(cfg.seed);
  OracleCounter oc;
  TraceBuilder tb(p, opts);
  InnerBuffers bu;
  bu.grad.resize(d);
  bu.s1.resize(d);
  bu.s2.resize(d);
  bu.ytmp.resize(d);

  vec xt = x0;  // snapshot x~
  vec x = x0, y = x0, sum_x(d, 0.0);
  vec restart_sum(d, 0.0);
  int restart_count = 0;

  bool stop = tb.record(res, 0, xt, oc);
  std::size_t m_s = prm.m1;
  for (int s = 1; s <= cfg.epochs && !stop; ++s) {
    const Snapshot snap = take_snapshot(p, xt, oc);
    if (cfg.option == option_kind::option_i) {
      x = xt;
      y = xt;
    }
    const std::size_t iters = inner_iterations(m_s, cfg.batch);
    set_zero(sum_x);
    inner_loop(p, dist, snap, prm.omega, prm.eta, iters, cfg.batch, rng, x, y, sum_x, oc, bu);
    for (std::size_t j = 0; j < d; ++j) xt[j] = sum_x[j] / static_cast<double>(iters);
    m_s = detail::grow_epoch_len(m_s, cfg.rho, prm.m);
    if (cfg.option == option_kind::option_ii)
      for (std::size_t j = 0; j < d; ++j)
        x[j] = (1.0 - prm.omega) * xt[j] + prm.omega * y[j];
    if (prm.restart_every > 0) {
      axpy(1.0, xt, restart_sum);
      if (++restart_count == prm.restart_every) {
        for (std::size_t j = 0; j < d; ++j)
          xt[j] = restart_sum[j] / static_cast<double>(restart_count);
        x = xt;
        y = xt;
        set_zero(restart_sum);
        restart_count = 0;
      }
    }
    stop = tb.record(res, s, xt, oc);
  }
  res.x = xt;
  res.oracle_calls = oc.calls;
  return res;
}

SolveResult asvrg_nsc(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                      const RunOptions& opts) {
  detail::check_x0(p, x0);
  const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
  const AsvrgParams prm = resolve_nsc(p, cfg, dist.l_tilde());
  const std::size_t d = p.dim();

  SolveResult res;
  res.method = method_name(method_kind::asvrg_nsc);
  res.eta = prm.eta;
  res.omega0 = prm.omega;
  res.m = prm.m;

  Rng rng(cfg.seed);
  OracleCounter oc;
  TraceBuilder tb(p, opts);
  InnerBuffers bu;
  bu.grad.resize(d);
  bu.s1.resize(d);
  bu.s2.resize(d);
  bu.ytmp.resize(d);

  vec xt = x0;       // snapshot x~
  vec y_tilde = x0;  // y~ carried across epochs
  vec x(d, 0.0), y(d, 0.0), sum_x(d, 0.0);
  double omega = prm.omega;

  bool stop = tb.record(res, 0, xt, oc);
  std::size_t m_s = prm.m1;
  for (int s = 1; s <= cfg.epochs && !stop; ++s) {
    const Snapshot snap = take_snapshot(p, xt, oc);
    for (std::size_t j = 0; j < d; ++j)
      x[j] = (1.0 - omega) * xt[j] + omega * y_tilde[j];
    y = y_tilde;
    const std::size_t iters = inner_iterations(m_s, cfg.batch);
    set_zero(sum_x);
    inner_loop(p, dist, snap, omega, prm.eta, iters, cfg.batch, rng, x, y, sum_x, oc, bu);
    for (std::size_t j = 0; j < d; ++j) xt[j] = sum_x[j] / static_cast<double>(iters);
    y_tilde = y;
    omega = omega_next(omega);
    m_s = detail::grow_epoch_len(m_s, cfg.rho, prm.m);
    stop = tb.record(res, s, xt, oc);
  }
  res.x = xt;
  res.oracle_calls = oc.calls;
  return res;
}

SolveResult asvrg_plain(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                        const RunOptions& opts) {
  detail::check_x0(p, x0);
  detail::require_smooth_loss(p, "asvrg_plain");
  detail::require_unit_batch(cfg, "asvrg_plain");
  if (!p.reg.smooth())
    throw config_error("asvrg_plain handles g through its gradient and needs a smooth g");
  const std::size_t n = p.size();
  const std::size_t d = p.dim();
  const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (3.0 * dist.l_tilde());
  const std::size_t m = detail::default_m(cfg, n);
  const std::size_t m1 = detail::default_m1(cfg, n, m);
  const snapshot_kind snap_rule = cfg.snapshot.value_or(snapshot_kind::average);

  SolveResult res;
  res.method = method_name(method_kind::asvrg_plain);
  res.eta = eta;
  res.omega0 = 1.0;
  res.m = m;

  Rng rng(cfg.seed);
  OracleCounter oc;
  TraceBuilder tb(p, opts);
  vec grad(d), greg(d), scratch(d), sum_x(d, 0.0);

  vec xt = x0;  // snapshot x~
  vec x = x0;   // carried across epochs
  bool stop = tb.record(res, 0, xt, oc);
  std::size_t m_s = m1;
  for (int s = 1; s <= cfg.epochs && !stop; ++s) {
    const Snapshot snap = take_snapshot(p, xt, oc);
    set_zero(sum_x);
    for (std::size_t t = 0; t < m_s; ++t) {
      const std::size_t i = dist.sample(rng);
      vr_grad(p, dist, snap, i, x, scratch, grad, oc);
      reg_grad(p.reg, x, greg);
      for (std::size_t j = 0; j < d; ++j) x[j] -= eta * (grad[j] + greg[j]);
      axpy(1.0, x, sum_x);
    }
    if (snap_rule == snapshot_kind::average)
      for (std::size_t j = 0; j < d; ++j) xt[j] = sum_x[j] / static_cast<double>(m_s);
    else
      xt = x;
    m_s = detail::grow_epoch_len(m_s, cfg.rho, m);
    stop = tb.record(res, s, xt, oc);
  }
  res.x = xt;
  res.oracle_calls = oc.calls;
  return res;
}

void validate_solver_config(const CompositeProblem& p, const SolverConfig& cfg) {
  switch (cfg.method) {
    case method_kind::asvrg_sc: {
      const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
      resolve_sc(p, cfg, dist.l_tilde());
      return;
    }
    case method_kind::asvrg_nsc: {
      const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
      resolve_nsc(p, cfg, dist.l_tilde());
      return;
    }
    case method_kind::asvrg_plain:
      detail::require_smooth_loss(p, "asvrg_plain");
      detail::require_unit_batch(cfg, "asvrg_plain");
      if (!p.reg.smooth())
        throw config_error("asvrg_plain handles g through its gradient and needs a smooth g");
      build_dist(p.lipschitz, cfg.sampling);
      return;
    case method_kind::svrg:
    case method_kind::prox_sgd:
    case method_kind::katyusha:
      detail::require_smooth_loss(p, method_name(cfg.method));
      detail::require_unit_batch(cfg, method_name(cfg.method));
      build_dist(p.lipschitz, cfg.sampling);
      return;
    case method_kind::saga:
      detail::require_smooth_loss(p, "saga");
      detail::require_unit_batch(cfg, "saga");
      return;
    case method_kind::adapt_reg: {
      detail::require_smooth_loss(p, "adapt_reg");
      if (cfg.stages < 1) throw config_error("adapt_reg needs at least one stage");
      const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
      // stage problems gain sigma in both mu and L_i; validate the first stage
      const double lt = dist.l_tilde();
      const double sigma0 = cfg.sigma0 > 0.0 ? cfg.sigma0 : lt / static_cast<double>(p.size());
      CompositeProblem pa = augment_problem(p, sigma0, vec(p.dim(), 0.0));
      SolverConfig inner = cfg;
      inner.method = method_kind::asvrg_sc;
      validate_solver_config(pa, inner);
      return;
    }
    case method_kind::adapt_smooth: {
      if (p.loss.kind != loss_kind::hinge)
        throw config_error("adapt_smooth applies to the raw hinge loss");
      if (cfg.stages < 1) throw config_error("adapt_smooth needs at least one stage");
      const double g = p.g_lipschitz;
      const double delta0 = cfg.delta0 > 0.0 ? cfg.delta0 : std::max(g * g, 1e-8);
      CompositeProblem ps = smoothed_problem(p, delta0);
      SolverConfig inner = cfg;
      inner.method = p.mu > 0.0 ? method_kind::asvrg_sc : method_kind::adapt_reg;
      validate_solver_config(ps, inner);
      return;
    }
  }
}

}  // namespace vropt
