#include <cmath>

#include "solver_common.hpp"

namespace vropt {

namespace {
using detail::TraceBuilder;
}

// Prox-SVRG: x_t = prox_{g,eta}(x_{t-1} - eta * vr_grad); snapshot and next
// epoch both start from the last iterate unless overridden.
SolveResult svrg(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                 const RunOptions& opts) {
  detail::check_x0(p, x0);
  detail::require_smooth_loss(p, "svrg");
  detail::require_unit_batch(cfg, "svrg");
  const std::size_t n = p.size();
  const std::size_t d = p.dim();
  const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (10.0 * dist.l_tilde());
  const std::size_t m = detail::default_m(cfg, n);
  const std::size_t m1 = detail::default_m1(cfg, n, m);
  const snapshot_kind snap_rule = cfg.snapshot.value_or(snapshot_kind::last);

  SolveResult res;
  res.method = method_name(method_kind::svrg);
  res.eta = eta;
  res.m = m;

  Rng rng(cfg.seed);
  OracleCounter oc;
  TraceBuilder tb(p, opts);
  vec grad(d), scratch(d), tmp(d), sum_x(d, 0.0);

  vec xt = x0;
  vec x = x0;
  bool stop = tb.record(res, 0, xt, oc);
  std::size_t m_s = m1;
  for (int s = 1; s <= cfg.epochs && !stop; ++s) {
    const Snapshot snap = take_snapshot(p, xt, oc);
    set_zero(sum_x);
    for (std::size_t t = 0; t < m_s; ++t) {
      const std::size_t i = dist.sample(rng);
      vr_grad(p, dist, snap, i, x, scratch, grad, oc);
      for (std::size_t j = 0; j < d; ++j) tmp[j] = x[j] - eta * grad[j];
      reg_prox(p.reg, tmp, eta, x);
      axpy(1.0, x, sum_x);
    }
    if (snap_rule == snapshot_kind::last)
      xt = x;
    else
      for (std::size_t j = 0; j < d; ++j) xt[j] = sum_x[j] / static_cast<double>(m_s);
    m_s = detail::grow_epoch_len(m_s, cfg.rho, m);
    stop = tb.record(res, s, xt, oc);
  }
  res.x = xt;
  res.oracle_calls = oc.calls;
  return res;
}

// Proximal SGD with eta_t = eta0/sqrt(t). Non-uniform sampling reweights the
// component gradient by 1/(n p_i) to stay unbiased.
SolveResult prox_sgd(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                     const RunOptions& opts) {
  detail::check_x0(p, x0);
  detail::require_smooth_loss(p, "prox_sgd");
  detail::require_unit_batch(cfg, "prox_sgd");
  const std::size_t n = p.size();
  const std::size_t d = p.dim();
  const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
  const double eta0 = cfg.eta > 0.0 ? cfg.eta : 1.0 / dist.l_tilde();
  const std::size_t m = detail::default_m(cfg, n);

  SolveResult res;
  res.method = method_name(method_kind::prox_sgd);
  res.eta = eta0;
  res.m = m;

  Rng rng(cfg.seed);
  OracleCounter oc;
  TraceBuilder tb(p, opts);
  vec grad(d), tmp(d);

  vec x = x0;
  bool stop = tb.record(res, 0, x, oc);
  std::uint64_t t_global = 0;
  for (int s = 1; s <= cfg.epochs && !stop; ++s) {
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t i = dist.sample(rng);
      component_grad(p, i, x, grad);
      oc.charge(1);
      const double w = 1.0 / (static_cast<double>(n) * dist.prob(i));
      const double eta_t = eta0 / std::sqrt(static_cast<double>(++t_global));
      for (std::size_t j = 0; j < d; ++j) tmp[j] = x[j] - eta_t * w * grad[j];
      reg_prox(p.reg, tmp, eta_t, x);
    }
    stop = tb.record(res, s, x, oc);
  }
  res.x = x;
  res.oracle_calls = oc.calls;
  return res;
}

// SAGA keeps one stored gradient per component (O(nd) memory) and always
// samples uniformly.
SolveResult saga(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                 const RunOptions& opts) {
  detail::check_x0(p, x0);
  detail::require_smooth_loss(p, "saga");
  detail::require_unit_batch(cfg, "saga");
  const std::size_t n = p.size();
  const std::size_t d = p.dim();
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (3.0 * p.l_max);
  const std::size_t m = detail::default_m(cfg, n);

  SolveResult res;
  res.method = method_name(method_kind::saga);
  res.eta = eta;
  res.m = m;

  Rng rng(cfg.seed);
  OracleCounter oc;
  TraceBuilder tb(p, opts);

  vec x = x0;
  bool stop = tb.record(res, 0, x, oc);

  std::vector<vec> table(n, vec(d, 0.0));
  vec bar(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    component_grad(p, i, x, table[i]);
    axpy(1.0 / static_cast<double>(n), table[i], bar);
  }
  oc.charge(n);

  vec fresh(d), tmp(d);
  for (int s = 1; s <= cfg.epochs && !stop; ++s) {
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t i = static_cast<std::size_t>(rng.next_below(n));
      component_grad(p, i, x, fresh);
      oc.charge(1);
      vec& old = table[i];
      for (std::size_t j = 0; j < d; ++j)
        tmp[j] = x[j] - eta * (fresh[j] - old[j] + bar[j]);
      reg_prox(p.reg, tmp, eta, x);
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t j = 0; j < d; ++j) {
        bar[j] += (fresh[j] - old[j]) * inv_n;
        old[j] = fresh[j];
      }
    }
    stop = tb.record(res, s, x, oc);
  }
  res.x = x;
  res.oracle_calls = oc.calls;
  return res;
}

// Katyusha with omega_2 fixed to 0.5 and eta = 1/(3 omega_1 L); the snapshot
// is the plain average of the inner y iterates.
SolveResult katyusha(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                     const RunOptions& opts) {
  detail::check_x0(p, x0);
  detail::require_smooth_loss(p, "katyusha");
  detail::require_unit_batch(cfg, "katyusha");
  const std::size_t n = p.size();
  const std::size_t d = p.dim();
  const SamplingDist dist = build_dist(p.lipschitz, cfg.sampling);
  const double L = dist.l_tilde();
  const std::size_t m = detail::default_m(cfg, n);
  const std::size_t m1 = detail::default_m1(cfg, n, m);

  double w1 = cfg.katyusha_omega1;
  if (!(w1 > 0.0)) {
    w1 = p.mu > 0.0 ? std::sqrt(static_cast<double>(m) * p.mu / (3.0 * L)) : 0.5;
    w1 = std::min(0.5, std::max(w1, 1e-6));
  }
  if (w1 > 0.5) throw config_error("katyusha needs omega_1 in (0, 1/2]");
  const double w2 = 0.5;
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (3.0 * w1 * L);

  SolveResult res;
  res.method = method_name(method_kind::katyusha);
  res.eta = eta;
  res.omega0 = w1;
  res.m = m;

  Rng rng(cfg.seed);
  OracleCounter oc;
  TraceBuilder tb(p, opts);
  vec grad(d), scratch(d), xk(d), tmp(d), sum_y(d, 0.0);

  vec xt = x0, y = x0, z = x0;
  bool stop = tb.record(res, 0, xt, oc);
  std::size_t m_s = m1;
  for (int s = 1; s <= cfg.epochs && !stop; ++s) {
    const Snapshot snap = take_snapshot(p, xt, oc);
    set_zero(sum_y);
    for (std::size_t t = 0; t < m_s; ++t) {
      for (std::size_t j = 0; j < d; ++j)
        xk[j] = (1.0 - w1 - w2) * y[j] + w1 * z[j] + w2 * xt[j];
      const std::size_t i = dist.sample(rng);
      vr_grad(p, dist, snap, i, xk, scratch, grad, oc);
      for (std::size_t j = 0; j < d; ++j) tmp[j] = z[j] - eta * grad[j];
      reg_prox(p.reg, tmp, eta, z);
      const double step_y = 1.0 / (3.0 * L);
      for (std::size_t j = 0; j < d; ++j) tmp[j] = xk[j] - step_y * grad[j];
      reg_prox(p.reg, tmp, step_y, y);
      axpy(1.0, y, sum_y);
    }
    for (std::size_t j = 0; j < d; ++j) xt[j] = sum_y[j] / static_cast<double>(m_s);
    m_s = detail::grow_epoch_len(m_s, cfg.rho, m);
    stop = tb.record(res, s, xt, oc);
  }
  res.x = xt;
  res.oracle_calls = oc.calls;
  return res;
}

SolveResult solve(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                  const RunOptions& opts) {
  switch (cfg.method) {
    case method_kind::asvrg_sc: return asvrg_sc(p, cfg, x0, opts);
    case method_kind::asvrg_nsc: return asvrg_nsc(p, cfg, x0, opts);
    case method_kind::asvrg_plain: return asvrg_plain(p, cfg, x0, opts);
    case method_kind::svrg: return svrg(p, cfg, x0, opts);
    case method_kind::prox_sgd: return prox_sgd(p, cfg, x0, opts);
    case method_kind::saga: return saga(p, cfg, x0, opts);
    case method_kind::katyusha: return katyusha(p, cfg, x0, opts);
    case method_kind::adapt_reg: return adapt_reg(p, cfg, x0, opts);
    case method_kind::adapt_smooth: return adapt_smooth(p, cfg, x0, opts);
  }
  throw config_error("unknown solver method");
}

SolveResult solve(const CompositeProblem& p, const SolverConfig& cfg) {
  return solve(p, cfg, vec(p.dim(), 0.0), RunOptions{});
}

}  // namespace vropt
