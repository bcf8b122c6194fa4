#include "vropt/diagnostics.hpp"

#include <cmath>
#include <memory>
#include <ostream>

#include "vropt/bench.hpp"
#include "vropt/estimator.hpp"
#include "vropt/solvers.hpp"

namespace vropt {

namespace {

CompositeProblem toy_logistic(std::size_t n, std::size_t d, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.d = d;
  SparseDataset ds = gen_synthetic(spec, seed);
  return make_problem(std::make_shared<const SparseDataset>(std::move(ds)),
                      ComponentLoss::logistic(0.05), Regularizer::l2(0.01));
}

vec random_point(std::size_t d, Rng& rng) {
  vec x(d);
  for (double& v : x) v = rng.next_gaussian();
  return x;
}

bool report(std::ostream& out, const char* name, bool ok, double detail) {
  out << (ok ? "[ok]   " : "[FAIL] ") << name << "  (" << detail << ")\n";
  return ok;
}

}  // namespace

bool run_diagnostics(std::ostream& out) {
  bool all_ok = true;
  Rng rng(20240531);

  {  // alias table reproduces the probabilities exactly in expectation
    std::vector<double> L(17);
    for (double& v : L) v = 0.1 + rng.next_double();
    const SamplingDist dist = build_dist(L, dist_kind::lipschitz);
    const std::vector<double> expected = dist.table_expectation();
    double dev = 0.0;
    for (std::size_t i = 0; i < L.size(); ++i)
      dev = std::max(dev, std::abs(expected[i] - dist.prob(i)));
    all_ok &= report(out, "alias table cell expectation", dev < 1e-12, dev);
  }

  {  // estimator unbiasedness by exact enumeration
    const CompositeProblem p = toy_logistic(12, 5, 7);
    const SamplingDist dist = build_dist(p.lipschitz, dist_kind::lipschitz);
    OracleCounter oc;
    const vec x = random_point(5, rng);
    const Snapshot snap = take_snapshot(p, random_point(5, rng), oc);
    vec mean(5, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      axpy(dist.prob(i), vr_grad(p, dist, snap, i, x, oc), mean);
    const vec g = full_grad(p, x);
    const double dev = max_abs_diff(mean, g);
    all_ok &= report(out, "vr estimator unbiasedness (exact)", dev < 1e-12, dev);
  }

  {  // variance bound
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const CompositeProblem p = toy_logistic(10, 4, 100 + trial);
      const SamplingDist dist =
          build_dist(p.lipschitz, trial % 2 ? dist_kind::uniform : dist_kind::lipschitz);
      OracleCounter oc;
      const vec x = random_point(4, rng);
      const Snapshot snap = take_snapshot(p, random_point(4, rng), oc);
      const vec g = full_grad(p, x);
      double inner = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) inner += g[j] * (x[j] - snap.anchor[j]);
      const double bound =
          2.0 * dist.l_tilde() * (snap.anchor_value - smooth_value(p, x) + inner);
      const double var = exact_variance(p, dist, snap, x);
      worst = std::max(worst, var - bound);
      ok &= var <= bound + 1e-12 * std::max(1.0, bound);
    }
    all_ok &= report(out, "estimator variance bound", ok, worst);
  }

  {  // momentum recursion identity and decay envelope
    bool ok = true;
    double worst = 0.0;
    double w = 0.9;
    for (int s = 1; s <= 50; ++s) {
      const double w_next = omega_next(w);
      const double resid = (1.0 - w_next) / (w_next * w_next) - 1.0 / (w * w);
      worst = std::max(worst, std::abs(resid));
      ok &= std::abs(resid) < 1e-10 && w_next <= 2.0 / (s + 2) && w_next > 0.0;
      w = w_next;
    }
    all_ok &= report(out, "momentum recursion", ok, worst);
  }

  {  // prox non-expansiveness
    bool ok = true;
    double worst = 0.0;
    const Regularizer regs[] = {Regularizer::zero(), Regularizer::l2(0.3),
                                Regularizer::l1(0.2), Regularizer::elastic_net(0.3, 0.2)};
    for (const auto& g : regs)
      for (int trial = 0; trial < 50; ++trial) {
        const vec u = random_point(6, rng), v = random_point(6, rng);
        const double gamma = 0.05 + rng.next_double();
        vec pu(6), pv(6), du(6), dv(6);
        reg_prox(g, u, gamma, pu);
        reg_prox(g, v, gamma, pv);
        for (std::size_t j = 0; j < 6; ++j) {
          du[j] = pu[j] - pv[j];
          dv[j] = u[j] - v[j];
        }
        worst = std::max(worst, norm2(du) - norm2(dv));
        ok &= norm2(du) <= norm2(dv) + 1e-12;
      }
    all_ok &= report(out, "prox non-expansiveness", ok, worst);
  }

  {  // solver determinism: identical seeds give identical traces
    const CompositeProblem p = toy_logistic(30, 6, 11);
    SolverConfig cfg;
    cfg.method = method_kind::asvrg_sc;
    cfg.epochs = 3;
    cfg.seed = 5;
    RunOptions opts;
    opts.record_time = false;
    const SolveResult a = solve(p, cfg, vec(6, 0.0), opts);
    const SolveResult b = solve(p, cfg, vec(6, 0.0), opts);
    bool ok = a.trace.records.size() == b.trace.records.size();
    double dev = 0.0;
    for (std::size_t k = 0; ok && k < a.trace.records.size(); ++k) {
      ok &= a.trace.records[k].objective == b.trace.records[k].objective &&
            a.trace.records[k].oracle_calls == b.trace.records[k].oracle_calls;
      dev = std::max(dev, std::abs(a.trace.records[k].objective - b.trace.records[k].objective));
    }
    all_ok &= report(out, "seeded run determinism", ok, dev);
  }

  {  // Moreau sandwich on the hinge
    SyntheticSpec spec;
    spec.n = 15;
    spec.d = 4;
    SparseDataset ds = gen_synthetic(spec, 23);
    const CompositeProblem p = make_problem(
        std::make_shared<const SparseDataset>(std::move(ds)), ComponentLoss::hinge(),
        Regularizer::l2(0.1));
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const vec x = random_point(4, rng);
      const std::size_t i = trial % p.size();
      const double delta = 0.5 + 2.0 * rng.next_double();
      const double env = moreau_value(p, i, x, delta);
      const double raw = std::max(0.0, 1.0 - p.data->labels[i] * p.data->rows[i].dot(x));
      const double gsq = p.data->rows[i].squared_norm;
      ok &= env <= raw + 1e-12 && raw <= env + gsq / (2.0 * delta) + 1e-12;
      worst = std::max(worst, std::max(env - raw, raw - env - gsq / (2.0 * delta)));
    }
    all_ok &= report(out, "Moreau envelope sandwich", ok, worst);
  }

  return all_ok;
}

}  // namespace vropt
