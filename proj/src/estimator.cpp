#include "vropt/estimator.hpp"

namespace vropt {

Snapshot take_snapshot(const CompositeProblem& p, vec anchor, OracleCounter& oc) {
  Snapshot snap;
  snap.full_gradient = full_grad(p, anchor);
  snap.anchor_value = smooth_value(p, anchor);
  snap.anchor = std::move(anchor);
  oc.charge(p.size());
  return snap;
}

void vr_grad(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
             std::size_t i, std::span<const double> x, vec& scratch, std::span<double> out,
             OracleCounter& oc) {
  scratch.resize(x.size());
  component_grad(p, i, x, out);
  component_grad(p, i, snap.anchor, scratch);
  const double w = 1.0 / (static_cast<double>(p.size()) * dist.prob(i));
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = (out[j] - scratch[j]) * w + snap.full_gradient[j];
  oc.charge(2);
}

vec vr_grad(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
            std::size_t i, const vec& x, OracleCounter& oc) {
  vec out(x.size());
  vec scratch;
  vr_grad(p, dist, snap, i, x, scratch, out, oc);
  return out;
}

void vr_grad_batch(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
                   std::span<const std::uint32_t> batch, std::span<const double> x,
                   vec& scratch_a, vec& scratch_b, std::span<double> out, OracleCounter& oc) {
  if (batch.empty()) throw std::invalid_argument("empty mini-batch");
  scratch_a.resize(x.size());
  scratch_b.resize(x.size());
  std::fill(out.begin(), out.end(), 0.0);
  const double n = static_cast<double>(p.size());
  for (std::uint32_t i : batch) {
    component_grad(p, i, x, scratch_a);
    component_grad(p, i, snap.anchor, scratch_b);
    const double w = 1.0 / (n * dist.prob(i));
    for (std::size_t j = 0; j < x.size(); ++j) out[j] += (scratch_a[j] - scratch_b[j]) * w;
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = out[j] * inv_b + snap.full_gradient[j];
  oc.charge(2 * batch.size());
}

vec vr_grad_batch(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
                  std::span<const std::uint32_t> batch, const vec& x, OracleCounter& oc) {
  vec out(x.size());
  vec sa, sb;
  vr_grad_batch(p, dist, snap, batch, x, sa, sb, out, oc);
  return out;
}

double exact_variance(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
                      std::span<const double> x) {
  const vec g = full_grad(p, vec(x.begin(), x.end()));
  OracleCounter scrap;
  vec est(x.size());
  vec scratch;
  double var = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    vr_grad(p, dist, snap, i, x, scratch, est, scrap);
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = est[j] - g[j];
      sq += d * d;
    }
    var += dist.prob(i) * sq;
  }
  return var;
}

double tau(std::size_t n, std::size_t b) {
  if (n <= 1) return 0.0;
  return static_cast<double>(n - b) / (static_cast<double>(b) * static_cast<double>(n - 1));
}

}  // namespace vropt
