#pragma once

#include <cstdint>
#include <span>

#include "vropt/objective.hpp"
#include "vropt/sampling.hpp"

namespace vropt {

// One oracle call = one component-gradient evaluation.
struct OracleCounter {
  std::uint64_t calls = 0;
  void charge(std::uint64_t k) { calls += k; }
};

// Anchor point with its full gradient; never mutated after creation.
struct Snapshot {
  vec anchor;         // x~
  vec full_gradient;  // mu~ = grad f(x~)
  double anchor_value = 0.0;  // f(x~)
};

// charges n oracle calls
Snapshot take_snapshot(const CompositeProblem& p, vec anchor, OracleCounter& oc);

// [grad f_i(x) - grad f_i(x~)] / (n p_i) + mu~. Anchor gradients are
// recomputed, not cached; charges 2 oracle calls.
void vr_grad(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
             std::size_t i, std::span<const double> x, vec& scratch, std::span<double> out,
             OracleCounter& oc);
vec vr_grad(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
            std::size_t i, const vec& x, OracleCounter& oc);

// (1/b) sum_{i in batch} [grad f_i(x) - grad f_i(x~)] / (n p_i) + mu~;
// charges 2b oracle calls. batch must hold distinct in-range indices.
void vr_grad_batch(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
                   std::span<const std::uint32_t> batch, std::span<const double> x,
                   vec& scratch_a, vec& scratch_b, std::span<double> out, OracleCounter& oc);
vec vr_grad_batch(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
                  std::span<const std::uint32_t> batch, const vec& x, OracleCounter& oc);

// E_i ||vr_grad_i - grad f(x)||^2 by exact enumeration. O(n d) per call;
// diagnostics and tests only, charges nothing.
double exact_variance(const CompositeProblem& p, const SamplingDist& dist, const Snapshot& snap,
                      std::span<const double> x);

// tau(b) = (n-b)/(b(n-1)); 0 when n == 1
double tau(std::size_t n, std::size_t b);

}  // namespace vropt
