#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vropt/rng.hpp"

namespace vropt {

enum class dist_kind { uniform, lipschitz, custom };

// Index distribution with an alias table for O(1) weighted draws. Immutable
// after construction; each solver run draws through its own Rng.
class SamplingDist {
 public:
  static SamplingDist uniform(std::size_t n, std::span<const double> lipschitz);
  static SamplingDist lipschitz_weighted(std::span<const double> lipschitz);
  static SamplingDist custom(std::vector<double> probs, std::span<const double> lipschitz);

  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }
  dist_kind kind() const { return kind_; }

  // L~ = max_j L_j / (n p_j); L_max for uniform, L_avg for Lipschitz weights
  double l_tilde() const { return l_tilde_; }

  std::size_t sample(Rng& rng) const {
    const std::size_t cell = static_cast<std::size_t>(rng.next_below(probs_.size()));
    return rng.next_double() < alias_prob_[cell] ? cell : alias_[cell];
  }

  // expected draw probability implied by the table cells; used to verify that
  // the alias construction reproduces probs exactly
  std::vector<double> table_expectation() const;

 private:
  SamplingDist(std::vector<double> probs, dist_kind kind, std::span<const double> lipschitz);
  void build_alias();

  std::vector<double> probs_;
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_;
  dist_kind kind_ = dist_kind::uniform;
  double l_tilde_ = 0.0;
};

SamplingDist build_dist(std::span<const double> lipschitz, dist_kind kind);

// b distinct indices from {0..n-1}, uniform over all C(n,b) subsets
// (Floyd's algorithm), returned sorted.
std::vector<std::uint32_t> sample_batch(std::size_t n, std::size_t b, Rng& rng);

}  // namespace vropt
