#include "vropt/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vropt/objective.hpp"

namespace vropt {

SamplingDist::SamplingDist(std::vector<double> probs, dist_kind kind,
                           std::span<const double> lipschitz)
    : probs_(std::move(probs)), kind_(kind) {
  const std::size_t n = probs_.size();
  if (n == 0) throw config_error("sampling distribution needs n >= 1");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p > 0.0)) throw config_error("every sampling probability must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw config_error("sampling probabilities must sum to 1");
  if (lipschitz.size() != n) throw config_error("lipschitz constants must match n");
  l_tilde_ = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    l_tilde_ = std::max(l_tilde_, lipschitz[j] / (static_cast<double>(n) * probs_[j]));
  build_alias();
}

void SamplingDist::build_alias() {
  const std::size_t n = probs_.size();
  alias_prob_.assign(n, 1.0);
  alias_.resize(n);
  for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::uint32_t>(i);

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = probs_[i] * static_cast<double>(n);

  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    large.pop_back();
    alias_prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // leftovers are 1 up to rounding
  for (std::uint32_t i : small) alias_prob_[i] = 1.0;
  for (std::uint32_t i : large) alias_prob_[i] = 1.0;
}

std::vector<double> SamplingDist::table_expectation() const {
  const std::size_t n = probs_.size();
  std::vector<double> expected(n, 0.0);
  for (std::size_t cell = 0; cell < n; ++cell) {
    expected[cell] += alias_prob_[cell] / static_cast<double>(n);
    expected[alias_[cell]] += (1.0 - alias_prob_[cell]) / static_cast<double>(n);
  }
  return expected;
}

SamplingDist SamplingDist::uniform(std::size_t n, std::span<const double> lipschitz) {
  if (n == 0) throw config_error("sampling distribution needs n >= 1");
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  return SamplingDist(std::move(probs), dist_kind::uniform, lipschitz);
}

SamplingDist SamplingDist::lipschitz_weighted(std::span<const double> lipschitz) {
  double sum = 0.0;
  for (double L : lipschitz) {
    if (!(L > 0.0)) throw config_error("Lipschitz-weighted sampling needs every L_i > 0");
    sum += L;
  }
  std::vector<double> probs(lipschitz.size());
  for (std::size_t i = 0; i < lipschitz.size(); ++i) probs[i] = lipschitz[i] / sum;
  return SamplingDist(std::move(probs), dist_kind::lipschitz, lipschitz);
}

SamplingDist SamplingDist::custom(std::vector<double> probs, std::span<const double> lipschitz) {
  return SamplingDist(std::move(probs), dist_kind::custom, lipschitz);
}

SamplingDist build_dist(std::span<const double> lipschitz, dist_kind kind) {
  switch (kind) {
    case dist_kind::uniform:
      for (double L : lipschitz)
        if (!(L > 0.0)) throw config_error("sampling needs every L_i > 0");
      return SamplingDist::uniform(lipschitz.size(), lipschitz);
    case dist_kind::lipschitz:
      return SamplingDist::lipschitz_weighted(lipschitz);
    case dist_kind::custom:
      throw config_error("custom distributions go through SamplingDist::custom");
  }
  throw config_error("unknown sampling kind");
}

std::vector<std::uint32_t> sample_batch(std::size_t n, std::size_t b, Rng& rng) {
  if (b < 1 || b > n) throw std::invalid_argument("batch size must satisfy 1 <= b <= n");
  std::vector<std::uint32_t> out;
  out.reserve(b);
  for (std::size_t j = n - b; j < n; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.next_below(j + 1));
    if (std::find(out.begin(), out.end(), t) != out.end())
      out.push_back(static_cast<std::uint32_t>(j));
    else
      out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vropt
