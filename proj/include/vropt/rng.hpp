#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vropt {

// Deterministic 64-bit generator. Draws are derived from raw mt19937_64
// output only; std::*_distribution adapters are implementation-defined and
// would break the identical-seeds-identical-sequences guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1), 53 random bits
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
    std::uint64_t r;
    do {
      r = engine_() & mask;
    } while (r >= n);
    return r;
  }

  // standard normal via Box-Muller
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace vropt
