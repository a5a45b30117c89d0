#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace slalomlab {

// Seeded generator for reproducible families. The engine is std::mt19937_64,
// whose output sequence is fixed by the standard; bounded draws use plain
// rejection sampling so results do not depend on the library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin(std::uint64_t num = 1, std::uint64_t den = 2) { return below(den) < num; }

  /// `count` distinct values from [0, bound), sorted.
  std::vector<std::uint64_t> distinct(std::uint64_t count, std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace slalomlab
