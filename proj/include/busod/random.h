#pragma once

#include <cstdint>
#include <random>

namespace busod {

// Portable random stream: std::mt19937_64 has a fully specified output
// sequence, and the helpers below derive values from its raw output only, so
// results do not depend on the standard library's distribution classes.
class rng {
public:
  explicit rng(std::uint64_t seed) : engine_{seed} {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    auto const span = static_cast<std::uint64_t>(hi - lo) + 1U;
    if (span == 0U) {
      return static_cast<std::int64_t>(next());
    }
    auto const limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = 0;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next() >> 11U) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::mt19937_64 engine_;
};

}  // namespace busod
