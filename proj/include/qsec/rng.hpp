#pragma once

// Deterministic, platform-independent randomness.
//
// mt19937_64's output sequence is pinned by the C++ standard, so a seed fully
// determines every draw on every platform.  The derived draws below avoid
// std::uniform_int_distribution (whose mapping is implementation-defined) in
// favor of explicit rejection sampling.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace qsec {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform draw from {0, 1, ..., n-1} by rejection sampling.
  std::uint64_t uniform(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform(0) is undefined");
    // Largest multiple of n that fits; draws at or above it are rejected.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t draw = engine_();
      if (draw < limit) return draw % n;
    }
  }

  // Fair coin: true with probability 1/2.
  bool coin() { return (engine_() & 1u) != 0; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qsec
