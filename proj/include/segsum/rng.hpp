#pragma once

#include <cstdint>
#include <random>

#include "segsum/domain.hpp"

namespace segsum {

// splitmix64 finalizer; used to derive independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(master ^ mix64(stream + 0x5851f42d4c957f2dULL));
}

/// Deterministic generator. std::mt19937_64's output sequence is fixed by the
/// standard; the range reductions below are our own so results do not depend
/// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound), bound in [1, 2^64].
  UInt uniform_below(UInt bound) {
    if (bound == kTwoPow64) return next();
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t threshold = (0 - b) % b;  // 2^64 mod b
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % b;
    }
  }

  /// Uniform in [-radius, radius].
  Int uniform_symmetric(std::uint64_t radius) {
    return static_cast<Int>(uniform_below(UInt{2} * radius + 1)) - static_cast<Int>(radius);
  }

 private:
  std::mt19937_64 engine_;
};

// Stream identifiers. Each party's segments and the initiator's masks come
// from separate streams so changing one never shifts another.
inline constexpr std::uint64_t kMaskStream = 0xffff'ffff'0000'0001ULL;
inline constexpr std::uint64_t kMonteCarloStream = 0xffff'ffff'0000'0002ULL;

inline Rng segment_rng(std::uint64_t seed, std::size_t party) { return Rng(derive_seed(seed, party)); }
inline Rng mask_rng(std::uint64_t seed) { return Rng(derive_seed(seed, kMaskStream)); }

}  // namespace segsum
