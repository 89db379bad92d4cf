#pragma once

#include <cstdint>

#include "segsum/domain.hpp"
#include "segsum/rng.hpp"

namespace segsum {

/// Half-width of the range exact-mode segments are drawn from. Small enough
/// that k <= 2^31 draws cannot push the correcting segment out of int64 for
/// blocks away from the extremes.
inline constexpr std::uint64_t kExactSegmentRadius = std::uint64_t{1} << 31;

/// Splits a block into k additive segments.
///
/// Modular mode: the first k-1 segments are uniform over [0, M) and the last
/// one is the residue that makes the sum come out to the block, so any k-1
/// segments are independent of the block. Exact mode: the first k-1 segments
/// are uniform over [-2^31, 2^31] and the last one corrects; a correction that
/// leaves int64 throws Overflow.
inline SegmentVector split_block(const DataBlock& d, std::size_t k, Rng& rng, const ArithmeticMode& mode) {
  if (k < 1) throw Error(ErrorCode::InvalidSegmentCount, "cannot split into zero segments");
  check_block(d, mode);

  SegmentVector out;
  out.segments.reserve(k);
  Int running = 0;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const Int s = mode.is_modular() ? static_cast<Int>(rng.uniform_below(mode.modulus()))
                                    : rng.uniform_symmetric(kExactSegmentRadius);
    out.segments.push_back(s);
    running = domain_add(running, s, mode);
  }
  out.segments.push_back(domain_sub(d.value, running, mode));
  return out;
}

inline Int recombine(const SegmentVector& segs, const ArithmeticMode& mode) {
  if (segs.segments.empty()) throw Error(ErrorCode::InvalidSegmentCount, "no segments to recombine");
  Int total = 0;
  for (Int s : segs.segments) total = domain_add(total, s, mode);
  return total;
}

}  // namespace segsum
