#pragma once

// Reference computations for tests. Deliberately share nothing with the
// library's arithmetic: plain wide-integer folds and exhaustive enumeration.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "segsum/domain.hpp"

namespace segsum::oracle {

/// Sum of all values, reduced mod m when m != 0 (m == 0 means exact).
inline Int direct_sum(const std::vector<Int>& values, UInt m) {
  Int acc = 0;
  for (Int v : values) acc += v;  // |values| * 2^64 fits easily in 127 bits
  if (m == 0) return acc;
  Int r = acc % static_cast<Int>(m);
  return r < 0 ? r + static_cast<Int>(m) : r;
}

inline Int direct_sum(const std::vector<DataBlock>& blocks, UInt m) {
  std::vector<Int> v;
  for (const auto& b : blocks) v.push_back(b.value);
  return direct_sum(v, m);
}

inline UInt modulus_of(const ArithmeticMode& mode) { return mode.is_modular() ? mode.modulus() : 0; }

/// Counts unordered pairs {a, b} of ring positions whose members are the two
/// neighbours of some third party, by checking every party directly.
inline std::pair<std::uint64_t, std::uint64_t> sandwiching_pairs(std::size_t n) {
  std::uint64_t favourable = 0, total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      ++total;
      bool sandwiches = false;
      for (std::size_t v = 0; v < n; ++v) {
        const std::size_t l = (v + n - 1) % n, r = (v + 1) % n;
        if (v != a && v != b && ((l == a && r == b) || (l == b && r == a))) sandwiches = true;
      }
      if (sandwiches) ++favourable;
    }
  }
  return {favourable, total};
}

}  // namespace segsum::oracle
