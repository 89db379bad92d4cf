#include "segsum/segmentation.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"

namespace segsum {
namespace {

TEST(SplitBlock, SingleSegmentIsTheBlock) {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    Rng rng(seed);
    EXPECT_EQ(split_block({10}, 1, rng, ArithmeticMode::modular()).segments, std::vector<Int>{10});
  }
}

TEST(SplitBlock, ZeroBlockSumsToZero) {
  const auto mode = ArithmeticMode::modular(100);
  Rng rng(5);
  const auto segs = split_block({0}, 4, rng, mode);
  ASSERT_EQ(segs.size(), 4u);
  for (Int s : segs.segments) EXPECT_TRUE(mode.contains(s));
  EXPECT_EQ(oracle::direct_sum(segs.segments, 100), 0);
}

TEST(SplitBlock, ExactModeSegmentsSumToBlock) {
  const auto mode = ArithmeticMode::exact_signed();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto segs = split_block({15}, 3, rng, mode);
    ASSERT_EQ(segs.size(), 3u);
    EXPECT_EQ(oracle::direct_sum(segs.segments, 0), 15);
  }
}

TEST(SplitBlock, ExactModeAllowsNegativeSegments) {
  const auto mode = ArithmeticMode::exact_signed();
  bool saw_negative = false;
  for (std::uint64_t seed = 0; seed < 20 && !saw_negative; ++seed) {
    Rng rng(seed);
    for (Int s : split_block({15}, 4, rng, mode).segments) saw_negative = saw_negative || s < 0;
  }
  EXPECT_TRUE(saw_negative);
}

TEST(SplitBlock, ExactCorrectionOverflowIsReported) {
  // The block sits at the int64 minimum; any positive draw pushes the
  // correcting segment below it.
  const auto mode = ArithmeticMode::exact_signed();
  int overflows = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    try {
      split_block({kExactMin}, 2, rng, mode);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Overflow);
      ++overflows;
    }
  }
  EXPECT_GT(overflows, 0);
}

TEST(SplitBlock, RejectsZeroSegmentsAndOutOfDomainBlocks) {
  Rng rng(1);
  EXPECT_THROW(split_block({1}, 0, rng, ArithmeticMode::modular()), Error);
  EXPECT_THROW(split_block({100}, 2, rng, ArithmeticMode::modular(100)), Error);
  EXPECT_THROW(split_block({-1}, 2, rng, ArithmeticMode::modular(100)), Error);
}

TEST(Recombine, Examples) {
  EXPECT_EQ(recombine({{10}}, ArithmeticMode::modular()), 10);
  EXPECT_EQ(recombine({{3, 5, 7}}, ArithmeticMode::exact_signed()), 15);
  EXPECT_EQ(recombine({{60, 60}}, ArithmeticMode::modular(100)), 20);
  EXPECT_THROW(recombine({}, ArithmeticMode::modular()), Error);
  EXPECT_THROW(recombine({{kExactMax, 1}}, ArithmeticMode::exact_signed()), Error);
}

TEST(SplitBlock, RoundTripAndDeterminismProperty) {
  Rng gen(2024);
  const std::array<ArithmeticMode, 4> modes{ArithmeticMode::modular(), ArithmeticMode::modular(16),
                                            ArithmeticMode::modular(1000003), ArithmeticMode::exact_signed()};
  for (int trial = 0; trial < 3000; ++trial) {
    const auto& mode = modes[trial % modes.size()];
    const std::size_t k = 1 + gen.uniform_below(64);
    const std::uint64_t seed = gen.next();
    const DataBlock d{mode.is_modular() ? static_cast<Int>(gen.uniform_below(mode.modulus()))
                                        : gen.uniform_symmetric(std::uint64_t{1} << 40)};
    Rng a(seed), b(seed);
    const auto first = split_block(d, k, a, mode);
    const auto second = split_block(d, k, b, mode);
    ASSERT_EQ(first, second);
    ASSERT_EQ(first.size(), k);
    ASSERT_EQ(recombine(first, mode), d.value);
    ASSERT_EQ(oracle::direct_sum(first.segments, oracle::modulus_of(mode)), d.value);
  }
}

// Coarse chi-square check of each free segment position against uniform over
// M = 16. 15 degrees of freedom; 60 is beyond the 1e-6 tail (about 46.8 is
// the 1e-4 point), so this only rejects a grossly broken splitter.
TEST(SplitBlock, FreeSegmentsLookUniform) {
  constexpr std::size_t kM = 16, kK = 4, kSamples = 100'000;
  const auto mode = ArithmeticMode::modular(kM);
  std::array<std::array<std::size_t, kM>, kK - 1> counts{};
  for (std::size_t s = 0; s < kSamples; ++s) {
    Rng rng(derive_seed(77, s));
    const auto segs = split_block({static_cast<Int>(s % kM)}, kK, rng, mode);
    for (std::size_t j = 0; j + 1 < kK; ++j) ++counts[j][static_cast<std::size_t>(segs[j])];
  }
  const double expected = static_cast<double>(kSamples) / kM;
  for (const auto& position : counts) {
    double chi2 = 0;
    for (std::size_t c : position) chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 60.0);
  }
}

}  // namespace
}  // namespace segsum
