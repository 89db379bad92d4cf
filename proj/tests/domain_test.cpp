#include "segsum/domain.hpp"

#include <gtest/gtest.h>

#include <random>

#include "segsum/rng.hpp"

namespace segsum {
namespace {

ProtocolConfig config(std::size_t n, std::size_t k, std::size_t initiator = 0) {
  ProtocolConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.initiator = initiator;
  return cfg;
}

ErrorCode error_of(const ProtocolConfig& cfg) {
  try {
    validate_config(cfg);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config unexpectedly valid";
  return ErrorCode::ConfigInvalid;
}

TEST(ValidateConfig, MinimalRingIsAccepted) { EXPECT_NO_THROW(validate_config(config(3, 1, 0))); }

TEST(ValidateConfig, TwoPartiesAreTooFew) { EXPECT_EQ(error_of(config(2, 4, 0)), ErrorCode::TooFewParties); }

TEST(ValidateConfig, ZeroSegmentsRejected) { EXPECT_EQ(error_of(config(5, 0, 0)), ErrorCode::InvalidSegmentCount); }

TEST(ValidateConfig, InitiatorMustBeInRing) {
  EXPECT_EQ(error_of(config(4, 2, 4)), ErrorCode::InitiatorOutOfRange);
  EXPECT_NO_THROW(validate_config(config(4, 2, 3)));
}

TEST(ValidateConfig, ModulusBounds) {
  auto cfg = config(3, 1);
  cfg.mode = ArithmeticMode::modular(1);
  EXPECT_EQ(error_of(cfg), ErrorCode::BadModulus);
  cfg.mode = ArithmeticMode::modular(kTwoPow64 + 1);
  EXPECT_EQ(error_of(cfg), ErrorCode::BadModulus);
  cfg.mode = ArithmeticMode::modular(2);
  EXPECT_NO_THROW(validate_config(cfg));
}

TEST(ValidateConfig, ColludersMustBeDistinctAndInRing) {
  auto cfg = config(5, 2);
  cfg.faults.colluders = std::pair<std::size_t, std::size_t>(1, 1);
  EXPECT_EQ(error_of(cfg), ErrorCode::InvalidColluders);
  cfg.faults.colluders = std::pair<std::size_t, std::size_t>(1, 5);
  EXPECT_EQ(error_of(cfg), ErrorCode::InvalidColluders);
  cfg.faults.colluders = std::pair<std::size_t, std::size_t>(1, 3);
  EXPECT_NO_THROW(validate_config(cfg));
}

// Re-derives each invariant on its own and checks validate_config agrees.
TEST(ValidateConfig, AgreesWithIndependentInvariantChecks) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 5000; ++trial) {
    ProtocolConfig cfg;
    cfg.n = gen() % 8;
    cfg.k = gen() % 4;
    cfg.initiator = gen() % 9;
    const UInt modulus = static_cast<UInt>(gen() % 5);
    cfg.mode = gen() % 2 ? ArithmeticMode::modular(modulus == 4 ? kTwoPow64 : modulus) : ArithmeticMode::exact_signed();
    if (gen() % 2) cfg.faults.colluders = std::pair<std::size_t, std::size_t>(gen() % 9, gen() % 9);

    bool expect_ok = cfg.n >= 3 && cfg.k >= 1 && cfg.initiator < cfg.n;
    if (cfg.mode.is_modular()) expect_ok = expect_ok && cfg.mode.modulus() >= 2;
    if (cfg.faults.colluders) {
      const auto [a, b] = *cfg.faults.colluders;
      expect_ok = expect_ok && a != b && a < cfg.n && b < cfg.n;
    }
    bool ok = true;
    try {
      validate_config(cfg);
    } catch (const Error&) {
      ok = false;
    }
    ASSERT_EQ(ok, expect_ok) << "n=" << cfg.n << " k=" << cfg.k << " init=" << cfg.initiator;
  }
}

TEST(DomainAdd, ModularWraps) { EXPECT_EQ(domain_add(5, 7, ArithmeticMode::modular(10)), 2); }

TEST(DomainAdd, ExactAdds) { EXPECT_EQ(domain_add(5, 7, ArithmeticMode::exact_signed()), 12); }

TEST(DomainAdd, ExactOverflowIsAnError) {
  const auto mode = ArithmeticMode::exact_signed();
  try {
    domain_add(kExactMax, 1, mode);
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
  EXPECT_THROW(domain_sub(kExactMin, 1, mode), Error);
  EXPECT_EQ(domain_add(kExactMax, -1, mode), kExactMax - 1);
}

TEST(DomainAdd, FullWidthModulus) {
  const auto mode = ArithmeticMode::modular();
  const Int top = static_cast<Int>(kTwoPow64 - 1);
  EXPECT_EQ(domain_add(top, 1, mode), 0);
  EXPECT_EQ(domain_add(top, top, mode), top - 1);
  EXPECT_EQ(domain_sub(0, 1, mode), top);
}

TEST(DomainAdd, ModularAssociativeAndCommutative) {
  Rng rng(11);
  for (UInt m : {UInt{2}, UInt{10}, UInt{16}, UInt{1000003}, kTwoPow64 - 59, kTwoPow64}) {
    const auto mode = ArithmeticMode::modular(m);
    for (int i = 0; i < 2000; ++i) {
      const Int a = static_cast<Int>(rng.uniform_below(m));
      const Int b = static_cast<Int>(rng.uniform_below(m));
      const Int c = static_cast<Int>(rng.uniform_below(m));
      ASSERT_EQ(domain_add(a, b, mode), domain_add(b, a, mode));
      ASSERT_EQ(domain_add(domain_add(a, b, mode), c, mode), domain_add(a, domain_add(b, c, mode), mode));
      ASSERT_EQ(domain_sub(domain_add(a, b, mode), b, mode), a);
    }
  }
}

TEST(Reduce, NegativeValuesWrapIntoRange) {
  EXPECT_EQ(reduce(-1, ArithmeticMode::modular(10)), 9);
  EXPECT_EQ(reduce(-21, ArithmeticMode::modular(10)), 9);
  EXPECT_THROW(reduce(kExactMax + 1, ArithmeticMode::exact_signed()), Error);
}

TEST(RoundCounter, CountsDownToZero) {
  RoundCounter rc(3);
  EXPECT_EQ(rc.remaining(), 3u);
  EXPECT_EQ(rc.current_round(), 0u);
  rc.complete_round();
  rc.complete_round();
  EXPECT_EQ(rc.current_round(), 2u);
  EXPECT_FALSE(rc.done());
  rc.complete_round();
  EXPECT_TRUE(rc.done());
  EXPECT_THROW(rc.complete_round(), Error);
  EXPECT_EQ(rc.remaining(), 0u);
}

TEST(IntText, RoundTripsAtBoundaries) {
  for (Int v : {Int{0}, Int{-1}, kExactMin, kExactMax, static_cast<Int>(kTwoPow64 - 1), static_cast<Int>(kTwoPow64)}) {
    EXPECT_EQ(parse_int(to_string(v)), v);
  }
  EXPECT_EQ(to_string(static_cast<Int>(kTwoPow64 - 1)), "18446744073709551615");
  EXPECT_FALSE(parse_int(""));
  EXPECT_FALSE(parse_int("-"));
  EXPECT_FALSE(parse_int("12a"));
  EXPECT_FALSE(parse_int("18446744073709551617"));
  EXPECT_FALSE(parse_int("999999999999999999999"));
}

}  // namespace
}  // namespace segsum
