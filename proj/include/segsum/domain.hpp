#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segsum/error.hpp"

namespace segsum {

// Wide enough for both arithmetic modes: unsigned residues up to 2^64 - 1 and
// signed 64-bit values. Intermediate sums of two in-domain values never
// overflow it.
__extension__ typedef __int128 Int;
__extension__ typedef unsigned __int128 UInt;

inline constexpr UInt kTwoPow64 = UInt{1} << 64;
inline constexpr Int kExactMin = std::numeric_limits<std::int64_t>::min();
inline constexpr Int kExactMax = std::numeric_limits<std::int64_t>::max();

inline std::string to_string(UInt v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

inline std::string to_string(Int v) {
  if (v >= 0) return to_string(static_cast<UInt>(v));
  return "-" + to_string(UInt{0} - static_cast<UInt>(v));
}

/// Parses an optionally signed decimal integer. Rejects empty strings, stray
/// characters, and magnitudes beyond 2^64 (the widest value any mode needs).
inline std::optional<Int> parse_int(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty() || text.size() > 20) return std::nullopt;
  UInt magnitude = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    magnitude = magnitude * 10 + static_cast<UInt>(c - '0');
  }
  if (magnitude > kTwoPow64) return std::nullopt;
  return negative ? -static_cast<Int>(magnitude) : static_cast<Int>(magnitude);
}

enum class ProtocolKind { Baseline, KSecure, Extended };

constexpr std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Baseline: return "baseline";
    case ProtocolKind::KSecure: return "ksum";
    case ProtocolKind::Extended: return "extended";
  }
  return "unknown";
}

inline std::optional<ProtocolKind> parse_protocol(std::string_view name) {
  if (name == "baseline") return ProtocolKind::Baseline;
  if (name == "ksum") return ProtocolKind::KSecure;
  if (name == "extended") return ProtocolKind::Extended;
  return std::nullopt;
}

/// Integers the protocols compute over: residues modulo M, or exact signed
/// 64-bit values where leaving the range is an error.
class ArithmeticMode {
 public:
  enum class Kind { Modular, ExactSigned };

  static ArithmeticMode modular(UInt modulus = kTwoPow64) { return {Kind::Modular, modulus}; }
  static ArithmeticMode exact_signed() { return {Kind::ExactSigned, 0}; }

  Kind kind() const { return kind_; }
  bool is_modular() const { return kind_ == Kind::Modular; }
  /// Meaningful in Modular mode only.
  UInt modulus() const { return modulus_; }

  bool contains(Int v) const {
    if (is_modular()) return v >= 0 && static_cast<UInt>(v) < modulus_;
    return v >= kExactMin && v <= kExactMax;
  }

  friend bool operator==(const ArithmeticMode&, const ArithmeticMode&) = default;

 private:
  ArithmeticMode(Kind kind, UInt modulus) : kind_(kind), modulus_(modulus) {}

  Kind kind_;
  UInt modulus_;
};

inline std::string describe(const ArithmeticMode& mode) {
  if (mode.is_modular()) return "modular(" + to_string(mode.modulus()) + ")";
  return "exact";
}

/// Maps an arbitrary integer into the domain. Modular mode reduces; exact mode
/// only accepts values that are already representable.
inline Int reduce(Int v, const ArithmeticMode& mode) {
  if (mode.is_modular()) {
    const Int m = static_cast<Int>(mode.modulus());
    Int r = v % m;
    return r < 0 ? r + m : r;
  }
  if (!mode.contains(v)) throw Error(ErrorCode::Overflow, to_string(v) + " exceeds signed 64-bit range");
  return v;
}

inline Int domain_add(Int a, Int b, const ArithmeticMode& mode) {
  if (mode.is_modular()) {
    const UInt sum = static_cast<UInt>(a) + static_cast<UInt>(b);
    return static_cast<Int>(sum % mode.modulus());
  }
  const Int sum = a + b;
  if (!mode.contains(sum)) {
    throw Error(ErrorCode::Overflow, to_string(a) + " + " + to_string(b) + " leaves signed 64-bit range");
  }
  return sum;
}

inline Int domain_sub(Int a, Int b, const ArithmeticMode& mode) {
  if (mode.is_modular()) {
    const UInt m = mode.modulus();
    return static_cast<Int>((static_cast<UInt>(a) + m - static_cast<UInt>(b)) % m);
  }
  const Int diff = a - b;
  if (!mode.contains(diff)) {
    throw Error(ErrorCode::Overflow, to_string(a) + " - " + to_string(b) + " leaves signed 64-bit range");
  }
  return diff;
}

/// One party's private input.
struct DataBlock {
  Int value = 0;

  friend bool operator==(const DataBlock&, const DataBlock&) = default;
};

/// The k additive shares of one data block, in round order.
struct SegmentVector {
  std::vector<Int> segments;

  std::size_t size() const { return segments.size(); }
  Int operator[](std::size_t j) const { return segments[j]; }

  friend bool operator==(const SegmentVector&, const SegmentVector&) = default;
};

inline void check_block(const DataBlock& d, const ArithmeticMode& mode) {
  if (!mode.contains(d.value)) {
    throw Error(ErrorCode::InvalidInput, "data block " + to_string(d.value) + " outside " + describe(mode));
  }
}

/// Additive change the malicious initiator applies to its contribution in a
/// round, given the round index and its own honest segment for that round.
using Perturbation = std::function<Int(std::size_t round, Int own_segment)>;

inline Perturbation constant_perturbation(Int delta) {
  return [delta](std::size_t, Int) { return delta; };
}

struct FaultPlan {
  Perturbation malicious_initiator;
  std::optional<std::pair<std::size_t, std::size_t>> colluders;
};

struct ProtocolConfig {
  std::size_t n = 3;
  std::size_t k = 1;
  ArithmeticMode mode = ArithmeticMode::modular();
  std::size_t initiator = 0;
  std::uint64_t seed = 0;
  FaultPlan faults;
};

/// Checks the structural assumptions every protocol run relies on.
inline void validate_config(const ProtocolConfig& cfg) {
  if (cfg.n < 3) {
    throw Error(ErrorCode::TooFewParties,
                "need at least 3 parties, got " + std::to_string(cfg.n));
  }
  if (cfg.k < 1) {
    throw Error(ErrorCode::InvalidSegmentCount, "segment count must be at least 1");
  }
  if (cfg.initiator >= cfg.n) {
    throw Error(ErrorCode::InitiatorOutOfRange,
                "initiator " + std::to_string(cfg.initiator) + " with n=" + std::to_string(cfg.n));
  }
  if (cfg.mode.is_modular() && (cfg.mode.modulus() < 2 || cfg.mode.modulus() > kTwoPow64)) {
    throw Error(ErrorCode::BadModulus, "modulus must lie in [2, 2^64], got " + to_string(cfg.mode.modulus()));
  }
  if (const auto& c = cfg.faults.colluders) {
    if (c->first == c->second || c->first >= cfg.n || c->second >= cfg.n) {
      throw Error(ErrorCode::InvalidColluders,
                  "colluders must be two distinct parties below n, got " + std::to_string(c->first) + "," +
                      std::to_string(c->second));
    }
  }
}

/// Rounds still to run. Starts at k; the protocol is finished exactly at zero.
class RoundCounter {
 public:
  explicit RoundCounter(std::size_t k) : k_(k), rc_(k) {}

  std::size_t remaining() const { return rc_; }
  std::size_t current_round() const { return k_ - rc_; }
  bool done() const { return rc_ == 0; }

  void complete_round() {
    if (rc_ == 0) throw Error(ErrorCode::OutOfOrderMessage, "round counter already at zero");
    --rc_;
  }

 private:
  std::size_t k_;
  std::size_t rc_;
};

}  // namespace segsum
