#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "segsum/domain.hpp"

namespace segsum {

/// The running partial sum as it travels one hop of the ring.
struct PartialSumMessage {
  std::size_t round = 0;
  Int value = 0;
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const PartialSumMessage&, const PartialSumMessage&) = default;
};

/// The initiator's final result; not a ring hop.
struct Announcement {
  Int value = 0;
  std::size_t from = 0;

  friend bool operator==(const Announcement&, const Announcement&) = default;
};

using StepOutput = std::variant<PartialSumMessage, Announcement>;

constexpr bool uses_masks(ProtocolKind kind) { return kind != ProtocolKind::KSecure; }

/// What one party knows and where it is in the protocol. Transitions are pure:
/// step_party() takes a state by value and returns the next one.
struct PartyState {
  std::size_t index = 0;
  std::size_t n = 0;
  std::size_t initiator = 0;
  ProtocolKind protocol = ProtocolKind::KSecure;
  ArithmeticMode mode = ArithmeticMode::modular();
  SegmentVector segments;
  std::vector<Int> masks;
  Perturbation perturbation;
  RoundCounter rc{0};
  bool started = false;
  Int carry = 0;

  bool is_initiator() const { return index == initiator; }
  std::size_t successor() const { return (index + 1) % n; }
  std::size_t predecessor() const { return (index + n - 1) % n; }
  std::size_t rounds() const { return segments.size(); }
};

/// Builds the starting state for one party. masks must hold one value per
/// round for the initiator of a masked protocol and be empty otherwise.
inline PartyState make_party(std::size_t index, const ProtocolConfig& cfg, ProtocolKind protocol,
                             SegmentVector segments, std::vector<Int> masks = {}) {
  PartyState s;
  s.index = index;
  s.n = cfg.n;
  s.initiator = cfg.initiator;
  s.protocol = protocol;
  s.mode = cfg.mode;
  s.rc = RoundCounter(segments.size());
  s.segments = std::move(segments);
  const bool needs_masks = s.is_initiator() && uses_masks(protocol);
  if (needs_masks ? masks.size() != s.segments.size() : !masks.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "party " + std::to_string(index) + " got " + std::to_string(masks.size()) +
                                              " masks for " + std::to_string(s.segments.size()) + " rounds");
  }
  s.masks = std::move(masks);
  return s;
}

namespace detail {

// What the initiator puts on the wire for the current round.
inline PartialSumMessage initiator_contribution(PartyState& s) {
  const std::size_t j = s.rc.current_round();
  Int value = domain_add(s.carry, s.segments[j], s.mode);
  if (uses_masks(s.protocol)) value = domain_add(value, s.masks[j], s.mode);
  if (s.perturbation) value = domain_add(value, reduce(s.perturbation(j, s.segments[j]), s.mode), s.mode);
  return {j, value, s.index, s.successor()};
}

inline void check_incoming(const PartyState& s, const PartialSumMessage& in) {
  if (in.to != s.index) {
    throw Error(ErrorCode::WrongRecipient,
                "message for party " + std::to_string(in.to) + " delivered to party " + std::to_string(s.index));
  }
  if (s.rc.done()) {
    throw Error(ErrorCode::OutOfOrderMessage, "party " + std::to_string(s.index) + " has no rounds left");
  }
  if (in.round != s.rc.current_round() || in.from != s.predecessor()) {
    throw Error(ErrorCode::OutOfOrderMessage, "party " + std::to_string(s.index) + " expected round " +
                                                  std::to_string(s.rc.current_round()) + " from party " +
                                                  std::to_string(s.predecessor()) + ", got round " +
                                                  std::to_string(in.round) + " from party " + std::to_string(in.from));
  }
  if (s.is_initiator() && !s.started) {
    throw Error(ErrorCode::OutOfOrderMessage, "initiator received a message before opening round 0");
  }
  if (!s.mode.contains(in.value)) {
    throw Error(ErrorCode::InvalidInput, "partial sum " + to_string(in.value) + " outside " + describe(s.mode));
  }
}

}  // namespace detail

/// Opens round 0 at the initiator: its first contribution is 0 + D_{init,0}
/// (plus the round mask and any perturbation).
inline std::pair<PartyState, PartialSumMessage> begin_protocol(PartyState s) {
  if (!s.is_initiator()) {
    throw Error(ErrorCode::OutOfOrderMessage, "party " + std::to_string(s.index) + " is not the initiator");
  }
  if (s.started) throw Error(ErrorCode::OutOfOrderMessage, "protocol already started");
  s.started = true;
  PartialSumMessage out = detail::initiator_contribution(s);
  return {std::move(s), out};
}

/// Handles one incoming partial sum. A non-initiator adds its segment for the
/// round and forwards. The initiator closes the round (removing its mask),
/// decrements the round counter, and either opens the next round or announces.
inline std::pair<PartyState, StepOutput> step_party(PartyState s, const PartialSumMessage& in) {
  detail::check_incoming(s, in);
  const std::size_t j = in.round;

  if (!s.is_initiator()) {
    const Int value = domain_add(in.value, s.segments[j], s.mode);
    s.rc.complete_round();
    const PartialSumMessage out{j, value, s.index, s.successor()};
    return {std::move(s), out};
  }

  s.carry = uses_masks(s.protocol) ? domain_sub(in.value, s.masks[j], s.mode) : in.value;
  s.rc.complete_round();
  if (s.rc.done()) {
    const Announcement a{s.carry, s.index};
    return {std::move(s), a};
  }
  PartialSumMessage out = detail::initiator_contribution(s);
  return {std::move(s), out};
}

}  // namespace segsum
