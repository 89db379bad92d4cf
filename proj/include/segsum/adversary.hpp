#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "segsum/domain.hpp"
#include "segsum/segmentation.hpp"
#include "segsum/transcript.hpp"

namespace segsum {

/// What the two ring neighbours of a victim see between them: the partial sums
/// the left neighbour sent into the victim and the ones the right neighbour
/// got back out, per round.
struct CollusionView {
  std::size_t victim = 0;
  ProtocolKind protocol = ProtocolKind::KSecure;
  bool victim_is_initiator = false;
  std::vector<PartialSumMessage> left;
  std::vector<PartialSumMessage> right;
};

struct AttackResult {
  SegmentVector recovered_segments;
  Int recovered_total = 0;
  std::size_t computations_performed = 0;
  /// Set when the recovered values still carry the victim's own masks, which
  /// happens when the victim is the initiator of a masked protocol.
  bool mask_contaminated = false;
};

/// Difference operations the colluders need, as the protocol's security
/// argument counts them: 1 for the baseline, k for the segmented protocol,
/// and 2k for the masked segmented one.
constexpr std::size_t attack_cost(ProtocolKind kind, std::size_t k) {
  switch (kind) {
    case ProtocolKind::Baseline: return 1;
    case ProtocolKind::KSecure: return k;
    case ProtocolKind::Extended: return 2 * k;
  }
  return 0;
}

inline CollusionView extract_collusion_view(const Transcript& t, std::size_t victim) {
  const std::size_t n = t.config.n;
  if (n < 3) throw Error(ErrorCode::TooFewParties, "collusion needs a ring of at least 3");
  if (victim >= n) throw Error(ErrorCode::ConfigInvalid, "victim " + std::to_string(victim) + " not in ring");
  const std::size_t left = (victim + n - 1) % n;
  const std::size_t right = (victim + 1) % n;
  if (const auto& c = t.config.colluders) {
    if (c->first == victim || c->second == victim) {
      throw Error(ErrorCode::VictimIsColluder, "party " + std::to_string(victim) + " is one of the colluders");
    }
    const bool sandwiched = (c->first == left && c->second == right) || (c->first == right && c->second == left);
    if (!sandwiched) {
      throw Error(ErrorCode::ColludersNotAdjacent, "colluders " + std::to_string(c->first) + "," +
                                                       std::to_string(c->second) + " do not surround party " +
                                                       std::to_string(victim));
    }
  }

  CollusionView view;
  view.victim = victim;
  view.protocol = t.protocol;
  view.victim_is_initiator = victim == t.config.initiator;
  for (const auto& e : t.parties.at(left).entries) {
    if (e.direction == Direction::Sent && e.message.to == victim) view.left.push_back(e.message);
  }
  for (const auto& e : t.parties.at(right).entries) {
    if (e.direction == Direction::Received && e.message.from == victim) view.right.push_back(e.message);
  }
  return view;
}

/// Recovers the victim's segments by differencing what left and right saw.
///
/// A non-initiator adds its round-j segment between receiving and sending the
/// round-j sum, so segment j = right[j] - left[j]. The initiator instead opens
/// round j from the total that closed round j-1, so its segment j is
/// right[j] - left[j-1] (with an empty left[-1] of 0). Either way one
/// difference per round.
inline AttackResult collude(const CollusionView& view, const ArithmeticMode& mode) {
  if (view.left.size() != view.right.size()) {
    throw Error(ErrorCode::MismatchedRounds, "left saw " + std::to_string(view.left.size()) + " rounds, right saw " +
                                                 std::to_string(view.right.size()));
  }
  AttackResult out;
  for (std::size_t j = 0; j < view.right.size(); ++j) {
    if (view.right[j].round != j || view.left[j].round != j) {
      throw Error(ErrorCode::MismatchedRounds, "round " + std::to_string(j) + " missing from the view");
    }
    Int before = 0;
    if (!view.victim_is_initiator) {
      before = view.left[j].value;
    } else if (j > 0) {
      before = view.left[j - 1].value;
    }
    out.recovered_segments.segments.push_back(domain_sub(view.right[j].value, before, mode));
    ++out.computations_performed;
  }
  out.recovered_total = out.recovered_segments.size() == 0 ? 0 : recombine(out.recovered_segments, mode);
  out.mask_contaminated = view.victim_is_initiator && uses_masks(view.protocol);
  return out;
}

/// Plain-text attack report, one field per line.
inline void write_attack_report(std::ostream& os, const CollusionView& view, const AttackResult& r,
                                const ArithmeticMode& mode, std::optional<bool> matched_truth) {
  os << "victim " << view.victim << '\n';
  os << "protocol " << to_string(view.protocol) << '\n';
  for (std::size_t j = 0; j < r.recovered_segments.size(); ++j) {
    os << "segment " << j << ' ' << to_string(r.recovered_segments[j]) << '\n';
  }
  os << "total " << to_string(r.recovered_total) << '\n';
  os << "computations " << r.computations_performed << '\n';
  os << "attack_cost " << attack_cost(view.protocol, r.recovered_segments.size()) << '\n';
  os << "mask_contaminated " << (r.mask_contaminated ? "yes" : "no") << '\n';
  os << "mode " << describe(mode) << '\n';
  if (matched_truth) os << "ground_truth " << (*matched_truth ? "match" : "mismatch") << '\n';
}

}  // namespace segsum
