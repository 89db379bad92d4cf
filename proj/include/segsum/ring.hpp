#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "segsum/party.hpp"
#include "segsum/transcript.hpp"

namespace segsum {

/// Party i forwards to (i + 1) mod n.
class RingTopology {
 public:
  explicit RingTopology(std::size_t n) : n_(n) {
    if (n_ < 3) throw Error(ErrorCode::TooFewParties, "a ring needs at least 3 parties");
  }

  std::size_t size() const { return n_; }
  std::size_t successor(std::size_t i) const { return (i + 1) % n_; }
  std::size_t predecessor(std::size_t i) const { return (i + n_ - 1) % n_; }

 private:
  std::size_t n_;
};

struct RingRun {
  Announcement announcement;
  std::vector<PartyState> final_states;
  std::vector<PartyLog> logs;
  std::size_t hops = 0;
};

/// Called after each delivered hop.
using HopObserver = std::function<void(const PartialSumMessage&)>;

/// In-memory transport: passes the single in-flight partial sum from party to
/// party, synchronously and in order, until the initiator announces. Any
/// failed transition surfaces as Deadlock naming the party and round.
inline RingRun simulate_ring(std::vector<PartyState> parties, const HopObserver& observer = {}) {
  const RingTopology ring(parties.size());
  std::size_t initiator = parties.size();
  std::size_t max_rounds = 0;
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (parties[i].index != i || parties[i].n != ring.size()) {
      throw Error(ErrorCode::Deadlock, "party state at position " + std::to_string(i) + " does not match the ring");
    }
    if (parties[i].is_initiator()) initiator = i;
    max_rounds = std::max(max_rounds, parties[i].rounds());
  }
  if (initiator == parties.size()) throw Error(ErrorCode::Deadlock, "no party is the initiator");

  RingRun run;
  run.logs.resize(ring.size());
  if (!parties[initiator].masks.empty()) run.logs[initiator].masks = parties[initiator].masks;

  auto deliver = [&](const PartialSumMessage& m) {
    run.logs[m.from].entries.push_back({Direction::Sent, m});
    run.logs[m.to].entries.push_back({Direction::Received, m});
    ++run.hops;
    if (observer) observer(m);
  };

  PartialSumMessage in_flight;
  try {
    auto [state, first] = begin_protocol(std::move(parties[initiator]));
    parties[initiator] = std::move(state);
    in_flight = first;
  } catch (const Error& e) {
    throw Error(ErrorCode::Deadlock, "initiator " + std::to_string(initiator) + " could not start: " + e.what());
  }

  // Every party takes at most one step per round; anything beyond that means
  // the token is circulating without the initiator closing rounds.
  const std::size_t hop_limit = ring.size() * max_rounds;
  for (;;) {
    if (in_flight.to >= ring.size() || run.hops >= hop_limit) {
      throw Error(ErrorCode::Deadlock, "token lost at round " + std::to_string(in_flight.round));
    }
    deliver(in_flight);
    const std::size_t at = in_flight.to;
    StepOutput out;
    try {
      auto [state, result] = step_party(std::move(parties[at]), in_flight);
      parties[at] = std::move(state);
      out = result;
    } catch (const Error& e) {
      throw Error(ErrorCode::Deadlock, "party " + std::to_string(at) + " stalled at round " +
                                           std::to_string(in_flight.round) + ": " + e.what());
    }
    if (const auto* a = std::get_if<Announcement>(&out)) {
      run.announcement = *a;
      break;
    }
    in_flight = std::get<PartialSumMessage>(out);
  }
  run.final_states = std::move(parties);
  return run;
}

}  // namespace segsum
