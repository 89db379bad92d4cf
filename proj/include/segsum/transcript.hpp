#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "segsum/domain.hpp"
#include "segsum/party.hpp"

namespace segsum {

enum class Direction { Sent, Received };

struct TranscriptEntry {
  Direction direction = Direction::Sent;
  PartialSumMessage message;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

/// What one party saw, in order. masks is non-empty only at the initiator of
/// a masked protocol.
struct PartyLog {
  std::vector<TranscriptEntry> entries;
  std::vector<Int> masks;

  friend bool operator==(const PartyLog&, const PartyLog&) = default;
};

/// The parts of a ProtocolConfig that describe a finished run. k is the number
/// of rounds actually executed (1 for the baseline protocol).
struct ConfigSnapshot {
  std::size_t n = 0;
  std::size_t k = 0;
  ArithmeticMode mode = ArithmeticMode::modular();
  std::size_t initiator = 0;
  std::uint64_t seed = 0;
  std::optional<std::pair<std::size_t, std::size_t>> colluders;

  friend bool operator==(const ConfigSnapshot&, const ConfigSnapshot&) = default;
};

/// Private data behind a run; only present when the producer chose to keep it.
struct GroundTruth {
  std::vector<DataBlock> inputs;
  std::vector<SegmentVector> segments;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct Transcript {
  ProtocolKind protocol = ProtocolKind::KSecure;
  ConfigSnapshot config;
  std::vector<PartyLog> parties;
  std::optional<GroundTruth> ground_truth;

  /// Records one delivered hop on both ends.
  void record(const PartialSumMessage& m) {
    parties.at(m.from).entries.push_back({Direction::Sent, m});
    parties.at(m.to).entries.push_back({Direction::Received, m});
  }

  const std::vector<Int>& masks() const { return parties.at(config.initiator).masks; }

  /// Every hop once, in the order the token travelled: by round, then by ring
  /// position counted from the initiator.
  std::vector<PartialSumMessage> hops() const {
    std::vector<PartialSumMessage> out;
    for (const auto& log : parties) {
      for (const auto& e : log.entries) {
        if (e.direction == Direction::Sent) out.push_back(e.message);
      }
    }
    const std::size_t n = config.n;
    const std::size_t init = config.initiator;
    std::stable_sort(out.begin(), out.end(), [n, init](const auto& a, const auto& b) {
      const std::size_t pa = (a.from + n - init) % n;
      const std::size_t pb = (b.from + n - init) % n;
      return std::pair(a.round, pa) < std::pair(b.round, pb);
    });
    return out;
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Rebuilds a full transcript from hops alone.
inline Transcript transcript_from_hops(ProtocolKind protocol, const ConfigSnapshot& cfg,
                                       const std::vector<PartialSumMessage>& hops) {
  Transcript t;
  t.protocol = protocol;
  t.config = cfg;
  t.parties.resize(cfg.n);
  for (const auto& m : hops) {
    if (m.from >= cfg.n || m.to >= cfg.n) {
      throw Error(ErrorCode::MalformedTranscript, "hop references a party outside the ring");
    }
    t.record(m);
  }
  return t;
}

/// Combines per-party transcripts (each holding only its own party's log, as
/// produced by a networked run) into one.
inline Transcript merge_transcripts(const std::vector<Transcript>& pieces) {
  if (pieces.empty()) throw Error(ErrorCode::MalformedTranscript, "nothing to merge");
  Transcript out = pieces.front();
  for (auto& log : out.parties) log = {};
  for (const auto& piece : pieces) {
    if (piece.protocol != out.protocol || piece.config != out.config || piece.parties.size() != out.parties.size()) {
      throw Error(ErrorCode::MalformedTranscript, "transcripts describe different runs");
    }
    for (std::size_t i = 0; i < piece.parties.size(); ++i) {
      const auto& log = piece.parties[i];
      if (log.entries.empty() && log.masks.empty()) continue;
      if (!out.parties[i].entries.empty()) {
        throw Error(ErrorCode::MalformedTranscript, "party " + std::to_string(i) + " appears twice");
      }
      out.parties[i] = log;
    }
  }
  return out;
}

// Text dump. One record per line, whitespace separated:
//
//   segsum-transcript 1
//   protocol <baseline|ksum|extended>
//   config <n> <k> <modular|exact> <modulus|0> <initiator> <seed>
//   colluders <a> <b>                         (optional)
//   mask <round> <value>                      (private section, optional)
//   input <party> <value>                     (private section, optional)
//   segments <party> <v0> ... <v(k-1)>        (private section, optional)
//   msg <protocol> <round> <from> <to> <value>
//
// msg lines appear in token order, one per hop.

inline void dump_transcript(std::ostream& os, const Transcript& t, bool include_private) {
  const auto& c = t.config;
  os << "segsum-transcript 1\n";
  os << "protocol " << to_string(t.protocol) << '\n';
  os << "config " << c.n << ' ' << c.k << ' ' << (c.mode.is_modular() ? "modular" : "exact") << ' '
     << (c.mode.is_modular() ? to_string(c.mode.modulus()) : std::string("0")) << ' ' << c.initiator << ' '
     << c.seed << '\n';
  if (c.colluders) os << "colluders " << c.colluders->first << ' ' << c.colluders->second << '\n';
  if (include_private) {
    const auto& masks = t.masks();
    for (std::size_t j = 0; j < masks.size(); ++j) os << "mask " << j << ' ' << to_string(masks[j]) << '\n';
    if (t.ground_truth) {
      const auto& g = *t.ground_truth;
      for (std::size_t i = 0; i < g.inputs.size(); ++i) os << "input " << i << ' ' << to_string(g.inputs[i].value) << '\n';
      for (std::size_t i = 0; i < g.segments.size(); ++i) {
        os << "segments " << i;
        for (Int s : g.segments[i].segments) os << ' ' << to_string(s);
        os << '\n';
      }
    }
  }
  for (const auto& m : t.hops()) {
    os << "msg " << to_string(t.protocol) << ' ' << m.round << ' ' << m.from << ' ' << m.to << ' '
       << to_string(m.value) << '\n';
  }
}

inline std::string dump_transcript(const Transcript& t, bool include_private) {
  std::ostringstream os;
  dump_transcript(os, t, include_private);
  return os.str();
}

namespace detail {

[[noreturn]] inline void bad_transcript(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedTranscript, "line " + std::to_string(line_no) + ": " + why);
}

inline std::size_t read_index(std::istringstream& in, std::size_t line_no) {
  std::string tok;
  if (!(in >> tok)) bad_transcript(line_no, "missing field");
  const auto v = parse_int(tok);
  if (!v || *v < 0) bad_transcript(line_no, "bad index '" + tok + "'");
  return static_cast<std::size_t>(*v);
}

inline Int read_value(std::istringstream& in, std::size_t line_no) {
  std::string tok;
  if (!(in >> tok)) bad_transcript(line_no, "missing value");
  const auto v = parse_int(tok);
  if (!v) bad_transcript(line_no, "bad integer '" + tok + "'");
  return *v;
}

}  // namespace detail

inline Transcript parse_transcript(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line != "segsum-transcript 1") detail::bad_transcript(line_no, "missing header");

  Transcript t;
  bool have_protocol = false;
  bool have_config = false;
  std::vector<PartialSumMessage> hops;
  std::vector<Int> masks;
  GroundTruth truth;
  bool have_truth = false;

  while (next_line()) {
    std::istringstream in(line);
    std::string tag;
    in >> tag;
    if (tag == "protocol") {
      std::string name;
      in >> name;
      const auto kind = parse_protocol(name);
      if (!kind) detail::bad_transcript(line_no, "unknown protocol '" + name + "'");
      t.protocol = *kind;
      have_protocol = true;
    } else if (tag == "config") {
      auto& c = t.config;
      c.n = detail::read_index(in, line_no);
      c.k = detail::read_index(in, line_no);
      std::string mode;
      in >> mode;
      const Int modulus = detail::read_value(in, line_no);
      if (mode == "modular") {
        if (modulus < 2 || static_cast<UInt>(modulus) > kTwoPow64) detail::bad_transcript(line_no, "bad modulus");
        c.mode = ArithmeticMode::modular(static_cast<UInt>(modulus));
      } else if (mode == "exact") {
        c.mode = ArithmeticMode::exact_signed();
      } else {
        detail::bad_transcript(line_no, "unknown mode '" + mode + "'");
      }
      c.initiator = detail::read_index(in, line_no);
      const Int seed = detail::read_value(in, line_no);
      if (seed < 0 || static_cast<UInt>(seed) >= kTwoPow64) detail::bad_transcript(line_no, "bad seed");
      c.seed = static_cast<std::uint64_t>(seed);
      if (c.n < 3 || c.k < 1 || c.initiator >= c.n) detail::bad_transcript(line_no, "inconsistent config");
      have_config = true;
    } else if (tag == "colluders") {
      const std::size_t a = detail::read_index(in, line_no);
      const std::size_t b = detail::read_index(in, line_no);
      t.config.colluders = std::pair(a, b);
    } else if (tag == "mask") {
      const std::size_t j = detail::read_index(in, line_no);
      if (j != masks.size()) detail::bad_transcript(line_no, "masks out of order");
      masks.push_back(detail::read_value(in, line_no));
    } else if (tag == "input") {
      const std::size_t i = detail::read_index(in, line_no);
      if (i != truth.inputs.size()) detail::bad_transcript(line_no, "inputs out of order");
      truth.inputs.push_back({detail::read_value(in, line_no)});
      have_truth = true;
    } else if (tag == "segments") {
      const std::size_t i = detail::read_index(in, line_no);
      if (i != truth.segments.size()) detail::bad_transcript(line_no, "segments out of order");
      SegmentVector segs;
      std::string tok;
      while (in >> tok) {
        const auto v = parse_int(tok);
        if (!v) detail::bad_transcript(line_no, "bad integer '" + tok + "'");
        segs.segments.push_back(*v);
      }
      truth.segments.push_back(std::move(segs));
      have_truth = true;
    } else if (tag == "msg") {
      std::string name;
      in >> name;
      const auto kind = parse_protocol(name);
      if (!have_protocol || !kind || *kind != t.protocol) detail::bad_transcript(line_no, "protocol mismatch");
      PartialSumMessage m;
      m.round = detail::read_index(in, line_no);
      m.from = detail::read_index(in, line_no);
      m.to = detail::read_index(in, line_no);
      m.value = detail::read_value(in, line_no);
      hops.push_back(m);
    } else {
      detail::bad_transcript(line_no, "unknown record '" + tag + "'");
    }
    std::string extra;
    if (tag != "segments" && (in >> extra)) detail::bad_transcript(line_no, "trailing data");
  }

  if (!have_protocol || !have_config) detail::bad_transcript(line_no, "missing protocol or config");
  const auto& c = t.config;
  for (const auto& m : hops) {
    if (m.from >= c.n || m.to != (m.from + 1) % c.n || m.round >= c.k || !c.mode.contains(m.value)) {
      detail::bad_transcript(line_no, "hop inconsistent with config");
    }
  }
  Transcript out = transcript_from_hops(t.protocol, c, hops);
  if (!masks.empty()) {
    if (!uses_masks(t.protocol) || masks.size() != c.k) detail::bad_transcript(line_no, "mask count mismatch");
    out.parties[c.initiator].masks = std::move(masks);
  }
  if (have_truth) {
    if (truth.inputs.size() != c.n || truth.segments.size() != c.n) {
      detail::bad_transcript(line_no, "ground truth does not cover every party");
    }
    out.ground_truth = std::move(truth);
  }
  return out;
}

inline Transcript parse_transcript(const std::string& text) {
  std::istringstream is(text);
  return parse_transcript(is);
}

}  // namespace segsum
