#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "segsum/domain.hpp"
#include "segsum/party.hpp"

namespace segsum {

inline constexpr std::size_t kFramePrefixBytes = 4;
inline constexpr std::size_t kMaxPayloadBytes = 64 * 1024;

enum class FrameKind { Partial, Announce };

/// Everything one frame carries. For an announcement, message.value is the
/// announced sum and message.round the number of rounds run.
struct Frame {
  FrameKind kind = FrameKind::Partial;
  ProtocolKind protocol = ProtocolKind::KSecure;
  PartialSumMessage message;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// 4-byte big-endian payload length followed by a JSON object with the keys
/// kind, protocol, round, from, to, value. value is a decimal string so the
/// format does not depend on an integer width. Keys are emitted sorted.
inline std::vector<std::uint8_t> encode_frame(const Frame& f) {
  nlohmann::json j;
  j["kind"] = f.kind == FrameKind::Partial ? "partial" : "announce";
  j["protocol"] = std::string(to_string(f.protocol));
  j["round"] = f.message.round;
  j["from"] = f.message.from;
  j["to"] = f.message.to;
  j["value"] = to_string(f.message.value);
  const std::string payload = j.dump();
  if (payload.size() > kMaxPayloadBytes) {
    throw Error(ErrorCode::OversizedPayload, std::to_string(payload.size()) + " byte payload");
  }
  const auto len = static_cast<std::uint32_t>(payload.size());
  std::vector<std::uint8_t> out;
  out.reserve(kFramePrefixBytes + payload.size());
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

inline std::vector<std::uint8_t> encode_frame(const PartialSumMessage& m, ProtocolKind protocol) {
  return encode_frame(Frame{FrameKind::Partial, protocol, m});
}

/// Payload length announced by a prefix. Throws OversizedPayload past 64 KiB.
inline std::size_t frame_payload_length(std::span<const std::uint8_t> prefix) {
  if (prefix.size() < kFramePrefixBytes) throw Error(ErrorCode::MalformedFrame, "truncated length prefix");
  const std::uint32_t len = (std::uint32_t{prefix[0]} << 24) | (std::uint32_t{prefix[1]} << 16) |
                            (std::uint32_t{prefix[2]} << 8) | std::uint32_t{prefix[3]};
  if (len > kMaxPayloadBytes) throw Error(ErrorCode::OversizedPayload, std::to_string(len) + " byte payload");
  return len;
}

inline Frame decode_payload(std::span<const std::uint8_t> payload) {
  const nlohmann::json j = nlohmann::json::parse(payload.begin(), payload.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedFrame, "payload is not a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "kind" && key != "protocol" && key != "round" && key != "from" && key != "to" && key != "value") {
      throw Error(ErrorCode::UnknownField, "field '" + key + "'");
    }
  }
  auto string_field = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::MalformedFrame, std::string("missing string field '") + key + "'");
    }
    return j[key].get<std::string>();
  };
  auto index_field = [&](const char* key) -> std::size_t {
    if (!j.contains(key) || !j[key].is_number_unsigned()) {
      throw Error(ErrorCode::MalformedFrame, std::string("missing index field '") + key + "'");
    }
    return j[key].get<std::size_t>();
  };

  Frame f;
  const std::string kind = string_field("kind");
  if (kind == "partial") {
    f.kind = FrameKind::Partial;
  } else if (kind == "announce") {
    f.kind = FrameKind::Announce;
  } else {
    throw Error(ErrorCode::MalformedFrame, "unknown frame kind '" + kind + "'");
  }
  const std::string protocol = string_field("protocol");
  const auto pk = parse_protocol(protocol);
  if (!pk) throw Error(ErrorCode::MalformedFrame, "unknown protocol '" + protocol + "'");
  f.protocol = *pk;
  f.message.round = index_field("round");
  f.message.from = index_field("from");
  f.message.to = index_field("to");
  const std::string value = string_field("value");
  const auto v = parse_int(value);
  if (!v) throw Error(ErrorCode::MalformedFrame, "bad value '" + value + "'");
  f.message.value = *v;
  return f;
}

/// Decodes exactly one complete frame.
inline Frame decode_frame(std::span<const std::uint8_t> bytes) {
  const std::size_t len = frame_payload_length(bytes);
  if (bytes.size() != kFramePrefixBytes + len) {
    throw Error(ErrorCode::MalformedFrame, "frame holds " + std::to_string(bytes.size() - kFramePrefixBytes) +
                                               " payload bytes, prefix says " + std::to_string(len));
  }
  return decode_payload(bytes.subspan(kFramePrefixBytes));
}

}  // namespace segsum
