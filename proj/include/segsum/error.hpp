#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace segsum {

/// Every failure the library reports. The CLI maps each code to a distinct
/// process exit status (see exit_code()).
enum class ErrorCode {
  TooFewParties,
  InvalidSegmentCount,
  InitiatorOutOfRange,
  BadModulus,
  InvalidColluders,
  InvalidInput,
  Overflow,
  ConfigInvalid,
  OutOfOrderMessage,
  WrongRecipient,
  Deadlock,
  MismatchedRounds,
  VictimIsColluder,
  ColludersNotAdjacent,
  MalformedFrame,
  OversizedPayload,
  UnknownField,
  ConnectionFailed,
  PeerProtocolMismatch,
  Timeout,
  MalformedTranscript,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TooFewParties: return "TooFewParties";
    case ErrorCode::InvalidSegmentCount: return "InvalidSegmentCount";
    case ErrorCode::InitiatorOutOfRange: return "InitiatorOutOfRange";
    case ErrorCode::BadModulus: return "BadModulus";
    case ErrorCode::InvalidColluders: return "InvalidColluders";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::OutOfOrderMessage: return "OutOfOrderMessage";
    case ErrorCode::WrongRecipient: return "WrongRecipient";
    case ErrorCode::Deadlock: return "Deadlock";
    case ErrorCode::MismatchedRounds: return "MismatchedRounds";
    case ErrorCode::VictimIsColluder: return "VictimIsColluder";
    case ErrorCode::ColludersNotAdjacent: return "ColludersNotAdjacent";
    case ErrorCode::MalformedFrame: return "MalformedFrame";
    case ErrorCode::OversizedPayload: return "OversizedPayload";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::ConnectionFailed: return "ConnectionFailed";
    case ErrorCode::PeerProtocolMismatch: return "PeerProtocolMismatch";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::MalformedTranscript: return "MalformedTranscript";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Process exit status for a failed command. 1 is reserved for usage errors
/// and "post-condition did not hold" outcomes.
constexpr int exit_code(ErrorCode code) { return 10 + static_cast<int>(code); }

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace segsum
