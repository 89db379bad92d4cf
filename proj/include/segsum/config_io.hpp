#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "segsum/domain.hpp"

namespace segsum {

/// Contents of a JSON config file. Every key is optional; absent keys leave
/// the corresponding value unset so command-line flags and defaults can fill
/// them in.
///
///   {
///     "protocol": "ksum",            // baseline | ksum | extended
///     "n": 5, "k": 4,
///     "mode": "modular",             // modular | exact
///     "modulus": "18446744073709551616",
///     "initiator": 0,
///     "seed": 42,
///     "perturb": -1,                 // malicious initiator: add this every round
///     "colluders": [1, 3],
///     "endpoints": ["127.0.0.1:7000", "127.0.0.1:7001", "127.0.0.1:7002"]
///   }
///
/// modulus and perturb may be given as JSON numbers or decimal strings.
struct FileConfig {
  std::optional<ProtocolKind> protocol;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  std::optional<std::string> mode;
  std::optional<Int> modulus;
  std::optional<std::size_t> initiator;
  std::optional<std::uint64_t> seed;
  std::optional<Int> perturb;
  std::optional<std::pair<std::size_t, std::size_t>> colluders;
  std::vector<std::string> endpoints;
};

namespace detail {

inline Int json_integer(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? static_cast<Int>(v.get<std::uint64_t>()) : static_cast<Int>(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    if (const auto parsed = parse_int(v.get<std::string>())) return *parsed;
  }
  throw Error(ErrorCode::ConfigInvalid, "'" + key + "' must be an integer");
}

inline std::size_t json_index(const nlohmann::json& v, const std::string& key) {
  const Int i = json_integer(v, key);
  if (i < 0) throw Error(ErrorCode::ConfigInvalid, "'" + key + "' must be non-negative");
  return static_cast<std::size_t>(i);
}

}  // namespace detail

inline FileConfig parse_config(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false, true);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config is not a JSON object");

  FileConfig fc;
  for (const auto& [key, v] : j.items()) {
    if (key == "protocol") {
      const auto p = v.is_string() ? parse_protocol(v.get<std::string>()) : std::nullopt;
      if (!p) throw Error(ErrorCode::ConfigInvalid, "'protocol' must be baseline, ksum or extended");
      fc.protocol = p;
    } else if (key == "n") {
      fc.n = detail::json_index(v, key);
    } else if (key == "k") {
      fc.k = detail::json_index(v, key);
    } else if (key == "mode") {
      if (!v.is_string()) throw Error(ErrorCode::ConfigInvalid, "'mode' must be a string");
      fc.mode = v.get<std::string>();
    } else if (key == "modulus") {
      fc.modulus = detail::json_integer(v, key);
    } else if (key == "initiator") {
      fc.initiator = detail::json_index(v, key);
    } else if (key == "seed") {
      const Int s = detail::json_integer(v, key);
      if (s < 0 || static_cast<UInt>(s) >= kTwoPow64) throw Error(ErrorCode::ConfigInvalid, "'seed' out of range");
      fc.seed = static_cast<std::uint64_t>(s);
    } else if (key == "perturb") {
      fc.perturb = detail::json_integer(v, key);
    } else if (key == "colluders") {
      if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::ConfigInvalid, "'colluders' must be a pair");
      fc.colluders = std::pair(detail::json_index(v[0], key), detail::json_index(v[1], key));
    } else if (key == "endpoints") {
      if (!v.is_array()) throw Error(ErrorCode::ConfigInvalid, "'endpoints' must be a list");
      for (const auto& e : v) {
        if (!e.is_string()) throw Error(ErrorCode::ConfigInvalid, "endpoints must be host:port strings");
        fc.endpoints.push_back(e.get<std::string>());
      }
    } else {
      throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + key + "'");
    }
  }
  return fc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline FileConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

inline ArithmeticMode make_mode(const std::string& name, std::optional<Int> modulus) {
  if (name == "exact") return ArithmeticMode::exact_signed();
  if (name != "modular") throw Error(ErrorCode::ConfigInvalid, "mode must be modular or exact, got '" + name + "'");
  if (!modulus) return ArithmeticMode::modular();
  if (*modulus < 2 || static_cast<UInt>(*modulus) > kTwoPow64) {
    throw Error(ErrorCode::BadModulus, "modulus must lie in [2, 2^64], got " + to_string(*modulus));
  }
  return ArithmeticMode::modular(static_cast<UInt>(*modulus));
}

}  // namespace segsum
