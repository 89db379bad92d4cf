#pragma once

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "segsum/engine.hpp"
#include "segsum/wire.hpp"

namespace segsum {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  std::string str() const { return host + ":" + std::to_string(port); }
};

inline Endpoint parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) throw Error(ErrorCode::ConfigInvalid, "endpoint '" + text + "'");
  const auto port = parse_int(text.substr(colon + 1));
  if (!port || *port < 0 || *port > 65535) throw Error(ErrorCode::ConfigInvalid, "bad port in '" + text + "'");
  return {text.substr(0, colon), static_cast<std::uint16_t>(*port)};
}

using Clock = std::chrono::steady_clock;

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept {
    if (this != &other) {
      reset();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { reset(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

namespace detail {

inline std::string errno_text() { return std::strerror(errno); }

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) ::freeaddrinfo(head);
  }
};

inline void resolve(const Endpoint& ep, bool passive, AddrInfo& out) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  const std::string port = std::to_string(ep.port);
  const int rc = ::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &out.head);
  if (rc != 0) throw Error(ErrorCode::ConnectionFailed, ep.str() + ": " + ::gai_strerror(rc));
}

// Waits until fd is ready for `events` or the deadline passes.
inline void wait_ready(int fd, short events, Clock::time_point deadline, const std::string& what) {
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) throw Error(ErrorCode::Timeout, what);
    pollfd p{fd, events, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(left));
    if (rc > 0) return;
    if (rc < 0 && errno != EINTR) throw Error(ErrorCode::ConnectionFailed, what + ": " + errno_text());
  }
}

}  // namespace detail

class Listener {
 public:
  /// Binds and listens on ep. Port 0 picks a free port.
  static Listener bind(const Endpoint& ep) {
    detail::AddrInfo ai;
    detail::resolve(ep, true, ai);
    for (addrinfo* a = ai.head; a; a = a->ai_next) {
      Socket s(::socket(a->ai_family, a->ai_socktype, a->ai_protocol));
      if (!s.valid()) continue;
      const int one = 1;
      ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
      if (::bind(s.fd(), a->ai_addr, a->ai_addrlen) == 0 && ::listen(s.fd(), 16) == 0) {
        Listener l;
        l.socket_ = std::move(s);
        return l;
      }
    }
    throw Error(ErrorCode::ConnectionFailed, "cannot listen on " + ep.str() + ": " + detail::errno_text());
  }

  std::uint16_t port() const {
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    ::getsockname(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    if (addr.ss_family == AF_INET6) return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
    return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  }

  Socket accept(Clock::time_point deadline) {
    detail::wait_ready(socket_.fd(), POLLIN, deadline, "waiting for peer connection");
    Socket s(::accept(socket_.fd(), nullptr, nullptr));
    if (!s.valid()) throw Error(ErrorCode::ConnectionFailed, "accept: " + detail::errno_text());
    return s;
  }

 private:
  Socket socket_;
};

/// Connects to ep, retrying while the peer is not yet listening.
inline Socket connect_with_retry(const Endpoint& ep, Clock::time_point deadline) {
  std::string last_error = "no address";
  for (;;) {
    detail::AddrInfo ai;
    detail::resolve(ep, false, ai);
    for (addrinfo* a = ai.head; a; a = a->ai_next) {
      Socket s(::socket(a->ai_family, a->ai_socktype, a->ai_protocol));
      if (!s.valid()) continue;
      if (::connect(s.fd(), a->ai_addr, a->ai_addrlen) == 0) {
        const int one = 1;
        ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return s;
      }
      last_error = detail::errno_text();
    }
    if (Clock::now() >= deadline) throw Error(ErrorCode::ConnectionFailed, ep.str() + ": " + last_error);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

inline void send_frame(const Socket& s, const Frame& f) {
  const auto bytes = encode_frame(f);
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t rc = ::send(s.fd(), bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::ConnectionFailed, "send: " + detail::errno_text());
    }
    sent += static_cast<std::size_t>(rc);
  }
}

namespace detail {

inline void read_exact(const Socket& s, std::uint8_t* out, std::size_t len, Clock::time_point deadline) {
  std::size_t got = 0;
  while (got < len) {
    wait_ready(s.fd(), POLLIN, deadline, "waiting for frame");
    const ssize_t rc = ::recv(s.fd(), out + got, len - got, 0);
    if (rc == 0) throw Error(ErrorCode::ConnectionFailed, "peer closed the connection");
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::ConnectionFailed, "recv: " + errno_text());
    }
    got += static_cast<std::size_t>(rc);
  }
}

}  // namespace detail

inline Frame recv_frame(const Socket& s, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::uint8_t prefix[kFramePrefixBytes];
  detail::read_exact(s, prefix, kFramePrefixBytes, deadline);
  const std::size_t len = frame_payload_length(prefix);
  std::vector<std::uint8_t> payload(len);
  detail::read_exact(s, payload.data(), len, deadline);
  return decode_payload(payload);
}

struct NetworkOptions {
  std::chrono::milliseconds hop_timeout{30'000};
  std::chrono::milliseconds connect_timeout{30'000};
};

/// Runs one party of a ring whose members are separate processes (or
/// threads). This party listens for its predecessor, connects to its
/// successor, and drives step_party over frames. When the initiator
/// announces, it sends an announce frame directly to every other party.
///
/// The returned transcript holds this party's log only; merge_transcripts()
/// rebuilds the ring-wide view from all parties' results.
inline SumResult run_networked(ProtocolKind kind, const ProtocolConfig& cfg, const std::vector<std::string>& endpoints,
                               std::size_t role, const DataBlock& input, Listener listener,
                               const NetworkOptions& opts = {}, const RunSeeds* seeds_override = nullptr) {
  validate_config(cfg);
  if (endpoints.size() != cfg.n) {
    throw Error(ErrorCode::ConfigInvalid,
                std::to_string(endpoints.size()) + " endpoints for " + std::to_string(cfg.n) + " parties");
  }
  if (role >= cfg.n) throw Error(ErrorCode::ConfigInvalid, "role " + std::to_string(role) + " not in ring");
  check_block(input, cfg.mode);

  const RunSeeds seeds = seeds_override ? *seeds_override : RunSeeds::from(cfg.seed);
  std::vector<PartyState> one{prepare_party(kind, cfg, seeds, role, input)};
  PartyState state = std::move(apply_fault(role == cfg.initiator ? cfg.faults : FaultPlan{}, std::move(one)).front());

  SumResult result;
  result.rounds_executed = state.rounds();
  result.transcript.protocol = kind;
  result.transcript.config = snapshot(cfg, kind);
  result.transcript.parties.resize(cfg.n);
  PartyLog& log = result.transcript.parties[role];
  log.masks = state.masks;

  const Endpoint successor = parse_endpoint(endpoints[state.successor()]);
  Socket out = connect_with_retry(successor, Clock::now() + opts.connect_timeout);
  Socket in = listener.accept(Clock::now() + opts.connect_timeout);

  auto send_hop = [&](const PartialSumMessage& m) {
    send_frame(out, Frame{FrameKind::Partial, kind, m});
    log.entries.push_back({Direction::Sent, m});
  };
  auto check_protocol = [&](const Frame& f) {
    if (f.protocol != kind) {
      throw Error(ErrorCode::PeerProtocolMismatch, "expected " + std::string(to_string(kind)) + ", peer sent " +
                                                       std::string(to_string(f.protocol)));
    }
  };

  if (state.is_initiator()) {
    auto [next, first] = begin_protocol(std::move(state));
    state = std::move(next);
    send_hop(first);
  }

  for (;;) {
    if (!state.is_initiator() && state.rc.done()) break;
    const Frame f = recv_frame(in, opts.hop_timeout);
    check_protocol(f);
    if (f.kind != FrameKind::Partial) throw Error(ErrorCode::OutOfOrderMessage, "announcement before final round");
    log.entries.push_back({Direction::Received, f.message});
    auto [next, output] = step_party(std::move(state), f.message);
    state = std::move(next);
    if (const auto* a = std::get_if<Announcement>(&output)) {
      result.announced = a->value;
      for (std::size_t peer = 0; peer < cfg.n; ++peer) {
        if (peer == role) continue;
        Socket s = connect_with_retry(parse_endpoint(endpoints[peer]), Clock::now() + opts.connect_timeout);
        send_frame(s, Frame{FrameKind::Announce, kind, PartialSumMessage{state.rounds(), a->value, role, peer}});
      }
      return result;
    }
    send_hop(std::get<PartialSumMessage>(output));
  }

  Socket announcer = listener.accept(Clock::now() + opts.hop_timeout);
  const Frame f = recv_frame(announcer, opts.hop_timeout);
  check_protocol(f);
  if (f.kind != FrameKind::Announce || f.message.from != cfg.initiator) {
    throw Error(ErrorCode::OutOfOrderMessage, "expected the initiator's announcement");
  }
  result.announced = f.message.value;
  return result;
}

inline SumResult run_networked(ProtocolKind kind, const ProtocolConfig& cfg, const std::vector<std::string>& endpoints,
                               std::size_t role, const DataBlock& input, const NetworkOptions& opts = {}) {
  if (role >= endpoints.size()) throw Error(ErrorCode::ConfigInvalid, "role " + std::to_string(role) + " not in ring");
  return run_networked(kind, cfg, endpoints, role, input, Listener::bind(parse_endpoint(endpoints[role])), opts);
}

}  // namespace segsum
