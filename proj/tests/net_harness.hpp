#pragma once

// Runs every party of a ring as a thread talking over loopback TCP.

#include <exception>
#include <future>
#include <string>
#include <vector>

#include "segsum/net.hpp"

namespace segsum::testing {

struct LoopbackRun {
  std::vector<SumResult> results;
  Transcript merged;
};

inline LoopbackRun run_loopback_ring(ProtocolKind kind, const ProtocolConfig& cfg, const std::vector<DataBlock>& inputs,
                                     const RunSeeds& seeds, NetworkOptions opts = {}) {
  std::vector<Listener> listeners;
  std::vector<std::string> endpoints;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    listeners.push_back(Listener::bind({"127.0.0.1", 0}));
    endpoints.push_back("127.0.0.1:" + std::to_string(listeners.back().port()));
  }
  std::vector<std::future<SumResult>> parties;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    parties.push_back(std::async(std::launch::async, [&, i, l = std::move(listeners[i])]() mutable {
      return run_networked(kind, cfg, endpoints, i, inputs[i], std::move(l), opts, &seeds);
    }));
  }
  LoopbackRun run;
  std::exception_ptr first_error;
  for (auto& f : parties) {
    try {
      run.results.push_back(f.get());
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  std::vector<Transcript> pieces;
  for (const auto& r : run.results) pieces.push_back(r.transcript);
  run.merged = merge_transcripts(pieces);
  return run;
}

}  // namespace segsum::testing
