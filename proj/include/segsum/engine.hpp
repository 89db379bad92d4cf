#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "segsum/domain.hpp"
#include "segsum/party.hpp"
#include "segsum/ring.hpp"
#include "segsum/rng.hpp"
#include "segsum/segmentation.hpp"
#include "segsum/transcript.hpp"

namespace segsum {

/// Seeds for the two independent random streams of a run. Holding the segment
/// seed fixed while varying the mask seed changes only the initiator's masks.
struct RunSeeds {
  std::uint64_t segments = 0;
  std::uint64_t masks = 0;

  static RunSeeds from(std::uint64_t seed) { return {seed, seed}; }
};

struct SumResult {
  Int announced = 0;
  Transcript transcript;
  std::size_t rounds_executed = 0;
};

/// Rounds a protocol runs: the baseline protocol never segments.
constexpr std::size_t rounds_for(ProtocolKind kind, std::size_t k) { return kind == ProtocolKind::Baseline ? 1 : k; }

inline ConfigSnapshot snapshot(const ProtocolConfig& cfg, ProtocolKind kind) {
  return {cfg.n, rounds_for(kind, cfg.k), cfg.mode, cfg.initiator, cfg.seed, cfg.faults.colluders};
}

/// One fresh mask per round, uniform over the domain (exact mode: over the
/// same bounded range segments use).
inline std::vector<Int> draw_masks(std::size_t rounds, std::uint64_t seed, const ArithmeticMode& mode) {
  Rng rng = mask_rng(seed);
  std::vector<Int> masks;
  masks.reserve(rounds);
  for (std::size_t j = 0; j < rounds; ++j) {
    masks.push_back(mode.is_modular() ? static_cast<Int>(rng.uniform_below(mode.modulus()))
                                      : rng.uniform_symmetric(kExactSegmentRadius));
  }
  return masks;
}

/// Starting state for party `index` holding `input`. Deterministic in
/// (kind, cfg, seeds, index, input), so separate processes derive exactly the
/// state the in-memory engine would.
inline PartyState prepare_party(ProtocolKind kind, const ProtocolConfig& cfg, const RunSeeds& seeds, std::size_t index,
                                const DataBlock& input) {
  const std::size_t rounds = rounds_for(kind, cfg.k);
  Rng rng = segment_rng(seeds.segments, index);
  SegmentVector segs = split_block(input, rounds, rng, cfg.mode);
  std::vector<Int> masks;
  if (index == cfg.initiator && uses_masks(kind)) masks = draw_masks(rounds, seeds.masks, cfg.mode);
  return make_party(index, cfg, kind, std::move(segs), std::move(masks));
}

/// Installs the malicious-initiator rule, if the plan has one. Honest parties
/// are left untouched.
inline std::vector<PartyState> apply_fault(const FaultPlan& plan, std::vector<PartyState> parties) {
  if (!plan.malicious_initiator) return parties;
  for (auto& p : parties) {
    if (p.is_initiator()) p.perturbation = plan.malicious_initiator;
  }
  return parties;
}

inline SumResult run_protocol(ProtocolKind kind, std::span<const DataBlock> inputs, const ProtocolConfig& cfg,
                              const RunSeeds& seeds) {
  validate_config(cfg);
  if (inputs.size() != cfg.n) {
    throw Error(ErrorCode::ConfigInvalid,
                std::to_string(inputs.size()) + " inputs for " + std::to_string(cfg.n) + " parties");
  }

  std::vector<PartyState> parties;
  parties.reserve(cfg.n);
  GroundTruth truth;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    parties.push_back(prepare_party(kind, cfg, seeds, i, inputs[i]));
    truth.inputs.push_back(inputs[i]);
    truth.segments.push_back(parties.back().segments);
  }
  parties = apply_fault(cfg.faults, std::move(parties));

  RingRun run = simulate_ring(std::move(parties));

  SumResult result;
  result.announced = run.announcement.value;
  result.rounds_executed = rounds_for(kind, cfg.k);
  result.transcript.protocol = kind;
  result.transcript.config = snapshot(cfg, kind);
  result.transcript.parties = std::move(run.logs);
  result.transcript.ground_truth = std::move(truth);
  return result;
}

/// Single-round masked ring sum: the initiator adds a random r to its block,
/// every party adds its block, and the initiator removes r.
inline SumResult run_baseline_secure_sum(std::span<const DataBlock> inputs, const ProtocolConfig& cfg,
                                         const RunSeeds& seeds) {
  return run_protocol(ProtocolKind::Baseline, inputs, cfg, seeds);
}

/// k rounds over additive segments, one running total carried across rounds.
inline SumResult run_k_secure_sum(std::span<const DataBlock> inputs, const ProtocolConfig& cfg, const RunSeeds& seeds) {
  return run_protocol(ProtocolKind::KSecure, inputs, cfg, seeds);
}

/// As run_k_secure_sum, with a fresh initiator mask r_j added when round j
/// opens and removed when it closes.
inline SumResult run_extended_k_secure_sum(std::span<const DataBlock> inputs, const ProtocolConfig& cfg,
                                           const RunSeeds& seeds) {
  return run_protocol(ProtocolKind::Extended, inputs, cfg, seeds);
}

inline SumResult run_baseline_secure_sum(std::span<const DataBlock> inputs, const ProtocolConfig& cfg) {
  return run_baseline_secure_sum(inputs, cfg, RunSeeds::from(cfg.seed));
}
inline SumResult run_k_secure_sum(std::span<const DataBlock> inputs, const ProtocolConfig& cfg) {
  return run_k_secure_sum(inputs, cfg, RunSeeds::from(cfg.seed));
}
inline SumResult run_extended_k_secure_sum(std::span<const DataBlock> inputs, const ProtocolConfig& cfg) {
  return run_extended_k_secure_sum(inputs, cfg, RunSeeds::from(cfg.seed));
}

inline std::vector<DataBlock> to_blocks(std::span<const std::int64_t> values) {
  std::vector<DataBlock> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back({v});
  return out;
}

}  // namespace segsum
