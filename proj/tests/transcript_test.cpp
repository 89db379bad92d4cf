#include "segsum/transcript.hpp"

#include <gtest/gtest.h>

#include "segsum/engine.hpp"

namespace segsum {
namespace {

SumResult sample_run(ProtocolKind kind, ArithmeticMode mode = ArithmeticMode::modular()) {
  ProtocolConfig cfg;
  cfg.n = 4;
  cfg.k = 3;
  cfg.mode = mode;
  cfg.initiator = 1;
  cfg.seed = 77;
  cfg.faults.colluders = std::pair<std::size_t, std::size_t>(0, 2);
  const std::vector<DataBlock> inputs{{10}, {-20}, {30}, {40}};
  return run_protocol(kind, mode.is_modular() ? std::vector<DataBlock>{{10}, {20}, {30}, {40}} : inputs, cfg,
                      RunSeeds::from(cfg.seed));
}

TEST(TranscriptDump, PrivateDumpRoundTrips) {
  for (auto kind : {ProtocolKind::Baseline, ProtocolKind::KSecure, ProtocolKind::Extended}) {
    for (auto mode : {ArithmeticMode::modular(), ArithmeticMode::modular(1000), ArithmeticMode::exact_signed()}) {
      const auto r = sample_run(kind, mode);
      const auto parsed = parse_transcript(dump_transcript(r.transcript, true));
      EXPECT_EQ(parsed, r.transcript);
    }
  }
}

TEST(TranscriptDump, PublicDumpOmitsPrivateData) {
  const auto r = sample_run(ProtocolKind::Extended);
  const std::string text = dump_transcript(r.transcript, false);
  EXPECT_EQ(text.find("mask"), std::string::npos);
  EXPECT_EQ(text.find("input"), std::string::npos);
  const auto parsed = parse_transcript(text);
  EXPECT_FALSE(parsed.ground_truth);
  EXPECT_TRUE(parsed.masks().empty());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(parsed.parties[i].entries, r.transcript.parties[i].entries);
}

TEST(TranscriptDump, OneLinePerHopInTokenOrder) {
  const auto r = sample_run(ProtocolKind::KSecure);
  const std::string text = dump_transcript(r.transcript, false);
  std::size_t msgs = 0;
  for (std::size_t pos = text.find("\nmsg "); pos != std::string::npos; pos = text.find("\nmsg ", pos + 1)) ++msgs;
  EXPECT_EQ(msgs, 12u);
  const auto hops = r.transcript.hops();
  EXPECT_EQ(hops.front().from, 1u);
  EXPECT_EQ(hops.front().round, 0u);
  EXPECT_EQ(hops.back().to, 1u);
  EXPECT_EQ(hops.back().round, 2u);
  EXPECT_NE(text.find("msg ksum 0 1 2 "), std::string::npos);
}

TEST(TranscriptDump, FullWidthValueIsWrittenExactly) {
  Transcript t;
  t.protocol = ProtocolKind::KSecure;
  t.config = {3, 1, ArithmeticMode::modular(), 0, 0, std::nullopt};
  t.parties.resize(3);
  const Int top = static_cast<Int>(kTwoPow64 - 1);
  t.record({0, top, 0, 1});
  t.record({0, 0, 1, 2});
  t.record({0, 5, 2, 0});
  const std::string text = dump_transcript(t, false);
  EXPECT_NE(text.find("msg ksum 0 0 1 18446744073709551615\n"), std::string::npos);
  EXPECT_EQ(parse_transcript(text), t);
}

TEST(TranscriptParse, RejectsMalformedInput) {
  const auto bad = [](const std::string& text) {
    try {
      parse_transcript(text);
    } catch (const Error& e) {
      return e.code() == ErrorCode::MalformedTranscript;
    }
    return false;
  };
  EXPECT_TRUE(bad(""));
  EXPECT_TRUE(bad("not a transcript\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol nope\nconfig 3 1 modular 100 0 0\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 2 1 modular 100 0 0\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 3 1 modular 100 0 0\nmsg ksum 0 0 2 5\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 3 1 modular 100 0 0\nmsg ksum 0 0 1 500\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 3 1 modular 100 0 0\nmsg extended 0 0 1 5\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 3 1 modular 100 0 0\nbogus 1\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 3 1 modular 100 0 0\nmsg ksum 0 0 1 5 9\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 3 1 modular 100 0 0\nmask 0 4\n"));
  EXPECT_TRUE(bad("segsum-transcript 1\nprotocol ksum\nconfig 3 1 modular 100 0 0\ninput 0 4\n"));
}

TEST(MergeTranscripts, RejectsForeignPieces) {
  const auto a = sample_run(ProtocolKind::KSecure).transcript;
  auto b = a;
  b.config.seed = 1;
  EXPECT_THROW(merge_transcripts({a, b}), Error);
  EXPECT_THROW(merge_transcripts({}), Error);
}

}  // namespace
}  // namespace segsum
