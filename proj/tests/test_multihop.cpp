#include <random>

#include <gtest/gtest.h>

#include "ncsat/multihop.hpp"
#include "oracles.hpp"

using namespace ncsat;

TEST(Tandem, RedundancyCountClosedForm)
{
  const double none[] = {0, 0, 0}, even[] = {0.1, 0.1, 0.1}, first[] = {0.1, 0, 0}, dead[] = {0.1, 1.0, 0};
  EXPECT_EQ(e2e_redundancy_count(1000, none), 0u);
  EXPECT_EQ(e2e_redundancy_count(1000, even), 372u);
  EXPECT_EQ(e2e_redundancy_count(1000, first), 112u);
  EXPECT_THROW(e2e_redundancy_count(1000, dead), std::domain_error);
}

TEST(Recoding, SingleUncodedPacketGivesScaledCopy)
{
  const auto& f = GaloisField::get(8);
  RecodingBuffer buf{f, {1, 4}};
  buf.add(CodedPacket::uncoded(3));
  std::mt19937_64 rng{1};
  const auto out = buf.recode(rng);
  ASSERT_TRUE(out);
  const auto cv = out->coefficients();
  EXPECT_EQ(cv.origin, 3u);
  ASSERT_EQ(cv.size(), 1u);
  EXPECT_NE(cv.coeffs[0], 0);
}

TEST(Recoding, EmptyBufferSignalsNothingToSend)
{
  RecodingBuffer buf{GaloisField::get(8), {1, 4}};
  std::mt19937_64 rng{1};
  EXPECT_FALSE(buf.recode(rng));
  EXPECT_TRUE(buf.empty());
}

TEST(Recoding, CoefficientsComposeThroughBufferedRows)
{
  // Buffer {p1, p1 + p2}: output a*p1 + b*(p1 + p2) = (a ^ b, b), a, b != 0.
  const auto& f = GaloisField::get(8);
  RecodingBuffer buf{f, {1, 2}};
  buf.add(CodedPacket::uncoded(1));
  ASSERT_TRUE(buf.add(CodedPacket::from_coefficients({1, {1, 1}})));
  std::mt19937_64 rng{9};
  for (int i = 0; i < 200; ++i) {
    const auto cv = buf.recode(rng)->coefficients();
    const auto b = cv.at_index(2);
    EXPECT_NE(b, 0);
    EXPECT_NE(cv.at_index(1), b);  // a = c1 ^ b must be nonzero
  }
}

TEST(Recoding, RankCountsOnlyInnovativePackets)
{
  const auto& f = GaloisField::get(8);
  RecodingBuffer buf{f, {1, 4}};
  EXPECT_TRUE(buf.add(CodedPacket::uncoded(2)));
  EXPECT_FALSE(buf.add(CodedPacket::uncoded(2)));
  EXPECT_TRUE(buf.add(CodedPacket::from_seed({1, 4}, 5, 8)));
  EXPECT_TRUE(buf.add(CodedPacket::uncoded(4)));
  EXPECT_EQ(buf.rank(), 3u);
  EXPECT_EQ(buf.held().size(), 3u);
}

TEST(Recoding, RecodedPacketsSpanTheBufferSubspace)
{
  const auto& f = GaloisField::get(8);
  std::mt19937_64 rng{4};
  for (int trial = 0; trial < 50; ++trial) {
    RecodingBuffer buf{f, {1, 4}};
    oracle::Matrix held;
    auto take = [&](const CodedPacket& p) {
      if (!buf.add(p))
        return;
      std::vector<std::uint8_t> row(4);
      for (int i = 0; i < 4; ++i)
        row[i] = p.coefficient(i + 1);
      held.push_back(row);
    };
    const std::uint64_t n = 1 + trial % 3;
    for (std::uint64_t i = 0; i < n; ++i)
      take(CodedPacket::from_seed({1, 4}, rng(), 8));
    if (trial % 2)
      take(CodedPacket::uncoded(1 + trial % 4));
    const std::size_t r = buf.rank();
    ASSERT_EQ(r, oracle::rank(held, 8));

    oracle::Matrix out;
    while (oracle::rank(out, 8) < r) {
      const auto cv = buf.recode(rng)->coefficients();
      std::vector<std::uint8_t> row(4);
      for (int i = 0; i < 4; ++i)
        row[i] = cv.at_index(i + 1);
      // Each output lies in the held row space.
      auto ext = held;
      ext.push_back(row);
      ASSERT_EQ(oracle::rank(ext, 8), r);
      out.push_back(row);
      ASSERT_LT(out.size(), 20u);
    }
    // And r independent outputs recover the whole space.
    auto both = held;
    both.insert(both.end(), out.begin(), out.end());
    EXPECT_EQ(oracle::rank(both, 8), r);
  }
}

TEST(Tandem, LosslessLinksAreIdenticalAndFullyEfficient)
{
  for (auto s : {TandemStrategy::end_to_end, TandemStrategy::hop_by_hop}) {
    TandemConfig c;
    c.link_erasure = {0, 0, 0};
    c.packets = 3000;
    c.strategy = s;
    const auto r = run_tandem(c);
    for (const auto& l : r.links) {
      EXPECT_EQ(l.packets_carried, 3000u);
      EXPECT_DOUBLE_EQ(l.efficiency, 1.0);
    }
    EXPECT_EQ(r.sink_decodes, 0u);
    EXPECT_EQ(r.delivered, 3000u);
  }
}

TEST(Tandem, BothStrategiesDeliverEveryPayload)
{
  for (auto s : {TandemStrategy::end_to_end, TandemStrategy::hop_by_hop}) {
    TandemConfig c;
    c.packets = 1500;
    c.block_size = 500;
    c.payload_bytes = 6;
    c.strategy = s;
    c.seed = 3;
    const auto r = run_tandem(c);
    EXPECT_EQ(r.delivered, 1500u);
    EXPECT_TRUE(r.payloads_verified);
    EXPECT_EQ(r.blocks, 3u);
    EXPECT_EQ(r.sink_decodes, 3u);  // one back-substitution per block
    for (const auto& l : r.links)
      EXPECT_LE(l.efficiency, 1.0);
  }
}

TEST(Tandem, SinkDecodesOnceForAWholeStreamBlock)
{
  for (auto s : {TandemStrategy::end_to_end, TandemStrategy::hop_by_hop}) {
    TandemConfig c;
    c.packets = 800;
    c.block_size = 0;
    c.strategy = s;
    EXPECT_EQ(run_tandem(c).sink_decodes, 1u);
  }
}

TEST(Tandem, HopByHopIsMoreEfficientUpstream)
{
  TandemConfig c;
  c.packets = 5000;
  c.strategy = TandemStrategy::end_to_end;
  const auto e2e = run_tandem(c);
  c.strategy = TandemStrategy::hop_by_hop;
  const auto hop = run_tandem(c);
  EXPECT_GT(hop.links[0].efficiency, e2e.links[0].efficiency + 0.1);
  EXPECT_GT(hop.links[1].efficiency, e2e.links[1].efficiency + 0.05);
  const double ratio = static_cast<double>(e2e.links[0].packets_carried) / hop.links[0].packets_carried;
  EXPECT_NEAR(ratio, 1.0 / 0.81, 0.03);
}

TEST(Tandem, RejectsInvalidConfig)
{
  TandemConfig c;
  c.link_erasure = {0.1, 1.0, 0.0};
  EXPECT_THROW(run_tandem(c), std::invalid_argument);
}
