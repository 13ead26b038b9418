#include <gtest/gtest.h>

#include "ncsat/decoder.hpp"
#include "ncsat/encoder.hpp"
#include "ncsat/errors.hpp"

using namespace ncsat;

namespace {

// "p3" for uncoded packet 3, "c1-4" for a combination over 1..4.
std::string label(const CodedPacket& p)
{
  if (p.is_uncoded())
    return "p" + std::to_string(p.index());
  return "c" + std::to_string(p.window().lo) + "-" + std::to_string(p.window().hi);
}

template <typename Encoder>
std::vector<std::string> drain(Encoder& enc, std::size_t limit = 1000)
{
  std::vector<std::string> out;
  while (out.size() < limit) {
    auto e = enc.next();
    if (!e)
      break;
    out.push_back(label(e->packet));
  }
  return out;
}

InfoSource source(std::uint64_t n, std::size_t payload = 0) { return InfoSource{n, payload, 8, 99}; }

std::vector<std::uint64_t> indices(const std::vector<DeliveryEvent>& ev)
{
  std::vector<std::uint64_t> out;
  for (const auto& e : ev)
    out.push_back(e.packet_index);
  return out;
}

CodedPacket coded(CodingWindow w, std::uint64_t seed, std::optional<std::uint32_t> gen = std::nullopt)
{
  return CodedPacket::from_seed(w, seed, 8, {}, gen);
}

} // namespace

TEST(GenerationEncoder, SystematicOrderPerGeneration)
{
  GenerationEncoder enc{source(8), 4, Redundancy{5, 4}, 1};
  EXPECT_EQ(drain(enc), (std::vector<std::string>{"p1", "p2", "p3", "p4", "c1-4", "p5", "p6", "p7", "p8", "c5-8"}));
  EXPECT_TRUE(enc.exhausted());
}

TEST(GenerationEncoder, NoRedundancyIsPassThrough)
{
  GenerationEncoder enc{source(3), 1, Redundancy{1, 1}, 1};
  std::vector<std::uint32_t> closed;
  while (auto e = enc.next()) {
    EXPECT_TRUE(e->packet.is_uncoded());
    ASSERT_TRUE(e->closes_round);
    closed.push_back(e->closes_round->generation);
  }
  EXPECT_EQ(closed, (std::vector<std::uint32_t>{1, 2, 3}));
}

TEST(GenerationEncoder, TailGenerationKeepsFullCodedCount)
{
  GenerationEncoder enc{source(6), 4, Redundancy{3, 2}, 1};
  EXPECT_EQ(enc.coded_per_generation(), 2u);
  EXPECT_EQ(enc.layout().window(2), (CodingWindow{5, 6}));
  EXPECT_EQ(drain(enc), (std::vector<std::string>{"p1", "p2", "p3", "p4", "c1-4", "c1-4", "p5", "p6", "c5-6", "c5-6"}));
}

TEST(GenerationEncoder, CodedCountRoundsUp)
{
  EXPECT_EQ(Redundancy(5, 4).coded_per_generation(4), 1u);
  EXPECT_EQ(Redundancy(5, 4).coded_per_generation(5), 2u);
  EXPECT_EQ(Redundancy(11, 10).coded_per_generation(2), 1u);
  EXPECT_EQ(Redundancy(1, 1).coded_per_generation(64), 0u);
}

TEST(GenerationEncoder, CodedPacketsStayInTheirGeneration)
{
  GenerationEncoder enc{source(40), 8, Redundancy{3, 2}, 5};
  while (auto e = enc.next()) {
    const auto g = e->packet.generation();
    ASSERT_TRUE(g);
    const auto w = enc.layout().window(*g);
    EXPECT_GE(e->packet.window().lo, w.lo);
    EXPECT_LE(e->packet.window().hi, w.hi);
    if (!e->packet.is_uncoded()) {
      EXPECT_FALSE(e->packet.coefficients().is_zero());
    }
  }
}

TEST(GenerationEncoder, FeedbackQueuesRetransmissionsFirst)
{
  GenerationEncoder enc{source(20), 4, Redundancy{5, 4}, 1};
  for (int i = 0; i < 15; ++i)  // generations 1..3
    enc.next();

  enc.handle_feedback({1, 1, 0});
  enc.handle_feedback({3, 1, 2});
  enc.handle_feedback({3, 1, 2});  // same message again
  auto a = enc.next(), b = enc.next(), c = enc.next();
  EXPECT_EQ(label(a->packet), "c9-12");
  EXPECT_FALSE(a->closes_round);
  EXPECT_EQ(label(b->packet), "c9-12");
  ASSERT_TRUE(b->closes_round);
  EXPECT_EQ(b->closes_round->generation, 3u);
  EXPECT_EQ(b->closes_round->round, 2u);
  EXPECT_EQ(label(c->packet), "p13");
  EXPECT_EQ(enc.retransmissions(), 2u);
}

TEST(GenerationEncoder, FeedbackForUnknownGenerationIsAContractViolation)
{
  GenerationEncoder enc{source(8), 4, Redundancy{5, 4}, 1};
  EXPECT_THROW(enc.handle_feedback({3, 1, 1}), ContractViolation);
  EXPECT_THROW(enc.handle_feedback({0, 1, 1}), ContractViolation);
}

TEST(SlidingWindowEncoder, InsertsCombinationsOfEverythingSent)
{
  SlidingWindowEncoder enc{source(8), Redundancy{5, 4}, 1, false};
  EXPECT_EQ(drain(enc), (std::vector<std::string>{"p1", "p2", "p3", "p4", "c1-4", "p5", "p6", "p7", "p8", "c1-8"}));

  SlidingWindowEncoder half{source(3), Redundancy{2, 1}, 1, false};
  EXPECT_EQ(drain(half), (std::vector<std::string>{"p1", "c1-1", "p2", "c1-2", "p3", "c1-3"}));
}

TEST(SlidingWindowEncoder, UnitRedundancyDegradesToPassThrough)
{
  SlidingWindowEncoder enc{source(4), Redundancy{1, 1}, 1, false};
  EXPECT_TRUE(enc.degenerate());
  EXPECT_EQ(drain(enc), (std::vector<std::string>{"p1", "p2", "p3", "p4"}));
}

TEST(SlidingWindowEncoder, FractionalSpacingKeepsExactRate)
{
  SlidingWindowEncoder enc{source(10000), Redundancy{143, 100}, 1, false};
  std::size_t total = 0;
  while (enc.next())
    ++total;
  EXPECT_EQ(total, 14300u);
}

TEST(SlidingWindowEncoder, DrainKeepsSendingUntilStopped)
{
  SlidingWindowEncoder enc{source(2), Redundancy{2, 1}, 1, true};
  const auto first = drain(enc, 8);
  EXPECT_EQ(first, (std::vector<std::string>{"p1", "c1-1", "p2", "c1-2", "c1-2", "c1-2", "c1-2", "c1-2"}));
  EXPECT_FALSE(enc.exhausted());
  enc.stop();
  EXPECT_FALSE(enc.next());
  EXPECT_TRUE(enc.exhausted());
}

TEST(ArqSender, ResendsAheadOfNewPackets)
{
  ArqSender s{source(3)};
  EXPECT_EQ(label(s.next()->packet), "p1");
  EXPECT_EQ(label(s.next()->packet), "p2");
  s.report_loss(1);
  EXPECT_EQ(label(s.next()->packet), "p1");
  EXPECT_EQ(label(s.next()->packet), "p3");
  EXPECT_FALSE(s.next());
  EXPECT_TRUE(s.exhausted());
}

TEST(Decoder, InOrderUncodedPacketsDeliverImmediately)
{
  Decoder d{GaloisField::get(8)};
  for (std::uint64_t i = 1; i <= 3; ++i) {
    const auto ev = d.ingest(CodedPacket::uncoded(i), i);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0], (DeliveryEvent{i, i}));
  }
  EXPECT_TRUE(d.ingest(CodedPacket::uncoded(2), 4).empty());
  EXPECT_EQ(d.rank(), 0u);
  EXPECT_EQ(d.delivered_through(), 3u);
}

TEST(Decoder, SingleLossRepairedByCombination)
{
  // Slot 2 erased: p1 goes up at once, p2..p4 when the combination lands.
  Decoder d{GaloisField::get(8)};
  EXPECT_EQ(indices(d.ingest(CodedPacket::uncoded(1), 1)), (std::vector<std::uint64_t>{1}));
  EXPECT_TRUE(d.ingest(CodedPacket::uncoded(3), 3).empty());
  EXPECT_TRUE(d.ingest(CodedPacket::uncoded(4), 4).empty());
  const auto ev = d.ingest(coded({1, 4}, 11), 5);
  EXPECT_EQ(indices(ev), (std::vector<std::uint64_t>{2, 3, 4}));
  for (const auto& e : ev)
    EXPECT_EQ(e.delivery_slot, 5u);
}

TEST(Decoder, TwoLossesNeedTwoCombinations)
{
  Decoder d{GaloisField::get(8)};
  d.ingest(CodedPacket::uncoded(3), 3);
  d.ingest(CodedPacket::uncoded(4), 4);
  EXPECT_TRUE(d.ingest(coded({1, 4}, 21), 5).empty());
  EXPECT_EQ(d.rank(), 1u);
  EXPECT_EQ(d.dof_in({1, 4}), 3u);
  EXPECT_EQ(indices(d.ingest(coded({1, 4}, 22), 6)), (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_EQ(d.solve_count(), 1u);
}

TEST(Decoder, DependentCombinationIsAbsorbed)
{
  Decoder d{GaloisField::get(8)};
  d.ingest(CodedPacket::uncoded(2), 1);
  const auto c = coded({1, 2}, 3);
  EXPECT_FALSE(d.ingest(c, 2).empty());
  EXPECT_TRUE(d.ingest(c, 3).empty());
  EXPECT_EQ(d.delivered_count(), 2u);
}

TEST(Decoder, RecoversPayloads)
{
  const auto& f = GaloisField::get(8);
  const InfoSource src{6, 16, 8, 5};
  Decoder d{f, 16};
  auto with_payload = [&](CodingWindow w, std::uint64_t seed) {
    auto shape = coded(w, seed);
    return CodedPacket::from_seed(w, seed, 8, encode_payload(f, src, shape));
  };
  d.ingest(CodedPacket::uncoded(1, src.payload(1)), 1);
  d.ingest(CodedPacket::uncoded(4, src.payload(4)), 2);
  d.ingest(with_payload({1, 4}, 7), 3);
  d.ingest(CodedPacket::uncoded(5, src.payload(5)), 4);
  d.ingest(with_payload({1, 6}, 8), 5);
  d.ingest(with_payload({1, 6}, 9), 6);
  ASSERT_EQ(d.delivered_count(), 6u);
  for (std::uint64_t i = 1; i <= 6; ++i) {
    ASSERT_NE(d.recovered_payload(i), nullptr);
    EXPECT_EQ(*d.recovered_payload(i), src.payload(i)) << i;
  }
}

TEST(Decoder, AbandonReleasesWhatIsKnownAbove)
{
  Decoder d{GaloisField::get(8)};
  d.ingest(CodedPacket::uncoded(3), 1);
  const auto flush = d.abandon_through(2, 9);
  EXPECT_EQ(flush.erased, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(indices(flush.delivered), (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(d.delivered_through(), 3u);
}

TEST(GenerationDecoder, CombinationsNeverHelpOtherGenerations)
{
  GenerationDecoder d{GaloisField::get(8), {8, 4}};
  d.ingest(coded({1, 4}, 1, 1), 1);
  d.ingest(coded({1, 4}, 2, 1), 2);
  EXPECT_EQ(d.dof(1), 2u);
  EXPECT_EQ(d.dof(2), 0u);
  EXPECT_EQ(d.deficit(2), 4u);
  EXPECT_THROW(d.ingest(coded({3, 6}, 3, 1), 3), ContractViolation);
  EXPECT_THROW(d.ingest(coded({1, 4}, 3), 3), ContractViolation);
}

TEST(GenerationDecoder, FlushDeliversDecodableGenerations)
{
  GenerationDecoder d{GaloisField::get(8), {4, 4}};
  d.ingest(CodedPacket::uncoded(1, {}, 1), 1);
  d.ingest(CodedPacket::uncoded(2, {}, 1), 2);
  d.ingest(CodedPacket::uncoded(4, {}, 1), 4);
  d.ingest(coded({1, 4}, 5, 1), 5);
  EXPECT_TRUE(d.decodable(1));
  const auto flush = d.flush_generation(1, 6);
  EXPECT_TRUE(flush.erased.empty());
  EXPECT_EQ(d.core().delivered_count(), 4u);
}

TEST(GenerationDecoder, FlushOfUndecodableGenerationKeepsReceivedPackets)
{
  GenerationDecoder d{GaloisField::get(8), {8, 4}};
  d.ingest(CodedPacket::uncoded(3, {}, 1), 3);
  d.ingest(CodedPacket::uncoded(4, {}, 1), 4);
  d.ingest(coded({1, 4}, 5, 1), 5);
  EXPECT_EQ(d.deficit(1), 1u);
  const auto flush = d.flush_generation(1, 5);
  EXPECT_EQ(flush.erased, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(indices(flush.delivered), (std::vector<std::uint64_t>{3, 4}));

  // Generation 2 is untouched by what happened to generation 1.
  for (std::uint64_t i = 5; i <= 8; ++i)
    d.ingest(CodedPacket::uncoded(i, {}, 2), i + 1);
  EXPECT_EQ(d.core().delivered_count(), 6u);
  EXPECT_TRUE(d.flush_generation(2, 10).erased.empty());
}

TEST(GenerationDecoder, FlushOrderIsEnforced)
{
  GenerationDecoder d{GaloisField::get(8), {12, 4}};
  EXPECT_THROW(d.flush_generation(2, 1), ContractViolation);
  d.flush_generation(1, 1);
  EXPECT_THROW(d.flush_generation(1, 2), ContractViolation);
}

TEST(GenerationDecoder, KCombinationsAlmostAlwaysDecode)
{
  const auto& f = GaloisField::get(8);
  int decoded = 0;
  const int trials = 10000;
  std::uint64_t seed = 1;
  for (int t = 0; t < trials; ++t) {
    GenerationDecoder d{f, {8, 8}};
    for (int i = 0; i < 8; ++i)
      d.ingest(coded({1, 8}, seed++, 1), i);
    decoded += d.decodable(1);
  }
  EXPECT_GE(decoded, 0.99 * trials);
}
