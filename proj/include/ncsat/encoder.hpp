#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <utility>

#include "ncsat/decoder.hpp"
#include "ncsat/packet.hpp"
#include "ncsat/redundancy.hpp"

namespace ncsat {

/// Marks the last packet of a generation's transmission round. Round 1 is the
/// systematic round; each retransmission request opens the next round.
struct RoundEnd
{
  std::uint32_t generation;
  std::uint32_t round;
};

struct Emission
{
  CodedPacket packet;
  std::optional<RoundEnd> closes_round;
};

/// Sink report on one generation after a round: how many more degrees of
/// freedom it needs. (generation, round) identifies the message.
struct GenerationFeedback
{
  std::uint32_t generation;
  std::uint32_t round;
  std::uint32_t deficit;
};

/// Draws fresh coefficient seeds, rejecting all-zero combinations.
class CoefficientSampler
{
public:
  CoefficientSampler(unsigned field_bits, std::uint64_t seed)
    : bits_{field_bits}
    , rng_{seed}
  {}

  unsigned field_bits() const noexcept { return bits_; }

  /// Seed whose drawn coefficients over `window` are not all zero.
  std::uint64_t draw(CodingWindow window);

private:
  unsigned bits_;
  std::mt19937_64 rng_;
};

/// Systematic generation-based encoder: for each generation, its packets go
/// out uncoded followed by ceil(k(R-1)) random combinations of the whole
/// generation. Retransmission requests queue extra combinations for a named
/// generation and take priority over new generations, FIFO among themselves.
class GenerationEncoder
{
public:
  GenerationEncoder(InfoSource source, std::uint32_t k, Redundancy redundancy, std::uint64_t coeff_seed);

  /// Next packet to send, or nullopt when nothing is ready.
  std::optional<Emission> next();

  /// True once every generation was sent and no retransmission is queued.
  bool exhausted() const noexcept { return retx_.empty() && current_ > layout_.count(); }

  /// Queues `deficit` extra combinations of the generation. Repeated messages
  /// (same generation and round) are ignored.
  void handle_feedback(const GenerationFeedback& fb);

  const GenerationLayout& layout() const noexcept { return layout_; }
  std::uint64_t coded_per_generation() const noexcept { return coded_per_generation_; }
  std::uint64_t retransmissions() const noexcept { return retransmissions_; }

private:
  CodedPacket combination(std::uint32_t generation);

  InfoSource source_;
  GenerationLayout layout_;
  Redundancy redundancy_;
  std::uint64_t coded_per_generation_;
  const GaloisField* field_;
  CoefficientSampler sampler_;

  std::uint32_t current_ = 1;   // generation being streamed
  std::uint64_t position_ = 0;  // packets of `current_` already emitted
  struct Pending { std::uint32_t generation; std::uint32_t round; std::uint32_t remaining; };
  std::deque<Pending> retx_;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen_feedback_;
  std::uint64_t retransmissions_ = 0;
};

/// Systematic sliding-window encoder: information packets go out uncoded and,
/// at average spacing R/(R-1), a random combination of every information
/// packet sent so far is inserted.
///
/// Insertion is driven by an exact redundancy credit: each uncoded packet adds
/// R - 1 and a combination is sent whenever the credit reaches one. For
/// integer spacings this is the same schedule as counting u up to n; for
/// fractional spacings it keeps the long-run rate at exactly R.
class SlidingWindowEncoder
{
public:
  /// With `drain` set, combinations of the whole stream keep flowing after the
  /// last information packet until stop() is called.
  SlidingWindowEncoder(InfoSource source, Redundancy redundancy, std::uint64_t coeff_seed, bool drain);

  std::optional<Emission> next();

  bool exhausted() const noexcept;

  /// R == 1: no redundancy possible, the encoder only passes packets through.
  bool degenerate() const noexcept { return redundancy_.is_one(); }

  /// Sink confirmed full delivery; ends the drain phase.
  void stop() noexcept { stopped_ = true; }

  std::uint64_t sent_information() const noexcept { return sent_; }

private:
  CodedPacket combination();

  InfoSource source_;
  Redundancy redundancy_;
  const GaloisField* field_;
  CoefficientSampler sampler_;
  bool drain_;
  bool stopped_ = false;
  std::uint64_t sent_ = 0;
  std::uint64_t credit_ = 0;  // in units of 1/den
};

/// Idealized selective-repeat ARQ sender: uncoded packets in order; every
/// reported loss is resent at the next opportunity ahead of new packets.
class ArqSender
{
public:
  explicit ArqSender(InfoSource source);

  std::optional<Emission> next();
  void report_loss(std::uint64_t index) { retx_.push_back(index); }
  bool exhausted() const noexcept { return retx_.empty() && next_ > source_.size(); }

private:
  InfoSource source_;
  std::uint64_t next_ = 1;
  std::deque<std::uint64_t> retx_;
};

} // namespace ncsat
