#include "ncsat/encoder.hpp"

#include "ncsat/errors.hpp"

namespace ncsat {

std::uint64_t CoefficientSampler::draw(CodingWindow window)
{
  for (;;)
  {
    const std::uint64_t seed = rng_();
    // Scanning from the top usually stops at the first entry.
    for (std::uint64_t i = window.hi; i >= window.lo && i != 0; --i)
      if (drawn_coefficient(seed, i, bits_) != 0)
        return seed;
  }
}

GenerationEncoder::GenerationEncoder(InfoSource source, std::uint32_t k, Redundancy redundancy, std::uint64_t coeff_seed)
  : source_{std::move(source)}
  , layout_{source_.size(), k}
  , redundancy_{redundancy}
  , coded_per_generation_{redundancy.coded_per_generation(k)}
  , field_{&GaloisField::get(source_.field_bits())}
  , sampler_{source_.field_bits(), coeff_seed}
{
  if (k == 0)
    throw ConfigError("k", "generation size must be >= 1");
}

CodedPacket GenerationEncoder::combination(std::uint32_t generation)
{
  const auto w = layout_.window(generation);
  const std::uint64_t seed = sampler_.draw(w);
  auto packet = CodedPacket::from_seed(w, seed, source_.field_bits(), {}, generation);
  if (source_.payload_bytes() == 0)
    return packet;
  return CodedPacket::from_seed(w, seed, source_.field_bits(), encode_payload(*field_, source_, packet), generation);
}

std::optional<Emission> GenerationEncoder::next()
{
  if (!retx_.empty())
  {
    auto& p = retx_.front();
    Emission e{combination(p.generation), std::nullopt};
    ++retransmissions_;
    if (--p.remaining == 0)
    {
      e.closes_round = RoundEnd{p.generation, p.round};
      retx_.pop_front();
    }
    return e;
  }

  if (current_ > layout_.count())
    return std::nullopt;

  const auto w = layout_.window(current_);
  const std::uint64_t round_length = w.size() + coded_per_generation_;
  Emission e{position_ < w.size()
               ? CodedPacket::uncoded(w.lo + position_, source_.payload(w.lo + position_), current_)
               : combination(current_),
             std::nullopt};
  if (++position_ == round_length)
  {
    e.closes_round = RoundEnd{current_, 1};
    ++current_;
    position_ = 0;
  }
  return e;
}

void GenerationEncoder::handle_feedback(const GenerationFeedback& fb)
{
  if (fb.generation == 0 || fb.generation > layout_.count())
    throw ContractViolation("feedback for unknown generation " + std::to_string(fb.generation));
  if (!seen_feedback_.insert({fb.generation, fb.round}).second)
    return;
  if (fb.deficit == 0)
    return;
  retx_.push_back({fb.generation, fb.round + 1, fb.deficit});
}

SlidingWindowEncoder::SlidingWindowEncoder(InfoSource source, Redundancy redundancy, std::uint64_t coeff_seed, bool drain)
  : source_{std::move(source)}
  , redundancy_{redundancy}
  , field_{&GaloisField::get(source_.field_bits())}
  , sampler_{source_.field_bits(), coeff_seed}
  , drain_{drain}
{}

CodedPacket SlidingWindowEncoder::combination()
{
  const CodingWindow w{1, sent_};
  const std::uint64_t seed = sampler_.draw(w);
  auto packet = CodedPacket::from_seed(w, seed, source_.field_bits());
  if (source_.payload_bytes() == 0)
    return packet;
  return CodedPacket::from_seed(w, seed, source_.field_bits(), encode_payload(*field_, source_, packet));
}

std::optional<Emission> SlidingWindowEncoder::next()
{
  if (credit_ >= redundancy_.den())
  {
    credit_ -= redundancy_.den();
    return Emission{combination(), std::nullopt};
  }
  if (sent_ < source_.size())
  {
    ++sent_;
    credit_ += redundancy_.num() - redundancy_.den();
    return Emission{CodedPacket::uncoded(sent_, source_.payload(sent_)), std::nullopt};
  }
  if (drain_ && !stopped_ && sent_ > 0)
    return Emission{combination(), std::nullopt};
  return std::nullopt;
}

bool SlidingWindowEncoder::exhausted() const noexcept
{
  if (credit_ >= redundancy_.den() || sent_ < source_.size())
    return false;
  return !drain_ || stopped_;
}

ArqSender::ArqSender(InfoSource source)
  : source_{std::move(source)}
{}

std::optional<Emission> ArqSender::next()
{
  std::uint64_t idx;
  if (!retx_.empty())
  {
    idx = retx_.front();
    retx_.pop_front();
  }
  else if (next_ <= source_.size())
  {
    idx = next_++;
  }
  else
  {
    return std::nullopt;
  }
  return Emission{CodedPacket::uncoded(idx, source_.payload(idx)), std::nullopt};
}

} // namespace ncsat
