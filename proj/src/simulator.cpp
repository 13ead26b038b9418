#include "ncsat/simulator.hpp"

#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

#include "ncsat/channel.hpp"
#include "ncsat/errors.hpp"

namespace ncsat {

std::string to_string(Scheme s)
{
  switch (s)
  {
    case Scheme::generation: return "generation";
    case Scheme::sliding_window: return "sliding-window";
    case Scheme::arq: return "arq";
  }
  return "?";
}

std::string to_string(Mode m)
{
  return m == Mode::reliable ? "reliable" : "unreliable";
}

Scheme parse_scheme(const std::string& text)
{
  if (text == "generation" || text == "gb")
    return Scheme::generation;
  if (text == "sliding-window" || text == "sw")
    return Scheme::sliding_window;
  if (text == "arq")
    return Scheme::arq;
  throw ConfigError("scheme", "unknown scheme '" + text + "'");
}

Mode parse_mode(const std::string& text)
{
  if (text == "reliable")
    return Mode::reliable;
  if (text == "unreliable")
    return Mode::unreliable;
  throw ConfigError("mode", "unknown mode '" + text + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
  std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ull * (stream + 1));
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t SimConfig::feedback_slots() const noexcept
{
  return static_cast<std::uint64_t>(std::llround(rtt_ms / slot_ms));
}

void SimConfig::validate() const
{
  if (stream_length == 0)
    throw ConfigError("stream_len", "must be >= 1");
  if (scheme == Scheme::generation && generation_size == 0)
    throw ConfigError("k", "generation size must be >= 1");
  if (!(slot_ms > 0.0))
    throw ConfigError("slot_ms", "must be > 0");
  if (!(rtt_ms >= 0.0))
    throw ConfigError("rtt_ms", "must be >= 0");
  if (!(loss_rate >= 0.0 && loss_rate < 1.0))
    throw ConfigError("pi_b", "must lie in [0, 1)");
  if (!(mean_burst >= 1.0))
    throw ConfigError("mean_burst", "must be >= 1");
  if (!GaloisField::supported(field_bits))
    throw ConfigError("q", "supported field sizes are 1, 4 and 8");
  if (replications == 0)
    throw ConfigError("reps", "must be >= 1");
  if (loss_rate > 0.0)
  {
    try
    {
      derive_params(loss_rate, mean_burst);
    }
    catch (const std::domain_error& e)
    {
      throw ConfigError("pi_b", e.what());
    }
  }
  if (scheme == Scheme::arq && mode == Mode::unreliable)
    throw ConfigError("mode", "ARQ is only defined for reliable streams");
  if (scheme == Scheme::sliding_window && mode == Mode::reliable &&
      !(redundancy.value() * (1.0 - loss_rate) > 1.0))
    throw ConfigError("R", "reliable sliding-window needs R > 1/(1 - pi_B), got R = " + redundancy.to_string());
}

DelayStats RunMetrics::delay() const
{
  std::vector<double> v;
  v.reserve(delay_samples.size());
  for (const auto& s : delay_samples)
    v.push_back(s.delay_ms);
  return delay_stats(v);
}

RunSummary RunMetrics::summary() const
{
  RunSummary s;
  s.delay_count = delay_samples.size();
  if (s.delay_count > 0)
  {
    const auto d = delay();
    s.delay_mean = d.mean;
    s.delay_m2 = d.variance * static_cast<double>(s.delay_count - 1);
  }
  s.efficiency = sink_received_count > 0 ? efficiency() : 0.0;
  s.per = dof_needed > 0 ? per() : 0.0;
  return s;
}

GenerationFeedback generation_feedback(const GenerationDecoder& decoder, std::uint32_t generation, std::uint32_t round)
{
  return {generation, round, static_cast<std::uint32_t>(decoder.deficit(generation))};
}

namespace {

enum Stream : std::uint64_t { channel_stream = 1, coefficient_stream = 2, payload_stream = 3 };

class Link
{
public:
  Link(const SimConfig& cfg, const LossPattern& losses)
    : losses_{losses}
  {
    if (losses_)
      return;
    if (cfg.loss_rate > 0.0)
      channel_.emplace(derive_params(cfg.loss_rate, cfg.mean_burst), derive_seed(cfg.seed, channel_stream));
    else
      channel_.emplace(GilbertParams{0.0, 1.0 / cfg.mean_burst}, derive_seed(cfg.seed, channel_stream),
                       ChannelCondition::good);
  }

  bool erased(std::uint64_t slot)
  {
    if (losses_)
      return losses_(slot);
    return channel_->step();
  }

private:
  const LossPattern& losses_;
  std::optional<GilbertChannel> channel_;
};

class Recorder
{
public:
  Recorder(const SimConfig& cfg, const InfoSource& source)
    : cfg_{cfg}
    , source_{source}
    , first_tx_(cfg.stream_length + 1, 0)
  {
    m_.dof_needed = cfg.stream_length;
    m_.uncoded_transmissions.assign(cfg.stream_length + 1, 0);
    m_.uncoded_erasures.assign(cfg.stream_length + 1, 0);
    m_.delay_samples.reserve(cfg.stream_length);
    limit_ = cfg.max_slots;
    if (limit_ == 0)
      limit_ = cfg.stream_length * 64 + cfg.feedback_slots() * 4096 + 1'000'000;
  }

  void tick(std::uint64_t slot)
  {
    m_.duration_slots = slot;
    if (slot > limit_)
      throw std::runtime_error("simulation exceeded " + std::to_string(limit_) + " slots without finishing");
  }

  void transmitted(const CodedPacket& p, std::uint64_t slot, bool erased)
  {
    ++m_.transmissions;
    if (p.is_uncoded())
    {
      const auto i = p.index();
      if (first_tx_[i] == 0)
        first_tx_[i] = slot;
      ++m_.uncoded_transmissions[i];
      if (erased)
        ++m_.uncoded_erasures[i];
    }
    if (!erased)
      ++m_.sink_received_count;
  }

  void delivered(const std::vector<DeliveryEvent>& events, const Decoder& decoder)
  {
    for (const auto& ev : events)
    {
      const auto first = first_tx_[ev.packet_index];
      const double d = static_cast<double>(ev.delivery_slot - first) * cfg_.slot_ms + cfg_.propagation_ms();
      m_.delay_samples.push_back({ev.packet_index, first, ev.delivery_slot, d});
      ++m_.delivered_count;
      if (cfg_.payload_bytes > 0)
      {
        const auto* got = decoder.recovered_payload(ev.packet_index);
        if (got == nullptr || *got != source_.payload(ev.packet_index))
          m_.payloads_verified = false;
      }
    }
  }

  RunMetrics& metrics() noexcept { return m_; }

private:
  const SimConfig& cfg_;
  const InfoSource& source_;
  std::vector<std::uint64_t> first_tx_;
  RunMetrics m_;
  std::uint64_t limit_;
};

InfoSource make_source(const SimConfig& cfg)
{
  return InfoSource(cfg.stream_length, cfg.payload_bytes, cfg.field_bits, derive_seed(cfg.seed, payload_stream));
}

/// Messages travelling back to the source, each usable from slot `at` on.
template <typename Message>
class FeedbackLine
{
public:
  void send(std::uint64_t at, Message m) { q_.push_back({at, std::move(m)}); }

  template <typename F>
  void receive(std::uint64_t slot, F&& handle)
  {
    while (!q_.empty() && q_.front().first <= slot)
    {
      handle(q_.front().second);
      q_.pop_front();
    }
  }

private:
  std::deque<std::pair<std::uint64_t, Message>> q_;
};

RunMetrics generation_reliable(const SimConfig& cfg, const LossPattern& losses)
{
  const auto& field = GaloisField::get(cfg.field_bits);
  const auto source = make_source(cfg);
  GenerationEncoder encoder(source, cfg.generation_size, cfg.redundancy, derive_seed(cfg.seed, coefficient_stream));
  GenerationDecoder decoder(field, encoder.layout(), cfg.payload_bytes);
  Link link(cfg, losses);
  Recorder rec(cfg, source);
  FeedbackLine<GenerationFeedback> feedback;
  const std::uint64_t delay = cfg.feedback_slots() + 1;

  for (std::uint64_t slot = 1; decoder.core().delivered_count() < cfg.stream_length; ++slot)
  {
    rec.tick(slot);
    feedback.receive(slot, [&](const GenerationFeedback& fb) { encoder.handle_feedback(fb); });
    auto e = encoder.next();
    const bool erased = link.erased(slot);
    if (!e)
      continue;
    rec.transmitted(e->packet, slot, erased);
    if (!erased)
      rec.delivered(decoder.ingest(e->packet, slot), decoder.core());
    if (e->closes_round)
      feedback.send(slot + delay, generation_feedback(decoder, e->closes_round->generation, e->closes_round->round));
  }
  rec.metrics().retransmission_count = encoder.retransmissions();
  return std::move(rec.metrics());
}

RunMetrics generation_unreliable(const SimConfig& cfg, const LossPattern& losses)
{
  const auto& field = GaloisField::get(cfg.field_bits);
  const auto source = make_source(cfg);
  GenerationEncoder encoder(source, cfg.generation_size, cfg.redundancy, derive_seed(cfg.seed, coefficient_stream));
  GenerationDecoder decoder(field, encoder.layout(), cfg.payload_bytes);
  Link link(cfg, losses);
  Recorder rec(cfg, source);

  for (std::uint64_t slot = 1; !encoder.exhausted(); ++slot)
  {
    rec.tick(slot);
    auto e = encoder.next();
    const bool erased = link.erased(slot);
    if (!e)
      continue;
    rec.transmitted(e->packet, slot, erased);
    if (!erased)
      rec.delivered(decoder.ingest(e->packet, slot), decoder.core());
    if (e->closes_round)
    {
      auto flush = decoder.flush_generation(e->closes_round->generation, slot);
      rec.delivered(flush.delivered, decoder.core());
      rec.metrics().erased_count += flush.erased.size();
    }
  }
  return std::move(rec.metrics());
}

RunMetrics sliding_window(const SimConfig& cfg, const LossPattern& losses)
{
  const bool reliable = cfg.mode == Mode::reliable;
  const auto& field = GaloisField::get(cfg.field_bits);
  const auto source = make_source(cfg);
  SlidingWindowEncoder encoder(source, cfg.redundancy, derive_seed(cfg.seed, coefficient_stream), reliable);
  Decoder decoder(field, cfg.payload_bytes);
  Link link(cfg, losses);
  Recorder rec(cfg, source);

  // Reliable: the run ends at full delivery, which is when the sink's
  // completion notice would start travelling back to stop the drain.
  for (std::uint64_t slot = 1; decoder.delivered_count() < cfg.stream_length && !encoder.exhausted(); ++slot)
  {
    rec.tick(slot);
    auto e = encoder.next();
    const bool erased = link.erased(slot);
    if (!e)
      continue;
    rec.transmitted(e->packet, slot, erased);
    if (!erased)
      rec.delivered(decoder.ingest(e->packet, slot), decoder);
  }
  if (!reliable)
    rec.metrics().erased_count = cfg.stream_length - decoder.delivered_count();
  return std::move(rec.metrics());
}

} // namespace

RunMetrics arq_baseline(const SimConfig& cfg, const LossPattern& losses)
{
  cfg.validate();
  if (cfg.scheme != Scheme::arq)
    throw ConfigError("scheme", "arq_baseline needs scheme = arq");

  const auto& field = GaloisField::get(cfg.field_bits);
  const auto source = make_source(cfg);
  ArqSender sender(source);
  Decoder sink(field, cfg.payload_bytes);
  Link link(cfg, losses);
  Recorder rec(cfg, source);
  FeedbackLine<std::uint64_t> feedback;
  const std::uint64_t delay = cfg.feedback_slots() + 1;

  for (std::uint64_t slot = 1; sink.delivered_count() < cfg.stream_length; ++slot)
  {
    rec.tick(slot);
    feedback.receive(slot, [&](std::uint64_t lost) { sender.report_loss(lost); });
    auto e = sender.next();
    const bool erased = link.erased(slot);
    if (!e)
      continue;
    rec.transmitted(e->packet, slot, erased);
    if (erased)
      feedback.send(slot + delay, e->packet.index());
    else
      rec.delivered(sink.ingest(e->packet, slot), sink);
  }
  auto& m = rec.metrics();
  m.retransmission_count = m.transmissions - cfg.stream_length;
  return std::move(m);
}

RunMetrics unreliable_session(const SimConfig& cfg, const LossPattern& losses)
{
  cfg.validate();
  if (cfg.mode != Mode::unreliable)
    throw ConfigError("mode", "unreliable_session needs mode = unreliable");
  switch (cfg.scheme)
  {
    case Scheme::generation: return generation_unreliable(cfg, losses);
    case Scheme::sliding_window: return sliding_window(cfg, losses);
    case Scheme::arq: break;
  }
  throw ConfigError("scheme", "no unreliable variant of " + to_string(cfg.scheme));
}

RunMetrics run_simulation(const SimConfig& cfg)
{
  return run_simulation(cfg, LossPattern{});
}

RunMetrics run_simulation(const SimConfig& cfg, const LossPattern& losses)
{
  cfg.validate();
  if (cfg.scheme == Scheme::arq)
    return arq_baseline(cfg, losses);
  if (cfg.mode == Mode::unreliable)
    return unreliable_session(cfg, losses);
  if (cfg.scheme == Scheme::generation)
    return generation_reliable(cfg, losses);
  return sliding_window(cfg, losses);
}

} // namespace ncsat
