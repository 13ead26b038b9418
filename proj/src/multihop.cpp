#include "ncsat/multihop.hpp"

#include <cmath>
#include <stdexcept>

#include "ncsat/decoder.hpp"
#include "ncsat/encoder.hpp"
#include "ncsat/errors.hpp"
#include "ncsat/simulator.hpp"

namespace ncsat {

std::uint64_t e2e_redundancy_count(std::uint64_t packets, std::span<const double> eps)
{
  double inflation = 1.0;
  for (double e : eps) {
    if (!(e >= 0.0 && e < 1.0))
      throw std::domain_error("link erasure probability must lie in [0, 1)");
    inflation /= 1.0 - e;
  }
  const double extra = static_cast<double>(packets) * (inflation - 1.0);
  // Absorb rounding noise so exact integers do not ceil one too high.
  return static_cast<std::uint64_t>(std::ceil(extra - 1e-9));
}

namespace {

std::uint64_t hop_redundancy_count(std::uint64_t packets, double eps)
{
  const double one[] = {eps};
  return e2e_redundancy_count(packets, one);
}

} // namespace

RecodingBuffer::RecodingBuffer(const GaloisField& field, CodingWindow block, std::size_t payload_bytes)
  : field_{&field}
  , block_{block}
  , payload_bytes_{payload_bytes}
  , known_(block.size(), 0)
  , echelon_{field}
{}

bool RecodingBuffer::add(const CodedPacket& packet)
{
  const CodingWindow w = packet.window();
  if (w.lo < block_.lo || w.hi > block_.hi)
    throw ContractViolation("packet spans outside the recoding block");

  if (packet.is_uncoded() && columns_.empty()) {
    char& k = known_[packet.index() - block_.lo];
    if (k)
      return false;
    k = 1;
    ++known_count_;
    held_.push_back(packet);
    return true;
  }

  if (columns_.empty()) {
    for (std::uint64_t i = block_.lo; i <= block_.hi; ++i)
      if (!known_[i - block_.lo])
        columns_.push_back(i);
    echelon_.add_columns(columns_.size());
  }

  // Coordinates on already-known packets do not affect the rank.
  std::vector<FieldElement> row(columns_.size(), 0);
  bool any = false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    row[c] = packet.coefficient(columns_[c]);
    any = any || row[c] != 0;
  }
  if (!any || !echelon_.insert(std::move(row), {}))
    return false;
  held_.push_back(packet);
  return true;
}

std::optional<CodedPacket> RecodingBuffer::recode(std::mt19937_64& rng) const
{
  if (held_.empty())
    return std::nullopt;

  const GaloisField& f = *field_;
  std::uniform_int_distribution<unsigned> weight(1, f.order() - 1);
  std::vector<FieldElement> acc(block_.size(), 0);
  std::vector<FieldElement> payload(payload_bytes_, 0);

  for (const CodedPacket& p : held_) {
    const auto beta = static_cast<FieldElement>(weight(rng));
    if (p.is_uncoded()) {
      FieldElement& a = acc[p.index() - block_.lo];
      a = f.add(a, beta);
    } else {
      const CoeffVector cv = p.coefficients();
      f.axpy(std::span<FieldElement>{acc}.subspan(cv.origin - block_.lo), beta, cv.coeffs);
    }
    if (payload_bytes_ != 0)
      f.axpy(payload, beta, p.payload());
  }

  // Nonzero weights on independent rows never cancel, but trim to the support
  // so a single buffered packet recodes to a scaled copy of itself.
  std::size_t lo = 0, hi = acc.size();
  while (lo < hi && acc[lo] == 0)
    ++lo;
  while (hi > lo && acc[hi - 1] == 0)
    --hi;
  CoeffVector out{block_.lo + lo, std::vector<FieldElement>(acc.begin() + lo, acc.begin() + hi)};
  return CodedPacket::from_coefficients(std::move(out), std::move(payload));
}

std::string to_string(TandemStrategy s)
{
  return s == TandemStrategy::end_to_end ? "e2e" : "hop-by-hop";
}

void TandemConfig::validate() const
{
  for (double e : link_erasure)
    if (!(e >= 0.0 && e < 1.0))
      throw ConfigError("eps", "link erasure probabilities must lie in [0, 1)");
  if (packets == 0)
    throw ConfigError("stream_len", "must be positive");
  if (!GaloisField::supported(field_bits))
    throw ConfigError("q", "unsupported field size");
}

namespace {

class Tandem
{
public:
  explicit Tandem(const TandemConfig& cfg)
    : cfg_{cfg}
    , field_{GaloisField::get(cfg.field_bits)}
    , source_{cfg.packets, cfg.payload_bytes, cfg.field_bits, derive_seed(cfg.seed, 3)}
    , sampler_{cfg.field_bits, derive_seed(cfg.seed, 2)}
    , sink_{field_, cfg.payload_bytes, false}
  {
    for (int l = 0; l < 3; ++l) {
      link_rng_[l].seed(derive_seed(cfg.seed, 10 + l));
      recode_rng_[l].seed(derive_seed(cfg.seed, 20 + l));
      report_.links.push_back(LinkReport{l + 1});
    }
  }

  TandemReport run()
  {
    const std::uint64_t b = cfg_.block_size == 0 ? cfg_.packets : cfg_.block_size;
    for (std::uint64_t lo = 1; lo <= cfg_.packets; lo += b) {
      const CodingWindow block{lo, std::min(cfg_.packets, lo + b - 1)};
      if (cfg_.strategy == TandemStrategy::end_to_end)
        end_to_end(block);
      else
        hop_by_hop(block);
      ++report_.blocks;
    }
    for (LinkReport& l : report_.links)
      l.efficiency = l.packets_received == 0
                       ? 0.0
                       : static_cast<double>(l.useful_dof_delivered) / static_cast<double>(l.packets_received);
    report_.sink_decodes = sink_.solve_count();
    report_.delivered = sink_.delivered_count();
    if (cfg_.payload_bytes != 0)
      for (std::uint64_t i = 1; i <= cfg_.packets; ++i) {
        const auto* got = sink_.recovered_payload(i);
        if (got == nullptr || *got != source_.payload(i)) {
          report_.payloads_verified = false;
          break;
        }
      }
    return std::move(report_);
  }

private:
  CodedPacket source_coded(CodingWindow block)
  {
    const std::uint64_t seed = sampler_.draw(block);
    auto p = CodedPacket::from_seed(block, seed, cfg_.field_bits);
    if (cfg_.payload_bytes == 0)
      return p;
    return CodedPacket::from_seed(block, seed, cfg_.field_bits, encode_payload(field_, source_, p));
  }

  CodedPacket source_uncoded(std::uint64_t i)
  {
    return CodedPacket::uncoded(i, source_.payload(i));
  }

  // Puts a packet on link l (0-based); returns whether it survived.
  bool transmit(int l)
  {
    LinkReport& r = report_.links[l];
    ++r.packets_carried;
    if (std::bernoulli_distribution{cfg_.link_erasure[l]}(link_rng_[l]))
      return false;
    ++r.packets_received;
    return true;
  }

  // Delivers to the node at the far end of link l; returns whether innovative.
  bool receive(int l, const CodedPacket& p, std::vector<RecodingBuffer>& relays, CodingWindow block)
  {
    bool innovative;
    if (l < 2) {
      innovative = relays[l].add(p);
    } else {
      const std::size_t before = sink_.dof_in(block);
      sink_.ingest(p, slot_++);
      innovative = sink_.dof_in(block) > before;
    }
    if (innovative)
      ++report_.links[l].useful_dof_delivered;
    return innovative;
  }

  std::vector<RecodingBuffer> make_relays(CodingWindow block) const
  {
    std::vector<RecodingBuffer> r;
    r.emplace_back(field_, block, cfg_.payload_bytes);
    r.emplace_back(field_, block, cfg_.payload_bytes);
    return r;
  }

  void end_to_end(CodingWindow block)
  {
    auto relays = make_relays(block);
    auto relay_chain = [&](const CodedPacket& p) {
      for (int l = 0; l < 3; ++l) {
        if (!transmit(l))
          return;
        receive(l, p, relays, block);
      }
    };
    for (std::uint64_t i = block.lo; i <= block.hi; ++i)
      relay_chain(source_uncoded(i));
    const std::uint64_t extra = e2e_redundancy_count(block.size(), cfg_.link_erasure);
    for (std::uint64_t j = 0; j < extra; ++j)
      relay_chain(source_coded(block));
    while (sink_.dof_in(block) < block.size()) {
      relay_chain(source_coded(block));
      ++report_.extra_packets;
    }
  }

  void hop_by_hop(CodingWindow block)
  {
    auto relays = make_relays(block);
    const std::uint64_t n = block.size();
    auto rank_at = [&](int l) -> std::uint64_t { return l < 2 ? relays[l].rank() : sink_.dof_in(block); };
    auto send = [&](int l, const CodedPacket& p) {
      if (transmit(l))
        receive(l, p, relays, block);
    };

    // Link 1: the source sends its block plus redundancy sized to this link.
    for (std::uint64_t i = block.lo; i <= block.hi; ++i)
      send(0, source_uncoded(i));
    for (std::uint64_t j = hop_redundancy_count(n, cfg_.link_erasure[0]); j > 0; --j)
      send(0, source_coded(block));
    while (rank_at(0) < n) {
      send(0, source_coded(block));
      ++report_.extra_packets;
    }

    // Links 2 and 3: forward the buffered rows, then recode.
    for (int l = 1; l < 3; ++l) {
      const RecodingBuffer& from = relays[l - 1];
      const std::vector<CodedPacket> held = from.held();
      for (const CodedPacket& p : held)
        send(l, p);
      for (std::uint64_t j = hop_redundancy_count(n, cfg_.link_erasure[l]); j > 0; --j)
        send(l, *from.recode(recode_rng_[l]));
      while (rank_at(l) < n) {
        send(l, *from.recode(recode_rng_[l]));
        ++report_.extra_packets;
      }
    }
  }

  const TandemConfig& cfg_;
  const GaloisField& field_;
  InfoSource source_;
  CoefficientSampler sampler_;
  Decoder sink_;
  std::mt19937_64 link_rng_[3];
  std::mt19937_64 recode_rng_[3];
  std::uint64_t slot_ = 0;
  TandemReport report_;
};

} // namespace

TandemReport run_tandem(const TandemConfig& cfg)
{
  cfg.validate();
  return Tandem{cfg}.run();
}

} // namespace ncsat
