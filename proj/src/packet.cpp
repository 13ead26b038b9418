#include "ncsat/packet.hpp"

#include "ncsat/errors.hpp"

namespace ncsat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

} // namespace

FieldElement drawn_coefficient(std::uint64_t seed, std::uint64_t index, unsigned bits) noexcept
{
  const std::uint64_t h = splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ull));
  return static_cast<FieldElement>(h & ((1u << bits) - 1));
}

InfoSource::InfoSource(std::uint64_t stream_length, std::size_t payload_bytes, unsigned field_bits, std::uint64_t seed)
  : length_{stream_length}
  , payload_bytes_{payload_bytes}
  , bits_{field_bits}
  , seed_{seed}
{}

std::vector<FieldElement> InfoSource::payload(std::uint64_t index) const
{
  std::vector<FieldElement> out(payload_bytes_);
  const std::uint64_t mask = (1u << bits_) - 1;
  std::uint64_t state = splitmix64(seed_ ^ splitmix64(index));
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    if (i % 8 == 0)
      state = splitmix64(state);
    out[i] = static_cast<FieldElement>((state >> (8 * (i % 8))) & mask);
  }
  return out;
}

CodedPacket CodedPacket::uncoded(std::uint64_t index, std::vector<FieldElement> payload,
                                 std::optional<std::uint32_t> generation)
{
  CodedPacket p;
  p.kind_ = PacketKind::uncoded;
  p.generation_ = generation;
  p.window_ = {index, index};
  p.explicit_ = CoeffVector::unit(index);
  p.payload_ = std::move(payload);
  return p;
}

CodedPacket CodedPacket::from_coefficients(CoeffVector coeffs, std::vector<FieldElement> payload,
                                           std::optional<std::uint32_t> generation)
{
  if (coeffs.coeffs.empty())
    throw ContractViolation("coded packet needs at least one coefficient");
  CodedPacket p;
  p.kind_ = PacketKind::coded;
  p.generation_ = generation;
  p.window_ = {coeffs.origin, coeffs.last()};
  p.explicit_ = std::move(coeffs);
  p.payload_ = std::move(payload);
  return p;
}

CodedPacket CodedPacket::from_seed(CodingWindow window, std::uint64_t seed, unsigned field_bits,
                                   std::vector<FieldElement> payload, std::optional<std::uint32_t> generation)
{
  if (window.size() == 0)
    throw ContractViolation("coded packet needs a non-empty window");
  CodedPacket p;
  p.kind_ = PacketKind::coded;
  p.generation_ = generation;
  p.window_ = window;
  p.seed_ = seed;
  p.bits_ = field_bits;
  p.payload_ = std::move(payload);
  return p;
}

FieldElement CodedPacket::coefficient(std::uint64_t index) const noexcept
{
  if (!window_.contains(index))
    return 0;
  if (seed_)
    return drawn_coefficient(*seed_, index, bits_);
  return explicit_.at_index(index);
}

CoeffVector CodedPacket::coefficients() const
{
  if (!seed_)
    return explicit_;
  CoeffVector v{window_.lo, std::vector<FieldElement>(window_.size())};
  for (std::uint64_t i = window_.lo; i <= window_.hi; ++i)
    v.coeffs[i - window_.lo] = drawn_coefficient(*seed_, i, bits_);
  return v;
}

std::vector<FieldElement> encode_payload(const GaloisField& field, const InfoSource& source, const CodedPacket& shape)
{
  std::vector<FieldElement> out(source.payload_bytes());
  if (out.empty())
    return out;
  const auto w = shape.window();
  for (std::uint64_t i = w.lo; i <= w.hi; ++i)
  {
    const auto c = shape.coefficient(i);
    if (c != 0)
      field.axpy(out, c, source.payload(i));
  }
  return out;
}

} // namespace ncsat
