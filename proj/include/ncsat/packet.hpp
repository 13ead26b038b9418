#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncsat/galois.hpp"

namespace ncsat {

/// Inclusive range of information-packet indices [lo, hi] a packet is coded over.
struct CodingWindow
{
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;

  std::uint64_t size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(std::uint64_t i) const noexcept { return lo <= i && i <= hi; }

  friend bool operator==(const CodingWindow&, const CodingWindow&) = default;
};

enum class PacketKind { uncoded, coded };

/// Uniform coefficient in GF(2^bits) for information packet `index` of the
/// combination identified by `seed`. Pure function of its arguments.
FieldElement drawn_coefficient(std::uint64_t seed, std::uint64_t index, unsigned bits) noexcept;

/// Deterministic payload generator for the information packets of a stream.
class InfoSource
{
public:
  InfoSource(std::uint64_t stream_length, std::size_t payload_bytes, unsigned field_bits, std::uint64_t seed);

  std::uint64_t size() const noexcept { return length_; }
  std::size_t payload_bytes() const noexcept { return payload_bytes_; }
  unsigned field_bits() const noexcept { return bits_; }

  /// Payload symbols of packet `index` (1-based); empty when payload_bytes is 0.
  std::vector<FieldElement> payload(std::uint64_t index) const;

private:
  std::uint64_t length_;
  std::size_t payload_bytes_;
  unsigned bits_;
  std::uint64_t seed_;
};

/// The unit crossing a link: a linear combination of information packets
/// plus its encoded payload.
///
/// Coefficients are either stored explicitly or drawn on demand from a
/// per-packet seed. The second form lets a sliding-window packet that spans
/// the whole stream be consumed in time proportional to the columns the
/// receiver still needs, instead of the full window width.
class CodedPacket
{
public:
  static CodedPacket uncoded(std::uint64_t index, std::vector<FieldElement> payload = {},
                             std::optional<std::uint32_t> generation = std::nullopt);

  static CodedPacket from_coefficients(CoeffVector coeffs, std::vector<FieldElement> payload = {},
                                       std::optional<std::uint32_t> generation = std::nullopt);

  static CodedPacket from_seed(CodingWindow window, std::uint64_t seed, unsigned field_bits,
                               std::vector<FieldElement> payload = {},
                               std::optional<std::uint32_t> generation = std::nullopt);

  PacketKind kind() const noexcept { return kind_; }
  bool is_uncoded() const noexcept { return kind_ == PacketKind::uncoded; }
  std::optional<std::uint32_t> generation() const noexcept { return generation_; }
  CodingWindow window() const noexcept { return window_; }

  /// Index of an uncoded packet (window.lo).
  std::uint64_t index() const noexcept { return window_.lo; }

  /// Coefficient of information packet `index`; zero outside the window.
  FieldElement coefficient(std::uint64_t index) const noexcept;

  /// Explicit coefficient vector over the whole window.
  CoeffVector coefficients() const;

  const std::vector<FieldElement>& payload() const noexcept { return payload_; }

private:
  CodedPacket() = default;

  PacketKind kind_ = PacketKind::uncoded;
  std::optional<std::uint32_t> generation_;
  CodingWindow window_;
  CoeffVector explicit_;
  std::optional<std::uint64_t> seed_;
  unsigned bits_ = 8;
  std::vector<FieldElement> payload_;
};

/// Payload of sum_i coefficient(i) * p_i over `window`, computed from `source`.
std::vector<FieldElement> encode_payload(const GaloisField& field, const InfoSource& source,
                                         const CodedPacket& shape);

} // namespace ncsat
