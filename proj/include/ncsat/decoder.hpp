#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <vector>

#include "ncsat/detail/echelon.hpp"
#include "ncsat/packet.hpp"

namespace ncsat {

struct DeliveryEvent
{
  std::uint64_t packet_index;
  std::uint64_t delivery_slot;

  friend bool operator==(const DeliveryEvent&, const DeliveryEvent&) = default;
};

/// Receiver-side RLNC decoder with in-order delivery tracking.
///
/// Incoming rows are reduced by every packet already known at the sink
/// (delivered, received uncoded or solved) so the active matrix only spans
/// the lost packets that are still outstanding. Whenever the lowest
/// outstanding packets become solvable they are back-substituted and released
/// in index order. Deliveries caused by a packet are stamped with its slot.
class Decoder
{
public:
  struct Flush
  {
    std::vector<DeliveryEvent> delivered;
    std::vector<std::uint64_t> erased;
  };

  /// With `eager` off, back-substitution waits until every outstanding
  /// unknown is solvable (one pass per block, for block decoding).
  explicit Decoder(const GaloisField& field, std::size_t payload_bytes = 0, bool eager = true);

  std::vector<DeliveryEvent> ingest(const CodedPacket& packet, std::uint64_t slot);

  /// Gives up on every unresolved index <= hi: those become erasures, and
  /// whatever is known above them is released in order.
  Flush abandon_through(std::uint64_t hi, std::uint64_t slot);

  /// Highest index delivered or abandoned in order.
  std::uint64_t delivered_through() const noexcept { return next_ - 1; }
  std::uint64_t delivered_count() const noexcept { return delivered_; }

  /// Independent rows held in the active matrix.
  std::size_t rank() const noexcept { return echelon_.rank(); }
  std::size_t outstanding_unknowns() const noexcept { return columns_.size(); }

  /// Degrees of freedom held for the packets in `w`: known packets plus active
  /// rows pivoted in w. Exact when coded rows never straddle w's boundary.
  std::size_t dof_in(CodingWindow w) const;

  /// Number of back-substitution passes performed.
  std::size_t solve_count() const noexcept { return solves_; }

  /// Payload recovered for `index`, or nullptr if unknown (or payloads are off).
  const std::vector<FieldElement>* recovered_payload(std::uint64_t index) const noexcept;

private:
  enum class State : std::uint8_t { unseen, known, column, erased };

  State state(std::uint64_t index) const noexcept;
  void ensure_tracked(std::uint64_t index);
  void remember(std::uint64_t index, std::vector<FieldElement> payload);
  std::size_t ordinal(std::uint64_t index) const noexcept;
  void solve();
  void advance(std::uint64_t slot, std::vector<DeliveryEvent>& out);

  const GaloisField* field_;
  std::size_t payload_bytes_;
  bool eager_;
  detail::Echelon echelon_;
  std::uint64_t next_ = 1;                  // lowest index not yet released
  std::deque<State> states_;                // states_[i] describes index next_ + i
  std::deque<std::uint64_t> columns_;       // column ordinal -> packet index, ascending
  std::uint64_t columnized_through_ = 0;
  std::set<std::uint64_t> erased_;
  std::vector<std::vector<FieldElement>> payloads_;
  std::uint64_t delivered_ = 0;
  std::size_t solves_ = 0;
};

/// Partition of a stream into generations G_j = [(j-1)k + 1, min(jk, |P|)], j >= 1.
struct GenerationLayout
{
  std::uint64_t stream_length;
  std::uint32_t k;

  std::uint32_t count() const noexcept
  {
    return static_cast<std::uint32_t>((stream_length + k - 1) / k);
  }
  CodingWindow window(std::uint32_t generation) const noexcept
  {
    const std::uint64_t lo = static_cast<std::uint64_t>(generation - 1) * k + 1;
    return {lo, std::min<std::uint64_t>(static_cast<std::uint64_t>(generation) * k, stream_length)};
  }
  std::uint32_t generation_of(std::uint64_t index) const noexcept
  {
    return static_cast<std::uint32_t>((index - 1) / k + 1);
  }
};

/// Decoder for the generation-based scheme: coded rows are confined to one
/// generation, so each generation's rank is tracked independently.
class GenerationDecoder
{
public:
  GenerationDecoder(const GaloisField& field, GenerationLayout layout, std::size_t payload_bytes = 0);

  /// Throws ContractViolation if a coded packet spans outside its generation.
  std::vector<DeliveryEvent> ingest(const CodedPacket& packet, std::uint64_t slot);

  std::size_t dof(std::uint32_t generation) const;
  std::size_t deficit(std::uint32_t generation) const;
  bool decodable(std::uint32_t generation) const { return deficit(generation) == 0; }

  /// Closes a generation in unreliable mode: a decodable generation is fully
  /// delivered; otherwise only its known packets are delivered and the rest
  /// reported erased. Generations must be flushed once each, in order.
  Decoder::Flush flush_generation(std::uint32_t generation, std::uint64_t slot);

  const Decoder& core() const noexcept { return core_; }
  const GenerationLayout& layout() const noexcept { return layout_; }

private:
  Decoder core_;
  GenerationLayout layout_;
  std::uint32_t flushed_through_ = 0;
};

} // namespace ncsat
