#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ncsat/detail/echelon.hpp"
#include "ncsat/packet.hpp"

namespace ncsat {

/// Extra coded packets a source must add so that |P| degrees of freedom
/// survive every link: ceil(|P| * (prod_i 1/(1 - eps_i) - 1)).
/// Throws std::domain_error if any eps_i is outside [0, 1).
std::uint64_t e2e_redundancy_count(std::uint64_t packets, std::span<const double> eps);

/// Packets held by an intermediate node. The node tracks the rank of what it
/// holds but never solves for information packets; it only emits new random
/// combinations of its buffer, expressed in the original packet coordinates.
class RecodingBuffer
{
public:
  RecodingBuffer(const GaloisField& field, CodingWindow block, std::size_t payload_bytes = 0);

  /// Buffers the packet if it is innovative. Returns whether it was.
  bool add(const CodedPacket& packet);

  std::size_t rank() const noexcept { return known_count_ + echelon_.rank(); }
  bool empty() const noexcept { return held_.empty(); }
  const std::vector<CodedPacket>& held() const noexcept { return held_; }

  /// Fresh combination of every buffered packet with nonzero random weights;
  /// nullopt when the buffer is empty.
  std::optional<CodedPacket> recode(std::mt19937_64& rng) const;

private:
  const GaloisField* field_;
  CodingWindow block_;
  std::size_t payload_bytes_;
  std::vector<char> known_;          // unit rows absorbed before any column existed
  std::size_t known_count_ = 0;
  std::vector<std::uint64_t> columns_;
  detail::Echelon echelon_;
  std::vector<CodedPacket> held_;
};

enum class TandemStrategy { end_to_end, hop_by_hop };

std::string to_string(TandemStrategy s);

/// Source S -> R1 -> R2 -> destination D over three i.i.d. erasure links.
struct TandemConfig
{
  std::array<double, 3> link_erasure{0.1, 0.1, 0.1};
  std::uint64_t packets = 10000;
  TandemStrategy strategy = TandemStrategy::hop_by_hop;
  std::uint64_t seed = 1;
  std::uint64_t block_size = 1024;  // 0: the whole stream is one block
  unsigned field_bits = 8;
  std::size_t payload_bytes = 0;

  void validate() const;  // ConfigError
};

struct LinkReport
{
  int link = 0;                          // 1..3
  std::uint64_t packets_carried = 0;     // sent onto the link
  std::uint64_t packets_received = 0;    // survived the link
  std::uint64_t useful_dof_delivered = 0;// innovative at the receiving node
  double efficiency = 0.0;               // useful / received

  friend bool operator==(const LinkReport&, const LinkReport&) = default;
};

struct TandemReport
{
  std::vector<LinkReport> links;
  std::uint64_t extra_packets = 0;   // retries beyond the planned redundancy
  std::size_t sink_decodes = 0;      // back-substitution passes at D
  std::size_t blocks = 0;
  std::uint64_t delivered = 0;
  bool payloads_verified = true;
};

/// End-to-end: S adds all redundancy, relays forward what they receive, D
/// decodes. Hop-by-hop: each sender sizes redundancy to its own outgoing link
/// (relays forward their innovative packets, then recode). Shortfalls are
/// covered by extra packets from the sender upstream of the deficit.
TandemReport run_tandem(const TandemConfig& cfg);

} // namespace ncsat
