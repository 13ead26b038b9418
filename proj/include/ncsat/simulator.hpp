#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ncsat/decoder.hpp"
#include "ncsat/encoder.hpp"
#include "ncsat/metrics.hpp"
#include "ncsat/redundancy.hpp"

namespace ncsat {

enum class Scheme { generation, sliding_window, arq };
enum class Mode { reliable, unreliable };

std::string to_string(Scheme s);
std::string to_string(Mode m);
Scheme parse_scheme(const std::string& text);  // ConfigError("scheme")
Mode parse_mode(const std::string& text);      // ConfigError("mode")

/// One simulated single-link transfer.
struct SimConfig
{
  Scheme scheme = Scheme::generation;
  Mode mode = Mode::reliable;
  Redundancy redundancy{5, 4};
  std::uint32_t generation_size = 16;
  std::uint64_t stream_length = 100000;
  double slot_ms = 1.2;
  double rtt_ms = 200.0;
  double loss_rate = 0.05;   // steady-state bad-state probability pi_B
  double mean_burst = 1.0;   // E[L]
  unsigned field_bits = 8;
  std::uint64_t seed = 1;
  std::uint32_t replications = 1;
  std::size_t payload_bytes = 0;  // > 0 carries and checks real payload symbols
  std::uint64_t max_slots = 0;    // 0 picks a bound from the configuration

  double propagation_ms() const noexcept { return rtt_ms / 2.0; }

  /// Slots between a transmission and the source hearing about it.
  std::uint64_t feedback_slots() const noexcept;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

struct DelaySample
{
  std::uint64_t index;
  std::uint64_t first_tx_slot;
  std::uint64_t delivery_slot;
  double delay_ms;

  friend bool operator==(const DelaySample&, const DelaySample&) = default;
};

struct RunMetrics
{
  std::vector<DelaySample> delay_samples;
  std::uint64_t dof_needed = 0;
  std::uint64_t delivered_count = 0;
  std::uint64_t erased_count = 0;
  std::uint64_t sink_received_count = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t retransmission_count = 0;
  std::uint64_t duration_slots = 0;
  bool payloads_verified = true;  // meaningful when payload_bytes > 0
  std::vector<std::uint32_t> uncoded_transmissions;  // by packet index, [0] unused
  std::vector<std::uint32_t> uncoded_erasures;

  double efficiency() const { return ncsat::efficiency(dof_needed, sink_received_count); }
  double per() const { return ncsat::per(erased_count, dof_needed); }
  DelayStats delay() const;
  RunSummary summary() const;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// Erasure decision per slot, replacing the Gilbert channel (scripted replays).
using LossPattern = std::function<bool(std::uint64_t slot)>;

/// Runs one seeded transfer: one transmission opportunity per slot, erasures
/// from the Gilbert channel, delivery delay (delivery_slot - first_tx_slot) * t_s + t_p.
/// Reliable runs end when every packet is delivered; unreliable runs end after
/// the last scheduled transmission. Deterministic for a given configuration.
RunMetrics run_simulation(const SimConfig& cfg);
RunMetrics run_simulation(const SimConfig& cfg, const LossPattern& losses);

/// Idealized selective-repeat ARQ: each loss is known at the source exactly
/// one RTT after the lost transmission and resent in the next slot, ahead of
/// new packets. Requires scheme == arq and reliable mode.
RunMetrics arq_baseline(const SimConfig& cfg, const LossPattern& losses = {});

/// Unreliable stream: generations are flushed after their last scheduled
/// packet and never repaired; the sliding window runs unchanged and whatever
/// is undelivered at the end of the session counts as erased.
RunMetrics unreliable_session(const SimConfig& cfg, const LossPattern& losses = {});

/// Sink-side per-generation report: remaining degrees of freedom after a round.
GenerationFeedback generation_feedback(const GenerationDecoder& decoder, std::uint32_t generation, std::uint32_t round);

/// Sub-seed for an independent random stream of one run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

} // namespace ncsat
