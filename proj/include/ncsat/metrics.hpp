#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ncsat {

struct DelayStats
{
  double mean = 0.0;
  double variance = 0.0;  // unbiased, n - 1 divisor
  double stddev = 0.0;
};

/// Mean, unbiased variance and standard deviation. Throws std::domain_error on
/// an empty sample set; a single sample has zero variance.
DelayStats delay_stats(std::span<const double> samples_ms);

/// Information packets needed divided by packets (uncoded and coded) that
/// reached the sink. Throws std::domain_error when nothing was received.
double efficiency(std::uint64_t dof_needed, std::uint64_t sink_received);

/// Upper-layer packet erasure rate. Throws std::domain_error for total == 0
/// or erased > total.
double per(std::uint64_t erased, std::uint64_t total);

/// Mean of independent replications with a 95% Student-t half-width.
struct Estimate
{
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t n = 0;

  double lower() const noexcept { return mean - half_width; }
  double upper() const noexcept { return mean + half_width; }
};

/// Order-independent: the values are sorted before summation.
Estimate estimate(std::span<const double> replication_values);

/// Two-sided 95% Student-t quantile for `dof` degrees of freedom.
double t_quantile_95(std::size_t dof) noexcept;

/// Per-run figures that replication aggregation needs.
struct RunSummary
{
  std::uint64_t delay_count = 0;
  double delay_mean = 0.0;
  double delay_m2 = 0.0;  // sum of squared deviations from delay_mean
  double efficiency = 0.0;
  double per = 0.0;

  friend auto operator<=>(const RunSummary&, const RunSummary&) = default;
};

/// Aggregate of one sweep point across replications.
struct SweepPoint
{
  Estimate delay;          // across per-run mean delays
  double delay_variance = 0.0;  // pooled over every delivered packet
  double delay_stddev = 0.0;
  Estimate eta;
  Estimate per;
  std::size_t replications = 0;
};

/// Combines replications; the result does not depend on their order.
SweepPoint aggregate(std::span<const RunSummary> runs);

} // namespace ncsat
