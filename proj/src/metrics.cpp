#include "ncsat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncsat {

DelayStats delay_stats(std::span<const double> samples_ms)
{
  if (samples_ms.empty())
    throw std::domain_error("delay statistics need at least one sample");
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : samples_ms)
  {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  DelayStats s;
  s.mean = mean;
  s.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  s.stddev = std::sqrt(s.variance);
  return s;
}

double efficiency(std::uint64_t dof_needed, std::uint64_t sink_received)
{
  if (sink_received == 0)
    throw std::domain_error("efficiency undefined: sink received no packets");
  return static_cast<double>(dof_needed) / static_cast<double>(sink_received);
}

double per(std::uint64_t erased, std::uint64_t total)
{
  if (total == 0)
    throw std::domain_error("PER undefined for an empty stream");
  if (erased > total)
    throw std::domain_error("more erasures than packets");
  return static_cast<double>(erased) / static_cast<double>(total);
}

double t_quantile_95(std::size_t dof) noexcept
{
  static constexpr double table[] = {
    0.0,   12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201, 2.179,  2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080, 2.074,  2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof == 0)
    return 0.0;
  if (dof < std::size(table))
    return table[dof];
  if (dof < 60)
    return 2.000;
  if (dof < 120)
    return 1.980;
  return 1.960;
}

Estimate estimate(std::span<const double> replication_values)
{
  Estimate e;
  e.n = replication_values.size();
  if (e.n == 0)
    return e;
  std::vector<double> v(replication_values.begin(), replication_values.end());
  std::sort(v.begin(), v.end());
  const auto s = delay_stats(v);
  e.mean = s.mean;
  e.half_width = e.n > 1 ? t_quantile_95(e.n - 1) * s.stddev / std::sqrt(static_cast<double>(e.n)) : 0.0;
  return e;
}

SweepPoint aggregate(std::span<const RunSummary> runs)
{
  SweepPoint p;
  p.replications = runs.size();
  if (runs.empty())
    return p;

  std::vector<RunSummary> sorted(runs.begin(), runs.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> means, etas, pers;
  double n = 0.0, mean = 0.0, m2 = 0.0;
  for (const auto& r : sorted)
  {
    etas.push_back(r.efficiency);
    pers.push_back(r.per);
    if (r.delay_count == 0)
      continue;
    means.push_back(r.delay_mean);
    // Chan et al. pairwise merge
    const double nb = static_cast<double>(r.delay_count);
    const double delta = r.delay_mean - mean;
    const double total = n + nb;
    mean += delta * nb / total;
    m2 += r.delay_m2 + delta * delta * n * nb / total;
    n = total;
  }
  p.delay = estimate(means);
  p.delay_variance = n > 1 ? m2 / (n - 1) : 0.0;
  p.delay_stddev = std::sqrt(p.delay_variance);
  p.eta = estimate(etas);
  p.per = estimate(pers);
  return p;
}

} // namespace ncsat
