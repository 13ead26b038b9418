#pragma once

#include <cstdint>
#include <random>

namespace ncsat {

/// Two-state Gilbert erasure channel parameters: gamma = P(good -> bad),
/// beta = P(bad -> good). The good state never erases, the bad state always does.
struct GilbertParams
{
  double gamma = 0.0;
  double beta = 1.0;
};

/// Parameters from the steady-state loss rate pi_B = gamma / (gamma + beta)
/// and mean burst length E[L] = 1 / beta. Throws std::domain_error unless
/// 0 < pi_B < 1, E[L] >= 1 and the implied gamma is a probability.
GilbertParams derive_params(double pi_b, double mean_burst);

/// gamma / (gamma + beta). Throws std::domain_error when both are zero.
double steady_state(const GilbertParams& params);

/// Throws std::domain_error unless 0 <= gamma <= 1 and 0 < beta <= 1.
void validate(const GilbertParams& params);

enum class ChannelCondition { good, bad };

class GilbertChannel
{
public:
  /// Initial state drawn from the steady-state distribution.
  GilbertChannel(GilbertParams params, std::uint64_t seed);
  GilbertChannel(GilbertParams params, std::uint64_t seed, ChannelCondition initial);

  /// Advances the chain by one slot and reports whether that slot erases.
  bool step();

  ChannelCondition condition() const noexcept { return state_; }
  const GilbertParams& params() const noexcept { return params_; }

private:
  GilbertParams params_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  ChannelCondition state_ = ChannelCondition::good;
};

} // namespace ncsat
