#include "ncsat/channel.hpp"

#include <stdexcept>
#include <string>

namespace ncsat {

GilbertParams derive_params(double pi_b, double mean_burst)
{
  if (!(pi_b > 0.0 && pi_b < 1.0))
    throw std::domain_error("pi_B must lie in (0, 1), got " + std::to_string(pi_b));
  if (!(mean_burst >= 1.0))
    throw std::domain_error("mean burst length must be >= 1, got " + std::to_string(mean_burst));
  GilbertParams p;
  p.beta = 1.0 / mean_burst;
  p.gamma = p.beta * pi_b / (1.0 - pi_b);
  if (p.gamma > 1.0)
    throw std::domain_error("pi_B and E[L] imply gamma > 1");
  return p;
}

double steady_state(const GilbertParams& params)
{
  if (params.gamma + params.beta <= 0.0)
    throw std::domain_error("degenerate chain: gamma = beta = 0");
  return params.gamma / (params.gamma + params.beta);
}

void validate(const GilbertParams& params)
{
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0))
    throw std::domain_error("gamma must lie in [0, 1]");
  if (!(params.beta > 0.0 && params.beta <= 1.0))
    throw std::domain_error("beta must lie in (0, 1]");
}

GilbertChannel::GilbertChannel(GilbertParams params, std::uint64_t seed)
  : params_{params}
  , rng_{seed}
{
  validate(params_);
  state_ = unit_(rng_) < steady_state(params_) ? ChannelCondition::bad : ChannelCondition::good;
}

GilbertChannel::GilbertChannel(GilbertParams params, std::uint64_t seed, ChannelCondition initial)
  : params_{params}
  , rng_{seed}
  , state_{initial}
{
  validate(params_);
}

bool GilbertChannel::step()
{
  const double u = unit_(rng_);
  if (state_ == ChannelCondition::good)
  {
    if (u < params_.gamma)
      state_ = ChannelCondition::bad;
  }
  else if (u < params_.beta)
  {
    state_ = ChannelCondition::good;
  }
  return state_ == ChannelCondition::bad;
}

} // namespace ncsat
