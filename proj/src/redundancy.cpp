#include "ncsat/redundancy.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <numeric>

#include "ncsat/errors.hpp"

namespace ncsat {

namespace {

std::uint64_t parse_uint(std::string_view s)
{
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("R", "not a number: '" + std::string(s) + "'");
  return v;
}

} // namespace

Redundancy::Redundancy(std::uint64_t num, std::uint64_t den)
{
  if (den == 0)
    throw ConfigError("R", "zero denominator");
  if (num < den)
    throw ConfigError("R", "redundancy must be >= 1");
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Redundancy Redundancy::parse(std::string_view text)
{
  while (!text.empty() && text.front() == ' ')
    text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ')
    text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Redundancy(parse_uint(text.substr(0, slash)), parse_uint(text.substr(slash + 1)));

  auto dot = text.find('.');
  if (dot == std::string_view::npos)
    return Redundancy(parse_uint(text), 1);
  auto whole = text.substr(0, dot);
  auto frac = text.substr(dot + 1);
  if (frac.size() > 12)
    throw ConfigError("R", "too many decimal places: '" + std::string(text) + "'");
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i)
    den *= 10;
  const std::uint64_t w = whole.empty() ? 0 : parse_uint(whole);
  const std::uint64_t f = frac.empty() ? 0 : parse_uint(frac);
  return Redundancy(w * den + f, den);
}

std::uint64_t Redundancy::coded_per_generation(std::uint64_t k) const noexcept
{
  const auto extra = static_cast<unsigned __int128>(k) * (num_ - den_);
  return static_cast<std::uint64_t>((extra + den_ - 1) / den_);
}

double Redundancy::spacing() const noexcept
{
  if (is_one())
    return std::numeric_limits<double>::infinity();
  return static_cast<double>(num_) / static_cast<double>(num_ - den_);
}

std::string Redundancy::to_string() const
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value());
  return buf;
}

} // namespace ncsat
