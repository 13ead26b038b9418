#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ncsat {

/// Redundancy factor R >= 1 (transmitted packets per information packet),
/// held as an exact fraction so packet-count arithmetic never drifts.
class Redundancy
{
public:
  Redundancy() = default;

  /// Throws ConfigError("R", ...) unless num / den >= 1.
  Redundancy(std::uint64_t num, std::uint64_t den);

  /// Parses "1.25", "5/4" or "2".
  static Redundancy parse(std::string_view text);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_one() const noexcept { return num_ == den_; }

  /// ceil(k * (R - 1)): coded packets per generation of size k.
  std::uint64_t coded_per_generation(std::uint64_t k) const noexcept;

  /// Uncoded packets between coded insertions, R / (R - 1). Zero-redundancy yields +inf.
  double spacing() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Redundancy&, const Redundancy&) = default;
  friend auto operator<=>(const Redundancy& a, const Redundancy& b) noexcept
  {
    return static_cast<unsigned __int128>(a.num_) * b.den_ <=> static_cast<unsigned __int128>(b.num_) * a.den_;
  }

private:
  std::uint64_t num_ = 1;
  std::uint64_t den_ = 1;
};

} // namespace ncsat
