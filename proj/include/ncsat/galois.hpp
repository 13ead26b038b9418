#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ncsat {

/// Element of GF(2^q), q <= 8, held in its polynomial-basis representation.
using FieldElement = std::uint8_t;

/// Table-driven arithmetic over GF(2^q) for q in {1, 4, 8}.
///
/// Reduction polynomials: x + 1 (q = 1), x^4 + x + 1 (q = 4) and
/// x^8 + x^4 + x^3 + x^2 + 1 (q = 8). Instances are built once and are
/// immutable afterwards, so a shared reference may be used from any thread.
class GaloisField
{
public:
  /// Shared instance for GF(2^bits). Throws std::domain_error for unsupported sizes.
  static const GaloisField& get(unsigned bits);

  static bool supported(unsigned bits) noexcept { return bits == 1 || bits == 4 || bits == 8; }

  unsigned bits() const noexcept { return bits_; }
  unsigned order() const noexcept { return 1u << bits_; }
  FieldElement max_element() const noexcept { return static_cast<FieldElement>(order() - 1); }
  std::uint32_t polynomial() const noexcept { return poly_; }

  static FieldElement add(FieldElement a, FieldElement b) noexcept { return a ^ b; }

  /// Product through the log/antilog tables.
  FieldElement mul(FieldElement a, FieldElement b) const noexcept
  {
    if (a == 0 || b == 0)
      return 0;
    return exp_[log_[a] + log_[b]];
  }

  /// Multiplicative inverse; throws std::domain_error for zero.
  FieldElement inv(FieldElement a) const;

  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

  /// y[i] += a * x[i] for i < x.size(). Requires y.size() >= x.size().
  void axpy(std::span<FieldElement> y, FieldElement a, std::span<const FieldElement> x) const noexcept;

  /// y[i] *= a.
  void scale(std::span<FieldElement> y, FieldElement a) const noexcept;

private:
  explicit GaloisField(unsigned bits);

  const FieldElement* product_row(FieldElement a) const noexcept
  {
    return &product_[static_cast<std::size_t>(a) << bits_];
  }

  unsigned bits_;
  std::uint32_t poly_;
  std::vector<FieldElement> exp_;      // doubled so log sums never wrap
  std::vector<std::uint16_t> log_;
  std::vector<FieldElement> inv_;
  std::vector<FieldElement> product_;  // full 2^q x 2^q table for vector kernels
};

/// Coefficients of a linear combination, indexed by information-packet index.
/// `coeffs[j]` is the coefficient of packet `origin + j`.
struct CoeffVector
{
  std::uint64_t origin = 1;
  std::vector<FieldElement> coeffs;

  std::size_t size() const noexcept { return coeffs.size(); }
  std::uint64_t last() const noexcept { return origin + coeffs.size() - 1; }

  FieldElement at_index(std::uint64_t index) const noexcept
  {
    if (index < origin || index >= origin + coeffs.size())
      return 0;
    return coeffs[index - origin];
  }

  static CoeffVector unit(std::uint64_t index) { return CoeffVector{index, {1}}; }

  bool is_zero() const noexcept;

  friend bool operator==(const CoeffVector&, const CoeffVector&) = default;
};

/// A coefficient row together with the payload symbols it encodes.
struct SymbolRow
{
  CoeffVector coeffs;
  std::vector<FieldElement> payload;
};

/// y <- y + a * x over coefficients and payload. Both rows must share origin,
/// coefficient length and payload length; throws ContractViolation otherwise.
void axpy(const GaloisField& field, SymbolRow& y, FieldElement a, const SymbolRow& x);

} // namespace ncsat
