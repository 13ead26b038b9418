#include "ncsat/galois.hpp"

#include <algorithm>
#include <stdexcept>

#include "ncsat/errors.hpp"

namespace ncsat {

namespace {

std::uint32_t reduction_polynomial(unsigned bits)
{
  switch (bits)
  {
    case 1: return 0x3;
    case 4: return 0x13;
    case 8: return 0x11D;
    default: throw std::domain_error("unsupported field size 2^" + std::to_string(bits));
  }
}

} // namespace

const GaloisField& GaloisField::get(unsigned bits)
{
  static const GaloisField gf1{1};
  static const GaloisField gf4{4};
  static const GaloisField gf8{8};
  switch (bits)
  {
    case 1: return gf1;
    case 4: return gf4;
    case 8: return gf8;
    default: throw std::domain_error("unsupported field size 2^" + std::to_string(bits));
  }
}

GaloisField::GaloisField(unsigned bits)
  : bits_{bits}
  , poly_{reduction_polynomial(bits)}
{
  const unsigned n = order();
  const unsigned period = n - 1;
  exp_.assign(2 * period + 1, 0);
  log_.assign(n, 0);
  inv_.assign(n, 0);

  // x is primitive for every polynomial above; powers of x enumerate the group.
  std::uint32_t v = 1;
  for (unsigned i = 0; i < period; ++i)
  {
    exp_[i] = static_cast<FieldElement>(v);
    log_[v] = static_cast<std::uint16_t>(i);
    v <<= 1;
    if (v & n)
      v ^= poly_;
  }
  for (unsigned i = period; i < exp_.size(); ++i)
    exp_[i] = exp_[i - period];

  for (unsigned a = 1; a < n; ++a)
    inv_[a] = exp_[(period - log_[a]) % period];

  product_.assign(static_cast<std::size_t>(n) * n, 0);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      product_[(static_cast<std::size_t>(a) << bits_) | b] =
        mul(static_cast<FieldElement>(a), static_cast<FieldElement>(b));
}

FieldElement GaloisField::inv(FieldElement a) const
{
  if (a == 0)
    throw std::domain_error("zero has no multiplicative inverse");
  return inv_[a];
}

void GaloisField::axpy(std::span<FieldElement> y, FieldElement a, std::span<const FieldElement> x) const noexcept
{
  if (a == 0)
    return;
  const std::size_t n = std::min(y.size(), x.size());
  if (a == 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      y[i] ^= x[i];
    return;
  }
  const FieldElement* row = product_row(a);
  for (std::size_t i = 0; i < n; ++i)
    y[i] ^= row[x[i]];
}

void GaloisField::scale(std::span<FieldElement> y, FieldElement a) const noexcept
{
  if (a == 1)
    return;
  const FieldElement* row = product_row(a);
  for (auto& v : y)
    v = row[v];
}

bool CoeffVector::is_zero() const noexcept
{
  return std::all_of(coeffs.begin(), coeffs.end(), [](FieldElement c) { return c == 0; });
}

void axpy(const GaloisField& field, SymbolRow& y, FieldElement a, const SymbolRow& x)
{
  if (y.coeffs.origin != x.coeffs.origin || y.coeffs.size() != x.coeffs.size())
    throw ContractViolation("axpy: coefficient vectors are not aligned");
  if (y.payload.size() != x.payload.size())
    throw ContractViolation("axpy: payload length mismatch");
  field.axpy(y.coeffs.coeffs, a, x.coeffs.coeffs);
  field.axpy(y.payload, a, x.payload);
}

} // namespace ncsat
