#pragma once

// Reference implementations used only by tests. They share no code with the
// library: field products come from shift-and-add, elimination is textbook.

#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

inline unsigned polynomial(unsigned bits)
{
  switch (bits) {
  case 1: return 0x3;
  case 4: return 0x13;
  default: return 0x11D;
  }
}

/// Carry-less multiply, then reduce modulo the field polynomial.
inline std::uint8_t mul(unsigned a, unsigned b, unsigned bits)
{
  unsigned product = 0;
  for (unsigned i = 0; i < bits; ++i)
    if (b & (1u << i))
      product ^= a << i;
  const unsigned poly = polynomial(bits);
  for (int i = 2 * static_cast<int>(bits) - 2; i >= static_cast<int>(bits); --i)
    if (product & (1u << i))
      product ^= poly << (i - static_cast<int>(bits));
  return static_cast<std::uint8_t>(product);
}

inline std::uint8_t inv(unsigned a, unsigned bits)
{
  for (unsigned b = 1; b < (1u << bits); ++b)
    if (mul(a, b, bits) == 1)
      return static_cast<std::uint8_t>(b);
  return 0;
}

using Matrix = std::vector<std::vector<std::uint8_t>>;

/// Rank by forward Gauss-Jordan elimination.
inline std::size_t rank(Matrix m, unsigned bits)
{
  if (m.empty())
    return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0)
      ++p;
    if (p == m.size())
      continue;
    std::swap(m[r], m[p]);
    const auto iv = inv(m[r][c], bits);
    for (auto& x : m[r])
      x = mul(x, iv, bits);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (i != r && m[i][c] != 0) {
        const auto f = m[i][c];
        for (std::size_t j = 0; j < cols; ++j)
          m[i][j] ^= mul(f, m[r][j], bits);
      }
    ++r;
  }
  return r;
}

/// Columns whose unit vector lies in the row space of `rows`.
inline std::vector<bool> recoverable(const Matrix& rows, std::size_t cols, unsigned bits)
{
  const std::size_t base = rank(rows, bits);
  std::vector<bool> out(cols, false);
  for (std::size_t c = 0; c < cols; ++c) {
    Matrix ext = rows;
    ext.emplace_back(cols, 0);
    ext.back()[c] = 1;
    out[c] = rank(ext, bits) == base;
  }
  return out;
}

/// Length of the recoverable prefix: what in-order delivery may release.
inline std::size_t recoverable_prefix(const Matrix& rows, std::size_t cols, unsigned bits)
{
  const auto ok = recoverable(rows, cols, bits);
  std::size_t n = 0;
  while (n < cols && ok[n])
    ++n;
  return n;
}

} // namespace oracle
