#include "ncsat/detail/echelon.hpp"

#include "ncsat/errors.hpp"

namespace ncsat::detail {

bool Echelon::insert(std::vector<FieldElement> coeffs, std::vector<FieldElement> payload)
{
  if (coeffs.size() > pivots_.size())
    throw ContractViolation("echelon row is wider than the column set");
  trim(coeffs);
  while (!coeffs.empty())
  {
    const std::size_t p = coeffs.size() - 1;
    auto& slot = pivots_[p];
    if (!slot)
    {
      const FieldElement lead = coeffs[p];
      if (lead != 1)
      {
        const FieldElement s = field_->inv(lead);
        field_->scale(coeffs, s);
        field_->scale(payload, s);
      }
      slot = Row{std::move(coeffs), std::move(payload)};
      ++rank_;
      return true;
    }
    const FieldElement f = coeffs[p];
    field_->axpy(coeffs, f, slot->coeffs);
    if (payload.size() < slot->payload.size())
      payload.resize(slot->payload.size(), 0);
    field_->axpy(payload, f, slot->payload);
    trim(coeffs);
  }
  return false;
}

std::size_t Echelon::leading_pivots() const noexcept
{
  std::size_t m = 0;
  while (m < pivots_.size() && pivots_[m])
    ++m;
  return m;
}

std::vector<std::vector<FieldElement>> Echelon::solve_front(std::size_t m)
{
  if (leading_pivots() < m)
    throw ContractViolation("solve_front: leading columns are not all pivoted");

  std::vector<std::vector<FieldElement>> values(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    Row& row = *pivots_[j];
    for (std::size_t l = 0; l < j; ++l)
    {
      const FieldElement c = row.coeffs[l];
      if (c == 0)
        continue;
      if (row.payload.size() < values[l].size())
        row.payload.resize(values[l].size(), 0);
      field_->axpy(row.payload, c, values[l]);
    }
    values[j] = std::move(row.payload);
  }

  for (std::size_t j = 0; j < m; ++j)
    pivots_.pop_front();
  rank_ -= m;

  for (auto& slot : pivots_)
  {
    if (!slot)
      continue;
    auto& c = slot->coeffs;
    const std::size_t head = std::min(m, c.size());
    for (std::size_t l = 0; l < head; ++l)
    {
      if (c[l] == 0)
        continue;
      if (slot->payload.size() < values[l].size())
        slot->payload.resize(values[l].size(), 0);
      field_->axpy(slot->payload, c[l], values[l]);
    }
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(head));
  }
  return values;
}

void Echelon::drop_front(std::size_t m)
{
  m = std::min(m, pivots_.size());
  for (std::size_t j = 0; j < m; ++j)
  {
    if (pivots_.front())
      --rank_;
    pivots_.pop_front();
  }
  for (auto& slot : pivots_)
  {
    if (!slot)
      continue;
    auto& c = slot->coeffs;
    const std::size_t head = std::min(m, c.size());
    bool touches = false;
    for (std::size_t l = 0; l < head; ++l)
      touches = touches || c[l] != 0;
    if (touches)
    {
      slot.reset();
      --rank_;
      continue;
    }
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(head));
  }
}

} // namespace ncsat::detail
