#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "ncsat/galois.hpp"

namespace ncsat::detail {

/// Incremental Gaussian elimination over a growing set of unknown columns.
///
/// Rows are stored by their highest nonzero column ("trailing pivot"): the row
/// kept at pivot p has support in [0, p] with coefficient 1 at p. Consequently
/// the leading columns 0..m-1 are solvable exactly when each has a pivot, which
/// is the condition for in-order delivery.
///
/// Columns are ordinals relative to the current front; solving or dropping the
/// front renumbers the remaining columns.
class Echelon
{
public:
  explicit Echelon(const GaloisField& field)
    : field_{&field}
  {}

  std::size_t columns() const noexcept { return pivots_.size(); }
  std::size_t rank() const noexcept { return rank_; }
  bool has_pivot(std::size_t col) const noexcept { return col < pivots_.size() && pivots_[col].has_value(); }

  void add_columns(std::size_t n) { pivots_.resize(pivots_.size() + n); }

  /// Eliminates the row against the stored pivots; keeps it if innovative.
  /// `coeffs.size()` must not exceed columns(). Returns true when rank grew.
  bool insert(std::vector<FieldElement> coeffs, std::vector<FieldElement> payload);

  /// Number of consecutive pivoted columns starting at column 0.
  std::size_t leading_pivots() const noexcept;

  /// Back-substitutes the first m columns (all pivoted), removes them and
  /// folds their values into the remaining rows. Returns the m payloads.
  std::vector<std::vector<FieldElement>> solve_front(std::size_t m);

  /// Removes the first m columns without solving them. Rows pivoted there,
  /// and rows that still depend on them, are discarded.
  void drop_front(std::size_t m);

private:
  struct Row
  {
    std::vector<FieldElement> coeffs;
    std::vector<FieldElement> payload;
  };

  static void trim(std::vector<FieldElement>& v) noexcept
  {
    while (!v.empty() && v.back() == 0)
      v.pop_back();
  }

  const GaloisField* field_;
  std::deque<std::optional<Row>> pivots_;
  std::size_t rank_ = 0;
};

} // namespace ncsat::detail
