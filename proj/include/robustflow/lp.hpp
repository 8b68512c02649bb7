#pragma once

// Packing linear programs over path variables:
//
//   maximize    sum_j r_j x_j
//   subject to  sum_j a_ij x_j <= b_i   (b_i >= 0, possibly +inf)
//               x >= 0
//
// solved by a dense revised simplex that keeps an explicit basis inverse.
// The slack basis is always feasible, so no phase one is needed. Exact mode
// pivots with Bland's rule; float mode uses Dantzig's rule and falls back to
// Bland after a run of degenerate pivots.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "robustflow/network.hpp"

namespace robustflow {

template <Scalar T>
struct Column {
  std::vector<std::pair<std::size_t, T>> entries;  // (row, coefficient)
  T objective{0};
  Path label;  // caller tag, carried through untouched
};

template <Scalar T>
struct PackingLP {
  std::vector<Column<T>> columns;
  std::vector<Extended<T>> row_bounds;
};

enum class LPStatus { optimal, infeasible, unbounded };

const char* to_string(LPStatus status);

template <Scalar T>
struct LPResult {
  LPStatus status = LPStatus::optimal;
  std::vector<T> primal;  // one value per column of `columns`
  std::vector<T> dual;    // one value per row; zero for unbounded rows
  T objective{0};
  std::vector<Column<T>> columns;
  std::size_t pivots = 0;
  std::size_t pricing_rounds = 0;
};

template <Scalar T>
class PackingSimplex {
 public:
  explicit PackingSimplex(std::vector<Extended<T>> row_bounds);

  /// Appends a column; the current basis stays primal feasible.
  std::size_t add_column(Column<T> column);

  LPStatus solve();

  std::vector<T> primal() const;
  std::vector<T> duals() const;
  T objective() const;
  /// r_j - y^T a_j under the current basis.
  T reduced_cost(const Column<T>& column) const;

  const std::vector<Column<T>>& columns() const { return columns_; }
  std::size_t pivots() const { return pivots_; }

 private:
  using VarId = std::size_t;  // slacks are 0..m-1, column j is m + j

  std::size_t rows() const { return tableau_row_.size(); }
  T cost_of(VarId v) const;
  std::vector<T> basis_prices() const;
  std::vector<T> entering_direction(VarId v) const;
  void pivot(std::size_t leave_row, VarId enter, const std::vector<T>& direction);
  void refactor();

  std::vector<Extended<T>> bounds_;
  std::vector<std::size_t> tableau_of_row_;  // original row -> tableau row or npos
  std::vector<std::size_t> tableau_row_;     // tableau row -> original row
  std::vector<Column<T>> columns_;
  std::vector<T> inverse_;  // rows() x rows(), row-major
  std::vector<T> rhs_;
  std::vector<VarId> basic_;
  std::vector<bool> is_basic_;
  std::size_t pivots_ = 0;
  std::size_t pivots_since_refactor_ = 0;
};

/// Solves the LP with its explicit column set.
template <Scalar T>
LPResult<T> solve_explicit(const PackingLP<T>& lp);

/// Returns a column whose dual constraint the given duals violate, or none.
template <Scalar T>
using Pricer = std::function<std::optional<Column<T>>(const std::vector<T>& duals)>;

struct ColumnGenerationOptions {
  std::size_t max_rounds = 100000;
};

/// Restricted-master loop. Stops when the pricer has nothing to offer or
/// offers a column that is already present or not strictly improving, so
/// the returned duals are feasible for every column the pricer can produce.
template <Scalar T>
LPResult<T> column_generation(const Pricer<T>& pricer, std::vector<Column<T>> initial_columns,
                              std::vector<Extended<T>> row_bounds,
                              const ColumnGenerationOptions& options = {});

}  // namespace robustflow
