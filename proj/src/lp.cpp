#include "robustflow/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "robustflow/kernels.hpp"

namespace robustflow {
namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kBlandAfterDegenerate = 50;
constexpr std::size_t kRefactorInterval = 64;
constexpr double kPivotTolerance = 1e-11;
constexpr double kFlushThreshold = 1e-13;

template <Scalar T>
void row_axpy(const T& a, std::span<const T> x, std::span<T> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void row_axpy(double a, std::span<const double> x, std::span<double> y) {
  kernels::axpy(a, x, y);
  kernels::flush_small(kFlushThreshold, y);
}

template <Scalar T>
void row_scale(const T& a, std::span<T> y) {
  for (auto& v : y) v *= a;
}

void row_scale(double a, std::span<double> y) { kernels::scale(a, y); }

template <Scalar T>
bool pivot_positive(const T& x) {
  if constexpr (NumericTraits<T>::exact) {
    return x > 0;
  } else {
    return x > kPivotTolerance;
  }
}

template <Scalar T>
void normalize(Column<T>& column) {
  auto& e = column.entries;
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::size_t, T>> merged;
  for (auto& entry : e) {
    if (!merged.empty() && merged.back().first == entry.first) {
      merged.back().second += entry.second;
    } else {
      merged.push_back(std::move(entry));
    }
  }
  std::erase_if(merged, [](const auto& entry) { return entry.second == 0; });
  e = std::move(merged);
}

template <Scalar T>
bool same_column(const Column<T>& a, const Column<T>& b) {
  return a.objective == b.objective && a.entries == b.entries;
}

}  // namespace

const char* to_string(LPStatus status) {
  switch (status) {
    case LPStatus::optimal:
      return "optimal";
    case LPStatus::infeasible:
      return "infeasible";
    case LPStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

template <Scalar T>
PackingSimplex<T>::PackingSimplex(std::vector<Extended<T>> row_bounds)
    : bounds_(std::move(row_bounds)), tableau_of_row_(bounds_.size(), npos) {
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    if (bounds_[i].is_finite() && bounds_[i].value() < 0) {
      throw std::invalid_argument("packing LP row bound must be nonnegative");
    }
    if (bounds_[i].is_finite()) {
      tableau_of_row_[i] = tableau_row_.size();
      tableau_row_.push_back(i);
    }
  }
  const auto m = rows();
  inverse_.assign(m * m, T(0));
  rhs_.resize(m);
  basic_.resize(m);
  is_basic_.assign(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    inverse_[i * m + i] = T(1);
    rhs_[i] = bounds_[tableau_row_[i]].value();
    basic_[i] = i;
  }
}

template <Scalar T>
std::size_t PackingSimplex<T>::add_column(Column<T> column) {
  normalize(column);
  for (const auto& [row, coef] : column.entries) {
    if (row >= bounds_.size()) throw std::out_of_range("column references unknown row");
  }
  columns_.push_back(std::move(column));
  is_basic_.push_back(false);
  return columns_.size() - 1;
}

template <Scalar T>
T PackingSimplex<T>::cost_of(VarId v) const {
  return v < rows() ? T(0) : columns_[v - rows()].objective;
}

template <Scalar T>
std::vector<T> PackingSimplex<T>::basis_prices() const {
  const auto m = rows();
  std::vector<T> y(m, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    T c = cost_of(basic_[i]);
    if (c == 0) continue;
    row_axpy(c, std::span<const T>(inverse_.data() + i * m, m), std::span<T>(y));
  }
  return y;
}

template <Scalar T>
std::vector<T> PackingSimplex<T>::entering_direction(VarId v) const {
  const auto m = rows();
  std::vector<T> alpha(m, T(0));
  if (v < m) {
    for (std::size_t i = 0; i < m; ++i) alpha[i] = inverse_[i * m + v];
    return alpha;
  }
  for (const auto& [row, coef] : columns_[v - m].entries) {
    const auto k = tableau_of_row_[row];
    if (k == npos) continue;
    for (std::size_t i = 0; i < m; ++i) alpha[i] += inverse_[i * m + k] * coef;
  }
  return alpha;
}

template <Scalar T>
T PackingSimplex<T>::reduced_cost(const Column<T>& column) const {
  const auto y = basis_prices();
  T d = column.objective;
  for (const auto& [row, coef] : column.entries) {
    const auto k = row < tableau_of_row_.size() ? tableau_of_row_[row] : npos;
    if (k != npos) d -= y[k] * coef;
  }
  return d;
}

template <Scalar T>
void PackingSimplex<T>::pivot(std::size_t r, VarId enter, const std::vector<T>& alpha) {
  const auto m = rows();
  std::span<T> pivot_row(inverse_.data() + r * m, m);
  const T inv = T(1) / alpha[r];
  row_scale(inv, pivot_row);
  rhs_[r] *= inv;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == r || alpha[i] == 0) continue;
    const T factor = -alpha[i];
    row_axpy(factor, std::span<const T>(pivot_row), std::span<T>(inverse_.data() + i * m, m));
    rhs_[i] += factor * rhs_[r];
    if constexpr (!NumericTraits<T>::exact) {
      if (rhs_[i] < 0 && rhs_[i] > -NumericTraits<T>::tolerance()) rhs_[i] = 0;
    }
  }
  is_basic_[basic_[r]] = false;
  is_basic_[enter] = true;
  basic_[r] = enter;
  ++pivots_;
  if constexpr (!NumericTraits<T>::exact) {
    if (++pivots_since_refactor_ >= kRefactorInterval) refactor();
  }
}

// Recomputes the basis inverse from scratch (float mode only) to shed the
// rounding accumulated by product-form updates.
template <Scalar T>
void PackingSimplex<T>::refactor() {
  pivots_since_refactor_ = 0;
  if constexpr (!NumericTraits<T>::exact) {
    const auto m = rows();
    std::vector<double> basis(m * m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const VarId v = basic_[k];
      if (v < m) {
        basis[v * m + k] = 1.0;
      } else {
        for (const auto& [row, coef] : columns_[v - m].entries) {
          const auto i = tableau_of_row_[row];
          if (i != npos) basis[i * m + k] = coef;
        }
      }
    }
    std::vector<double> inv(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t best = c;
      for (std::size_t i = c + 1; i < m; ++i) {
        if (std::fabs(basis[i * m + c]) > std::fabs(basis[best * m + c])) best = i;
      }
      if (std::fabs(basis[best * m + c]) < kPivotTolerance) return;  // keep old inverse
      if (best != c) {
        std::swap_ranges(basis.begin() + c * m, basis.begin() + (c + 1) * m, basis.begin() + best * m);
        std::swap_ranges(inv.begin() + c * m, inv.begin() + (c + 1) * m, inv.begin() + best * m);
      }
      const double s = 1.0 / basis[c * m + c];
      kernels::scale(s, std::span<double>(basis.data() + c * m, m));
      kernels::scale(s, std::span<double>(inv.data() + c * m, m));
      for (std::size_t i = 0; i < m; ++i) {
        if (i == c) continue;
        const double f = -basis[i * m + c];
        if (f == 0.0) continue;
        kernels::axpy(f, std::span<const double>(basis.data() + c * m, m),
                      std::span<double>(basis.data() + i * m, m));
        kernels::axpy(f, std::span<const double>(inv.data() + c * m, m),
                      std::span<double>(inv.data() + i * m, m));
      }
    }
    inverse_ = std::move(inv);
    for (std::size_t i = 0; i < m; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m; ++k) v += inverse_[i * m + k] * bounds_[tableau_row_[k]].value();
      rhs_[i] = std::max(v, 0.0);
    }
  }
}

template <Scalar T>
LPStatus PackingSimplex<T>::solve() {
  const auto m = rows();
  const auto tol = NumericTraits<T>::tolerance();
  std::size_t degenerate_streak = 0;

  while (true) {
    const auto y = basis_prices();
    const bool bland = NumericTraits<T>::exact || degenerate_streak >= kBlandAfterDegenerate;

    std::optional<VarId> enter;
    T best_d(0);
    const VarId var_count = m + columns_.size();
    for (VarId v = 0; v < var_count; ++v) {
      if (is_basic_[v]) continue;
      T d;
      if (v < m) {
        d = -y[v];
      } else {
        const auto& col = columns_[v - m];
        d = col.objective;
        for (const auto& [row, coef] : col.entries) {
          const auto k = tableau_of_row_[row];
          if (k != npos) d -= y[k] * coef;
        }
      }
      if (!(d > tol)) continue;
      if (bland) {
        enter = v;
        break;
      }
      if (!enter || d > best_d) {
        enter = v;
        best_d = d;
      }
    }
    if (!enter) return LPStatus::optimal;

    const auto alpha = entering_direction(*enter);
    std::size_t leave = npos;
    T best_ratio(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!pivot_positive(alpha[i])) continue;
      T ratio = rhs_[i] / alpha[i];
      if (leave == npos || ratio < best_ratio ||
          (ratio == best_ratio && basic_[i] < basic_[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == npos) return LPStatus::unbounded;

    degenerate_streak = is_positive(best_ratio) ? 0 : degenerate_streak + 1;
    pivot(leave, *enter, alpha);
  }
}

template <Scalar T>
std::vector<T> PackingSimplex<T>::primal() const {
  std::vector<T> x(columns_.size(), T(0));
  const auto m = rows();
  for (std::size_t i = 0; i < m; ++i) {
    if (basic_[i] >= m) x[basic_[i] - m] = rhs_[i];
  }
  return x;
}

template <Scalar T>
std::vector<T> PackingSimplex<T>::duals() const {
  const auto y = basis_prices();
  std::vector<T> out(bounds_.size(), T(0));
  for (std::size_t k = 0; k < rows(); ++k) {
    T v = y[k];
    if constexpr (!NumericTraits<T>::exact) {
      if (v < 0 && v > -NumericTraits<T>::tolerance()) v = 0;
    }
    out[tableau_row_[k]] = v;
  }
  return out;
}

template <Scalar T>
T PackingSimplex<T>::objective() const {
  T total(0);
  for (std::size_t i = 0; i < rows(); ++i) total += cost_of(basic_[i]) * rhs_[i];
  return total;
}

namespace {

template <Scalar T>
LPResult<T> collect(const PackingSimplex<T>& simplex, LPStatus status) {
  LPResult<T> result;
  result.status = status;
  result.columns = simplex.columns();
  result.pivots = simplex.pivots();
  if (status == LPStatus::optimal) {
    result.primal = simplex.primal();
    result.dual = simplex.duals();
    result.objective = simplex.objective();
  }
  return result;
}

}  // namespace

template <Scalar T>
LPResult<T> solve_explicit(const PackingLP<T>& lp) {
  PackingSimplex<T> simplex(lp.row_bounds);
  for (const auto& col : lp.columns) simplex.add_column(col);
  const auto status = simplex.solve();
  return collect(simplex, status);
}

template <Scalar T>
LPResult<T> column_generation(const Pricer<T>& pricer, std::vector<Column<T>> initial_columns,
                              std::vector<Extended<T>> row_bounds,
                              const ColumnGenerationOptions& options) {
  PackingSimplex<T> simplex(std::move(row_bounds));
  for (auto& col : initial_columns) simplex.add_column(std::move(col));

  std::size_t rounds = 0;
  while (true) {
    const auto status = simplex.solve();
    if (status != LPStatus::optimal) {
      auto result = collect(simplex, status);
      result.pricing_rounds = rounds;
      return result;
    }
    if (rounds >= options.max_rounds) {
      throw std::runtime_error("column generation exceeded its round limit");
    }
    ++rounds;
    auto offered = pricer(simplex.duals());
    if (!offered) break;
    normalize(*offered);
    const auto& cols = simplex.columns();
    const bool duplicate = std::any_of(cols.begin(), cols.end(),
                                       [&](const auto& c) { return same_column(c, *offered); });
    if (duplicate || !is_positive(simplex.reduced_cost(*offered))) break;
    simplex.add_column(std::move(*offered));
  }
  auto result = collect(simplex, LPStatus::optimal);
  result.pricing_rounds = rounds;
  return result;
}

template class PackingSimplex<double>;
template class PackingSimplex<Rational>;
template LPResult<double> solve_explicit(const PackingLP<double>&);
template LPResult<Rational> solve_explicit(const PackingLP<Rational>&);
template LPResult<double> column_generation(const Pricer<double>&, std::vector<Column<double>>,
                                            std::vector<Extended<double>>,
                                            const ColumnGenerationOptions&);
template LPResult<Rational> column_generation(const Pricer<Rational>&,
                                              std::vector<Column<Rational>>,
                                              std::vector<Extended<Rational>>,
                                              const ColumnGenerationOptions&);

}  // namespace robustflow
