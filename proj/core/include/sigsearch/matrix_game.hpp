#pragma once

#include <cstddef>
#include <vector>

namespace sigsearch {

/// Dense row-major payoff matrix of a zero-sum game.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  PayoffMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_mix;  ///< maximizing player
  std::vector<double> col_mix;  ///< minimizing player
  /// max of the duality gap, simplex-sum errors and negative weights.
  double max_residual = 0.0;
  std::size_t pivots = 0;
};

/// Solves the zero-sum game where the row player maximizes and the column
/// player minimizes, via a dense primal simplex (Bland's rule) on
///   max sum(u)  s.t.  (A - min(A) + 1) u <= 1,  u >= 0.
/// Throws std::invalid_argument for empty or non-finite matrices.
MatrixGameSolution solve_matrix_game(const PayoffMatrix& payoffs);

/// Guaranteed payoffs of fixed mixes: min_j (x^T A)_j and max_i (A y)_i.
double row_guarantee(const PayoffMatrix& payoffs, const std::vector<double>& row_mix);
double col_guarantee(const PayoffMatrix& payoffs, const std::vector<double>& col_mix);

}  // namespace sigsearch
