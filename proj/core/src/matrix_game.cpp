#include "sigsearch/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sigsearch {

namespace {

constexpr double kPivotEps = 1e-12;

std::vector<double> cleaned(std::vector<double> mix) {
  for (auto& w : mix) w = std::max(w, 0.0);
  const double s = std::accumulate(mix.begin(), mix.end(), 0.0);
  if (s > 0.0) {
    for (auto& w : mix) w /= s;
  }
  return mix;
}

}  // namespace

MatrixGameSolution solve_matrix_game(const PayoffMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("solve_matrix_game: empty payoff matrix");

  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(a(i, j))) throw std::invalid_argument("solve_matrix_game: non-finite payoff");
      lo = std::min(lo, a(i, j));
    }
  }
  const double shift = 1.0 - lo;

  // Tableau rows 0..m-1 are constraints, row m the objective. Columns 0..n-1
  // are u, n..n+m-1 slacks, n+m the right-hand side.
  const std::size_t width = n + m + 1;
  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = a(i, j) + shift;
    at(i, n + i) = 1.0;
    at(i, n + m) = 1.0;
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -1.0;

  MatrixGameSolution out;
  const std::size_t max_pivots = 50 * (n + m) + 1000;
  // Dantzig pricing; after a run of degenerate pivots switch to Bland's rule,
  // which cannot cycle, until the objective moves again.
  const std::size_t degenerate_limit = 2 * m + 10;
  std::size_t degenerate_run = 0;
  while (true) {
    const bool bland = degenerate_run >= degenerate_limit;
    std::size_t enter = width;
    double most_negative = -kPivotEps;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (at(m, j) < most_negative) {
        enter = j;
        if (bland) break;
        most_negative = at(m, j);
      }
    }
    if (enter == width) break;

    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (at(i, enter) > kPivotEps) best_ratio = std::min(best_ratio, at(i, n + m) / at(i, enter));
    }
    // Unbounded is impossible: every column of the shifted matrix is >= 1.
    if (!std::isfinite(best_ratio)) throw std::logic_error("solve_matrix_game: unbounded LP");

    // Among (near-)minimal ratios: smallest basic index under Bland, else the
    // largest pivot element for stability.
    const double tie = best_ratio + kPivotEps * std::max(1.0, best_ratio);
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (at(i, enter) <= kPivotEps || at(i, n + m) / at(i, enter) > tie) continue;
      if (leave == m) {
        leave = i;
      } else if (bland ? basis[i] < basis[leave] : at(i, enter) > at(leave, enter)) {
        leave = i;
      }
    }

    const double before = at(m, n + m);
    const double piv = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
      at(r, enter) = 0.0;
      if (r < m) at(r, n + m) = std::max(at(r, n + m), 0.0);
    }
    basis[leave] = enter;
    degenerate_run = at(m, n + m) > before + kPivotEps * std::max(1.0, before) ? 0 : degenerate_run + 1;
    if (++out.pivots > max_pivots) throw std::runtime_error("solve_matrix_game: pivot limit exceeded");
  }

  const double total = at(m, n + m);
  if (!(total > 0.0)) throw std::logic_error("solve_matrix_game: degenerate optimum");
  const double shifted_value = 1.0 / total;

  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) y[basis[i]] = at(i, n + m) * shifted_value;
  }
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = at(m, n + i) * shifted_value;

  double residual = 0.0;
  for (double w : x) residual = std::max(residual, -w);
  for (double w : y) residual = std::max(residual, -w);
  residual = std::max(residual, std::abs(std::accumulate(x.begin(), x.end(), 0.0) - 1.0));
  residual = std::max(residual, std::abs(std::accumulate(y.begin(), y.end(), 0.0) - 1.0));

  out.row_mix = cleaned(std::move(x));
  out.col_mix = cleaned(std::move(y));
  out.value = shifted_value - shift;
  const double upper = col_guarantee(a, out.col_mix);
  const double lower = row_guarantee(a, out.row_mix);
  residual = std::max({residual, upper - out.value, out.value - lower});
  out.max_residual = residual;
  return out;
}

double row_guarantee(const PayoffMatrix& a, const std::vector<double>& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += x[i] * a(i, j);
    worst = std::min(worst, s);
  }
  return worst;
}

double col_guarantee(const PayoffMatrix& a, const std::vector<double>& y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * y[j];
    worst = std::max(worst, s);
  }
  return worst;
}

}  // namespace sigsearch
