#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sigsearch/tree.hpp"

namespace sigsearch::testing {

/// O-A:1, A-L1:2, A-L2:3, O-R:4 (the standard two-branch-node example).
inline RootedTree example_tree() {
  const EdgeSpec edges[] = {{"O", "A", 1, false}, {"A", "L1", 2, false}, {"A", "L2", 3, false}, {"O", "R", 4, false}};
  return RootedTree::build("O", edges);
}

inline RootedTree single_arc_tree(double length = 7.0) {
  const EdgeSpec edges[] = {{"O", "A", length, false}};
  return RootedTree::build("O", edges);
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Random tree of arbitrary arity with single-child chains, for exercising
/// normalize(). Names are "n<k>" so child order differs from creation order.
inline RootedTree random_general_tree(std::mt19937_64& rng, std::size_t nodes) {
  std::uniform_real_distribution<double> len(0.1, 5.0);
  std::vector<EdgeSpec> edges;
  for (std::size_t k = 1; k < nodes; ++k) {
    std::uniform_int_distribution<std::size_t> parent(0, k - 1);
    const std::size_t par = parent(rng);
    edges.push_back({par == 0 ? "O" : "n" + std::to_string(par), "n" + std::to_string(k), len(rng), false});
  }
  return RootedTree::build("O", edges);
}

/// Value of a zero-sum game with two rows (row player maximizes), by
/// enumerating every breakpoint of the lower envelope of the column lines.
/// Returns {value, x} where x is the weight on row 0.
struct TwoRowResult {
  double value;
  double x;
};

inline TwoRowResult two_row_game_value(const std::vector<double>& row0, const std::vector<double>& row1) {
  auto envelope = [&](double x) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < row0.size(); ++j) m = std::min(m, x * row0[j] + (1 - x) * row1[j]);
    return m;
  };
  std::vector<double> candidates{0.0, 1.0};
  for (std::size_t a = 0; a < row0.size(); ++a) {
    for (std::size_t b = a + 1; b < row0.size(); ++b) {
      // x*r0a + (1-x)*r1a = x*r0b + (1-x)*r1b
      const double slope = (row0[a] - row1[a]) - (row0[b] - row1[b]);
      if (slope == 0.0) continue;
      const double x = (row1[b] - row1[a]) / slope;
      if (x >= 0.0 && x <= 1.0) candidates.push_back(x);
    }
  }
  TwoRowResult best{-std::numeric_limits<double>::infinity(), 0.0};
  for (double x : candidates) {
    const double v = envelope(x);
    if (v > best.value) best = {v, x};
  }
  return best;
}

}  // namespace sigsearch::testing
