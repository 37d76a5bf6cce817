#pragma once

#include <random>

#include "sigsearch/tree.hpp"

namespace sigsearch {

/// Perfect binary tree B_n: 2^n leaves, 2^(n+1) - 2 arcs of equal length,
/// scaled so the total length is `total_length`. Root is named "O"; other
/// nodes are named by their left/right path, e.g. "v01".
RootedTree perfect_binary_tree(int n, double total_length = 1.0);

/// Root "O" with two leaf arcs "A" and "B".
RootedTree two_arc_tree(double length_a, double length_b);

struct RandomTreeOptions {
  std::size_t max_leaves = 4;
  double min_length = 0.1;
  double max_length = 10.0;
};

/// Random normalized tree with between 1 and max_leaves leaves and arc
/// lengths uniform in [min_length, max_length]. The root is a branch node
/// or has a single arc with equal probability.
RootedTree random_binary_tree(std::mt19937_64& rng, const RandomTreeOptions& options = {});

}  // namespace sigsearch
