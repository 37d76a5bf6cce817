#pragma once

#include <optional>
#include <vector>

#include "sigsearch/policy.hpp"
#include "sigsearch/tree.hpp"

namespace sigsearch {

/// Quantities of the game played on the subtree rooted at one node.
struct NodeAnnotation {
  double mu = 0.0;          ///< total length below the node
  double mean_depth = 0.0;  ///< optimal-Hider-weighted mean distance to the leaves below
  double value = 0.0;       ///< value of the subtree game
  std::optional<NodeId> favored;  ///< branch nodes only
  double beta = 0.0;              ///< favoring bias; branch nodes only
};

/// Exact solution of the search game with noisy signals on a normalized tree.
struct Solution {
  double p = 1.0;
  std::vector<NodeAnnotation> nodes;  ///< indexed by NodeId
  LeafDistribution lambda_bar;        ///< optimal Hider distribution
  double value = 0.0;
  double mean_depth = 0.0;

  const NodeAnnotation& at(NodeId v) const { return nodes.at(index(v)); }
  /// Favored child plus beta at every branch node.
  SearcherPolicy policy(const RootedTree& tree) const;
};

/// Bottom-up recursion. Requires tree.is_normalized(); throws
/// TreeError(NotNormalized) otherwise.
///
/// At a branch node with branches Q1, Q2 (Q1 favored: D1 >= D2, ties to the
/// earlier child):
///   Hider mass splits p*mu1 : q*mu2,
///   D    = (p mu1 D1 + q mu2 D2) / (p mu1 + q mu2),
///   V    = 2 q mu + (p - q) D,
///   beta = (p - q)(D1 - D2) / (2 (p mu1 + q mu2)).
/// A single arc of length l onto Q' adds l to both D and V.
Solution solve(const RootedTree& tree, SignalAccuracy acc);

struct PenultimateSolution {
  double beta;
  double x_star;  ///< probability the Hider picks the long arc
  double value;
};

/// Closed forms for a branch node whose two branches are leaf arcs of lengths
/// long_arc >= short_arc > 0.
PenultimateSolution penultimate_solution(double long_arc, double short_arc, SignalAccuracy acc);

/// 2 q mu + (p - q) r for trees whose leaves all sit at depth r (within 1e-9).
/// Throws std::invalid_argument otherwise.
double constant_depth_value(const RootedTree& tree, SignalAccuracy acc);

/// Equal Branch Density distribution of the signal-free game: mass splits in
/// proportion to branch lengths at every branch node.
LeafDistribution ebd_distribution(const RootedTree& tree);

}  // namespace sigsearch
