#pragma once

#include <array>
#include <string>
#include <vector>

#include "sigsearch/policy.hpp"
#include "sigsearch/solver.hpp"
#include "sigsearch/tree.hpp"

namespace sigsearch {

/// Expected time for `policy` to reach `leaf`:
///   depth(leaf) + sum over branch nodes j on the root path of w(j) * 2 * mu(off-branch at j),
/// with w(j) = (1 - beta) q if the leaf is in the favored branch at j and
/// beta + (1 - beta) q otherwise.
double expected_capture_time(const RootedTree& tree, const SearcherPolicy& policy, NodeId leaf,
                             SignalAccuracy acc);

/// Expected capture time for every leaf, in tree.leaves() order.
std::vector<double> capture_times(const RootedTree& tree, const SearcherPolicy& policy, SignalAccuracy acc);

struct HiderResponse {
  NodeId leaf;
  double time;
};

/// Leaf maximizing expected capture time. Leaves within 1e-12 (relative) of
/// the maximum count as tied; the lexicographically first name wins.
HiderResponse hider_best_response(const RootedTree& tree, const SearcherPolicy& policy, SignalAccuracy acc);

double hider_expected_time(const RootedTree& tree, const SearcherPolicy& policy, const LeafDistribution& lambda,
                           SignalAccuracy acc);

/// Columns of the per-node game, in the order they appear in the payoff table.
enum class NodeColumn { AlwaysFirst = 0, AlwaysSecond = 1, Follow = 2, Opposite = 3 };

/// 2x4 game at a branch node. Rows: Hider in branch 1, Hider in branch 2.
struct NodeMatrix {
  std::array<std::array<double, 4>, 2> entries{};

  double operator()(int row, NodeColumn col) const { return entries.at(row).at(static_cast<int>(col)); }
};

NodeMatrix node_matrix(double mu1, double mu2, double v1, double v2, SignalAccuracy acc);

struct IndifferenceViolation {
  NodeId node;
  std::string what;
  double observed;
  double expected;
};

struct IndifferenceReport {
  bool pass = true;
  double max_deviation = 0.0;  ///< largest |time(leaf) - V| over leaves
  std::vector<IndifferenceViolation> violations;
};

/// Checks that every leaf in the support of the optimal Hider distribution is
/// reached in expected time V under `policy`, and that the Hider's branch
/// probability at every branch node equals p mu1 / (p mu1 + q mu2).
IndifferenceReport verify_indifference(const RootedTree& tree, const Solution& solution,
                                       const SearcherPolicy& policy, SignalAccuracy acc,
                                       double tol = kTolerance);
IndifferenceReport verify_indifference(const RootedTree& tree, const Solution& solution, SignalAccuracy acc,
                                       double tol = kTolerance);

}  // namespace sigsearch
