#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsearch/tree.hpp"

namespace sigsearch {

/// Accuracy p of the branch signal; q = 1 - p. Constructed values always
/// satisfy 1/2 < p <= 1.
class SignalAccuracy {
 public:
  explicit SignalAccuracy(double p);

  double p() const noexcept { return p_; }
  double q() const noexcept { return 1.0 - p_; }
  /// p - q = 2p - 1, the signal's edge over a fair coin.
  double edge() const noexcept { return 2.0 * p_ - 1.0; }

 private:
  double p_;
};

/// Behaviour at one branch node: with probability beta search `favored`
/// first without looking at the signal, otherwise follow the signal.
struct BranchRule {
  NodeId favored;
  double beta = 0.0;
};

/// A biased depth-first Searcher strategy: one BranchRule per branch node.
class SearcherPolicy {
 public:
  SearcherPolicy() = default;
  explicit SearcherPolicy(const RootedTree& tree) : rules_(tree.node_count()) {}

  void set(NodeId branch, BranchRule rule);
  const std::optional<BranchRule>& rule(NodeId v) const { return rules_.at(index(v)); }
  std::size_t size() const noexcept { return rules_.size(); }

  /// Throws std::invalid_argument if a branch node lacks a rule, a rule sits
  /// on a non-branch node, `favored` is not a child, or beta is outside [0, 1].
  void validate(const RootedTree& tree) const;

 private:
  std::vector<std::optional<BranchRule>> rules_;
};

/// Leaf -> probability. Keys are leaves of the tree it was built for.
using LeafDistribution = std::map<NodeId, double>;

/// Throws std::invalid_argument unless `lambda` is a probability vector over
/// leaves of `tree` (sum within 1e-9 of 1).
void validate_distribution(const RootedTree& tree, const LeafDistribution& lambda);

/// Reads {"nodes": {"A": {"favored": "L2", "beta": 0.0625}, ...}}.
SearcherPolicy parse_policy(const RootedTree& tree, std::string_view text);
std::string to_json(const RootedTree& tree, const SearcherPolicy& policy);

}  // namespace sigsearch
