#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsearch/matrix_game.hpp"
#include "sigsearch/policy.hpp"
#include "sigsearch/tree.hpp"

namespace sigsearch {

/// Signal-contingent choice at one branch node. "First"/"Second" refer to the
/// tree's child order, not to the favored branch.
enum class PureRule : std::uint8_t { AlwaysFirst = 0, AlwaysSecond = 1, Follow = 2, Opposite = 3 };

std::string_view to_string(PureRule rule) noexcept;

/// One rule per branch node, aligned with tree.branch_nodes().
struct PureStrategy {
  std::vector<PureRule> rules;

  bool uses_opposite() const;
  std::string label() const;  ///< e.g. "F1O2", one letter per branch node
};

inline constexpr std::size_t kDefaultEnumerationCap = 8;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All 4^b pure strategies, first branch node most significant, rules in
/// PureRule order. Throws CapExceeded if b > cap.
std::vector<PureStrategy> enumerate_strategies(const RootedTree& tree, std::size_t cap = kDefaultEnumerationCap);

/// Exact expectation over the signals on the root-to-leaf path.
double pure_payoff(const RootedTree& tree, const PureStrategy& strategy, NodeId leaf, SignalAccuracy acc);

/// Rows are leaves (tree.leaves() order), columns pure strategies.
struct MatrixGame {
  std::vector<NodeId> rows;
  std::vector<PureStrategy> cols;
  PayoffMatrix payoffs;
};

MatrixGame build_matrix_game(const RootedTree& tree, SignalAccuracy acc, std::size_t cap = kDefaultEnumerationCap);

/// Column weights induced by a biased policy: at each node independently,
/// beta on the fixed rule toward the favored child and 1 - beta on Follow.
std::vector<double> policy_column_mix(const RootedTree& tree, const SearcherPolicy& policy,
                                      const std::vector<PureStrategy>& cols);

struct CrossValidationReport {
  std::string tree_hash;
  double p = 0.0;
  double recursion_value = 0.0;
  double lp_value = 0.0;
  double max_residual = 0.0;
  bool pass = false;

  double lambda_guarantee = 0.0;       ///< min over columns of the optimal Hider mix's payoff
  double policy_guarantee = 0.0;       ///< max over leaves of the induced column mix's payoff
  double no_opposite_lp_value = 0.0;   ///< LP value with every Opposite column removed
  double row_mix_distance = 0.0;       ///< max |LP row mix - optimal Hider mix|
  bool hider_mix_unique = true;        ///< false when the LP found a different optimal Hider mix
  bool opposite_dominated = true;
  std::vector<std::string> failures;
};

/// Solves the full matrix game by LP and compares it to the recursion.
CrossValidationReport cross_validate(const RootedTree& tree, SignalAccuracy acc,
                                     std::size_t cap = kDefaultEnumerationCap, double tol = kTolerance);

/// {tree_hash, p, recursion_value, lp_value, max_residual, pass}
std::string to_json(const CrossValidationReport& report);

}  // namespace sigsearch
