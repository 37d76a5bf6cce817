#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sigsearch/policy.hpp"
#include "sigsearch/tree.hpp"

namespace sigsearch {

/// Generator used for all simulation streams.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

/// What happened at one branch node on first arrival.
struct BranchDecision {
  NodeId node;
  std::optional<NodeId> signal;  ///< absent when the bias coin decided
  bool used_bias = false;
  NodeId chosen_first;
};

struct PlayRecord {
  NodeId hider;
  std::vector<BranchDecision> decisions;  ///< in order of first arrival
  std::vector<NodeId> route;              ///< walk from the root to the hider
  double capture_time = 0.0;
};

/// Signal post-processing applied before the policy sees it.
struct SimulationOptions {
  /// If set, every raw signal of accuracy p is degraded to this accuracy.
  std::optional<double> degrade_to;
};

/// One depth-first search against a Hider at `hider`. At each branch node on
/// first arrival the bias coin is tossed first (prob. beta: favored child);
/// otherwise a signal is drawn (correct w.p. p if the Hider is below, uniform
/// if not) and followed.
PlayRecord simulate_play(const RootedTree& tree, const SearcherPolicy& policy, NodeId hider, SignalAccuracy acc,
                         Rng& rng, const SimulationOptions& options = {});

struct McEstimate {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;  ///< sample std / sqrt(n); 0 when n == 1
  std::uint64_t seed = 0;
  std::string stream;      ///< RNG algorithm and stream layout
};

/// n i.i.d. plays with the Hider drawn from `lambda`, one mt19937_64 stream
/// seeded with `seed`. Deterministic in (inputs, n, seed).
McEstimate monte_carlo_value(const RootedTree& tree, const SearcherPolicy& policy, const LeafDistribution& lambda,
                             SignalAccuracy acc, std::size_t n, std::uint64_t seed,
                             const SimulationOptions& options = {});

/// Probability x of passing a raw signal through so that
/// x p + (1 - x) / 2 = p_target. Requires 1/2 < p_target <= p <= 1.
double degrade_keep_probability(double p, double p_target);

/// Returns `raw` (0 or 1) with probability x, else a fair coin.
int degrade_signal(double p, double p_target, int raw, Rng& rng);

/// One JSON object per PlayRecord, names instead of ids.
std::string to_json_line(const RootedTree& tree, const PlayRecord& record);

}  // namespace sigsearch
