#include "sigsearch/simulator.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sigsearch {

namespace {

struct NullRecorder {
  void decision(const BranchDecision&) {}
  void visit(NodeId) {}
};

struct FullRecorder {
  PlayRecord* record;
  void decision(const BranchDecision& d) { record->decisions.push_back(d); }
  void visit(NodeId v) { record->route.push_back(v); }
};

// Draws a child index of branch node j: 0 or 1 in child order.
template <typename Recorder>
int choose_first(const RootedTree& tree, const SearcherPolicy& policy, NodeId j, NodeId hider, double p,
                 const SimulationOptions& options, Rng& rng, Recorder& rec) {
  const auto kids = tree.children(j);
  const BranchRule& rule = *policy.rule(j);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BranchDecision d{j, std::nullopt, false, rule.favored};
  if (rule.beta > 0.0 && unit(rng) < rule.beta) {
    d.used_bias = true;
    rec.decision(d);
    return kids[0] == rule.favored ? 0 : 1;
  }
  int signal;
  if (tree.is_descendant(hider, j)) {
    const int correct = tree.is_descendant(hider, kids[0]) ? 0 : 1;
    signal = unit(rng) < p ? correct : 1 - correct;
  } else {
    signal = unit(rng) < 0.5 ? 0 : 1;
  }
  if (options.degrade_to) signal = degrade_signal(p, *options.degrade_to, signal, rng);
  d.signal = kids[signal];
  d.chosen_first = kids[signal];
  rec.decision(d);
  return signal;
}

// Depth-first search of the subtree at v; returns true once the Hider is
// reached. `time` accumulates arc lengths walked.
template <typename Recorder>
bool search(const RootedTree& tree, const SearcherPolicy& policy, NodeId v, NodeId hider, double p,
            const SimulationOptions& options, Rng& rng, Recorder& rec, double& time) {
  if (v == hider) return true;
  const auto kids = tree.children(v);
  if (kids.empty()) return false;

  std::array<NodeId, 2> order{kids[0], kids.size() > 1 ? kids[1] : kids[0]};
  if (kids.size() == 2 && choose_first(tree, policy, v, hider, p, options, rng, rec) == 1) {
    std::swap(order[0], order[1]);
  }
  for (std::size_t k = 0; k < kids.size(); ++k) {
    const NodeId c = order[k];
    time += tree.arc_length(c);
    rec.visit(c);
    if (search(tree, policy, c, hider, p, options, rng, rec, time)) return true;
    time += tree.arc_length(c);
    rec.visit(v);
  }
  return false;
}

void check_inputs(const RootedTree& tree, const SearcherPolicy& policy, SignalAccuracy acc,
                  const SimulationOptions& options) {
  policy.validate(tree);
  if (options.degrade_to) degrade_keep_probability(acc.p(), *options.degrade_to);
}

}  // namespace

PlayRecord simulate_play(const RootedTree& tree, const SearcherPolicy& policy, NodeId hider, SignalAccuracy acc,
                         Rng& rng, const SimulationOptions& options) {
  check_inputs(tree, policy, acc, options);
  if (index(hider) >= tree.node_count() || !tree.is_leaf(hider)) {
    throw std::invalid_argument("hider must be a leaf");
  }
  PlayRecord record;
  record.hider = hider;
  record.route.push_back(tree.root());
  FullRecorder rec{&record};
  search(tree, policy, tree.root(), hider, acc.p(), options, rng, rec, record.capture_time);
  return record;
}

McEstimate monte_carlo_value(const RootedTree& tree, const SearcherPolicy& policy, const LeafDistribution& lambda,
                             SignalAccuracy acc, std::size_t n, std::uint64_t seed,
                             const SimulationOptions& options) {
  check_inputs(tree, policy, acc, options);
  validate_distribution(tree, lambda);
  if (n < 1) throw std::invalid_argument("monte_carlo_value: n must be at least 1");

  std::vector<NodeId> leaves;
  std::vector<double> weights;
  for (const auto& [leaf, w] : lambda) {
    leaves.push_back(leaf);
    weights.push_back(w);
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

  Rng rng(seed);
  NullRecorder rec;
  // Welford running mean / variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const NodeId hider = leaves[pick(rng)];
    double t = 0.0;
    search(tree, policy, tree.root(), hider, acc.p(), options, rng, rec, t);
    const double delta = t - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (t - mean);
  }

  McEstimate est;
  est.n = n;
  est.mean = mean;
  est.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
  est.seed = seed;
  est.stream = std::string(kRngName) + " single stream";
  return est;
}

double degrade_keep_probability(double p, double p_target) {
  if (!(p_target > 0.5 && p_target <= p && p <= 1.0)) {
    std::ostringstream os;
    os << "signal degradation requires 1/2 < p_target <= p <= 1 (got p=" << p << ", p_target=" << p_target << ")";
    throw std::invalid_argument(os.str());
  }
  return (p_target - 0.5) / (p - 0.5);
}

int degrade_signal(double p, double p_target, int raw, Rng& rng) {
  const double x = degrade_keep_probability(p, p_target);
  if (x >= 1.0) return raw;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < x) return raw;
  return unit(rng) < 0.5 ? 0 : 1;
}

std::string to_json_line(const RootedTree& tree, const PlayRecord& record) {
  using nlohmann::ordered_json;
  ordered_json decisions = ordered_json::array();
  for (const auto& d : record.decisions) {
    decisions.push_back({{"node", tree.name(d.node)},
                         {"signal", d.signal ? ordered_json(tree.name(*d.signal)) : ordered_json(nullptr)},
                         {"used_bias", d.used_bias},
                         {"chosen_first", tree.name(d.chosen_first)}});
  }
  ordered_json doc{{"hider", tree.name(record.hider)},
                   {"decisions", std::move(decisions)},
                   {"capture_time", record.capture_time}};
  return doc.dump();
}

}  // namespace sigsearch
