#include "sigsearch/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigsearch {

namespace {

double path_time(const RootedTree& tree, const SearcherPolicy& policy, NodeId leaf, double q) {
  const auto path = tree.path_from_root(leaf);
  double t = tree.depth(leaf);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const NodeId j = path[i];
    if (!tree.is_branch(j)) continue;
    const NodeId toward = path[i + 1];
    const auto kids = tree.children(j);
    const NodeId away = kids[0] == toward ? kids[1] : kids[0];
    const BranchRule& rule = *policy.rule(j);
    const double wrong_first = rule.favored == toward ? (1.0 - rule.beta) * q : rule.beta + (1.0 - rule.beta) * q;
    t += wrong_first * 2.0 * tree.branch_length(away);
  }
  return t;
}

void require_leaf(const RootedTree& tree, NodeId leaf) {
  if (index(leaf) >= tree.node_count() || !tree.is_leaf(leaf)) {
    throw std::invalid_argument("target is not a leaf");
  }
}

}  // namespace

double expected_capture_time(const RootedTree& tree, const SearcherPolicy& policy, NodeId leaf,
                             SignalAccuracy acc) {
  policy.validate(tree);
  require_leaf(tree, leaf);
  return path_time(tree, policy, leaf, acc.q());
}

std::vector<double> capture_times(const RootedTree& tree, const SearcherPolicy& policy, SignalAccuracy acc) {
  policy.validate(tree);
  std::vector<double> out;
  for (auto v : tree.leaves()) out.push_back(path_time(tree, policy, v, acc.q()));
  return out;
}

HiderResponse hider_best_response(const RootedTree& tree, const SearcherPolicy& policy, SignalAccuracy acc) {
  const auto leaves = tree.leaves();
  const auto times = capture_times(tree, policy, acc);
  const double best = *std::max_element(times.begin(), times.end());
  const double tie = 1e-12 * std::max(1.0, std::abs(best));
  std::optional<HiderResponse> pick;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (times[i] < best - tie) continue;
    if (!pick || tree.name(leaves[i]) < tree.name(pick->leaf)) pick = HiderResponse{leaves[i], times[i]};
  }
  return *pick;
}

double hider_expected_time(const RootedTree& tree, const SearcherPolicy& policy, const LeafDistribution& lambda,
                           SignalAccuracy acc) {
  policy.validate(tree);
  validate_distribution(tree, lambda);
  double t = 0.0;
  for (const auto& [leaf, w] : lambda) t += w * path_time(tree, policy, leaf, acc.q());
  return t;
}

NodeMatrix node_matrix(double mu1, double mu2, double v1, double v2, SignalAccuracy acc) {
  const double p = acc.p();
  const double q = acc.q();
  NodeMatrix m;
  m.entries[0] = {v1, 2.0 * mu2 + v1, q * 2.0 * mu2 + v1, p * 2.0 * mu2 + v1};
  m.entries[1] = {2.0 * mu1 + v2, v2, q * 2.0 * mu1 + v2, p * 2.0 * mu1 + v2};
  return m;
}

IndifferenceReport verify_indifference(const RootedTree& tree, const Solution& solution,
                                       const SearcherPolicy& policy, SignalAccuracy acc, double tol) {
  policy.validate(tree);
  IndifferenceReport report;
  const double scale = std::max(1.0, std::abs(solution.value));

  for (auto v : tree.leaves()) {
    auto it = solution.lambda_bar.find(v);
    if (it == solution.lambda_bar.end() || it->second <= 0.0) continue;
    const double t = path_time(tree, policy, v, acc.q());
    const double dev = std::abs(t - solution.value);
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > tol * scale) {
      report.violations.push_back({v, "capture time differs from game value", t, solution.value});
    }
  }

  // Hider mass below each node, summed from the leaves up.
  std::vector<double> mass(tree.node_count(), 0.0);
  for (const auto& [leaf, w] : solution.lambda_bar) mass[index(leaf)] = w;
  const auto& order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (auto parent = tree.parent(*it)) mass[index(*parent)] += mass[index(*it)];
  }

  const double p = acc.p();
  const double q = acc.q();
  for (auto j : tree.branch_nodes()) {
    if (mass[index(j)] <= 0.0) continue;
    const auto kids = tree.children(j);
    const NodeId fav = *solution.at(j).favored;
    const NodeId other = fav == kids[0] ? kids[1] : kids[0];
    const double mu1 = tree.branch_length(fav);
    const double mu2 = tree.branch_length(other);
    const double x_star = p * mu1 / (p * mu1 + q * mu2);
    const double observed = mass[index(fav)] / mass[index(j)];
    if (std::abs(observed - x_star) > tol) {
      report.violations.push_back({j, "Hider branch probability differs from p*mu1/(p*mu1+q*mu2)", observed, x_star});
    }
  }
  report.pass = report.violations.empty();
  return report;
}

IndifferenceReport verify_indifference(const RootedTree& tree, const Solution& solution, SignalAccuracy acc,
                                       double tol) {
  return verify_indifference(tree, solution, solution.policy(tree), acc, tol);
}

}  // namespace sigsearch
