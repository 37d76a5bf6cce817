#include "sigsearch/solver.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace sigsearch {

namespace {

void require_normalized(const RootedTree& tree) {
  if (!tree.is_normalized()) {
    throw TreeError(TreeErrorKind::NotNormalized, "tree must be normalized (binary) before solving");
  }
}

// Pushes the mass at each node down to its children using `split`, which
// returns the share of the first child.
template <typename Split>
LeafDistribution push_down(const RootedTree& tree, Split split) {
  std::vector<double> mass(tree.node_count(), 0.0);
  mass[index(tree.root())] = 1.0;
  LeafDistribution out;
  for (auto v : tree.preorder()) {
    const auto kids = tree.children(v);
    if (kids.empty()) {
      out.emplace(v, mass[index(v)]);
    } else if (kids.size() == 1) {
      mass[index(kids[0])] = mass[index(v)];
    } else {
      const double first = split(v);
      mass[index(kids[0])] = mass[index(v)] * first;
      mass[index(kids[1])] = mass[index(v)] * (1.0 - first);
    }
  }
  return out;
}

}  // namespace

SearcherPolicy Solution::policy(const RootedTree& tree) const {
  SearcherPolicy out(tree);
  for (auto v : tree.branch_nodes()) {
    const auto& a = at(v);
    out.set(v, BranchRule{*a.favored, a.beta});
  }
  return out;
}

Solution solve(const RootedTree& tree, SignalAccuracy acc) {
  require_normalized(tree);
  const double p = acc.p();
  const double q = acc.q();

  Solution sol;
  sol.p = p;
  sol.nodes.resize(tree.node_count());

  // Branch through child c, seen from its parent.
  auto branch_mu = [&](NodeId c) { return tree.arc_length(c) + sol.at(c).mu; };
  auto branch_depth = [&](NodeId c) { return tree.arc_length(c) + sol.at(c).mean_depth; };
  auto branch_value = [&](NodeId c) { return tree.arc_length(c) + sol.at(c).value; };

  const auto& order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    auto& a = sol.nodes[index(v)];
    const auto kids = tree.children(v);
    if (kids.empty()) continue;
    if (kids.size() == 1) {
      a.mu = branch_mu(kids[0]);
      a.mean_depth = branch_depth(kids[0]);
      a.value = branch_value(kids[0]);
      continue;
    }
    NodeId fav = kids[0];
    NodeId other = kids[1];
    if (branch_depth(other) > branch_depth(fav)) std::swap(fav, other);
    const double mu1 = branch_mu(fav);
    const double mu2 = branch_mu(other);
    const double d1 = branch_depth(fav);
    const double d2 = branch_depth(other);
    const double weight = p * mu1 + q * mu2;
    // Every leaf hangs off at least one positive user arc, so mu1 > 0.
    if (!(weight > 0.0)) {
      throw std::logic_error("degenerate branch at '" + tree.name(v) + "': both branches have zero length");
    }

    a.mu = mu1 + mu2;
    a.mean_depth = (p * mu1 * d1 + q * mu2 * d2) / weight;
    a.value = 2.0 * q * a.mu + (p - q) * a.mean_depth;
    a.favored = fav;
    a.beta = (p - q) * (d1 - d2) / (2.0 * weight);
  }

  const auto& root = sol.at(tree.root());
  sol.value = root.value;
  sol.mean_depth = root.mean_depth;

  sol.lambda_bar = push_down(tree, [&](NodeId v) {
    const auto kids = tree.children(v);
    const NodeId fav = *sol.at(v).favored;
    const NodeId other = fav == kids[0] ? kids[1] : kids[0];
    const double w1 = p * branch_mu(fav);
    const double w2 = q * branch_mu(other);
    const double share_fav = w1 / (w1 + w2);
    return fav == kids[0] ? share_fav : 1.0 - share_fav;
  });
  return sol;
}

PenultimateSolution penultimate_solution(double long_arc, double short_arc, SignalAccuracy acc) {
  if (!(short_arc > 0.0) || !(long_arc > 0.0) || !std::isfinite(long_arc)) {
    throw std::invalid_argument("penultimate_solution: arc lengths must be positive");
  }
  if (short_arc > long_arc) {
    throw std::invalid_argument("penultimate_solution: short arc is longer than long arc");
  }
  const double p = acc.p();
  const double q = acc.q();
  const double l = long_arc;
  const double s = short_arc;
  const double weight = p * l + q * s;
  return PenultimateSolution{
      .beta = (p - q) * (l - s) / (2.0 * weight),
      .x_star = p * l / weight,
      .value = 2.0 * q * (l + s) + (p - q) * (p * l * l + q * s * s) / weight,
  };
}

double constant_depth_value(const RootedTree& tree, SignalAccuracy acc) {
  const auto leaves = tree.leaves();
  if (leaves.empty()) throw std::invalid_argument("constant_depth_value: tree has no leaves");
  const double r = tree.depth(leaves.front());
  for (auto v : leaves) {
    if (std::abs(tree.depth(v) - r) > kTolerance) {
      throw std::invalid_argument("constant_depth_value: leaf '" + tree.name(v) + "' is at a different depth");
    }
  }
  return 2.0 * acc.q() * tree.total_length() + acc.edge() * r;
}

LeafDistribution ebd_distribution(const RootedTree& tree) {
  require_normalized(tree);
  return push_down(tree, [&](NodeId v) {
    const auto kids = tree.children(v);
    const double m1 = tree.branch_length(kids[0]);
    const double m2 = tree.branch_length(kids[1]);
    return m1 / (m1 + m2);
  });
}

}  // namespace sigsearch
