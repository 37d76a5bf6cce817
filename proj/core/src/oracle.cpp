#include "sigsearch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "sigsearch/solver.hpp"

namespace sigsearch {

std::string_view to_string(PureRule rule) noexcept {
  switch (rule) {
    case PureRule::AlwaysFirst: return "[1,1]";
    case PureRule::AlwaysSecond: return "[2,2]";
    case PureRule::Follow: return "follow";
    case PureRule::Opposite: return "opposite";
  }
  return "?";
}

bool PureStrategy::uses_opposite() const {
  return std::find(rules.begin(), rules.end(), PureRule::Opposite) != rules.end();
}

std::string PureStrategy::label() const {
  static constexpr char kLetters[] = {'1', '2', 'F', 'O'};
  std::string out;
  out.reserve(rules.size());
  for (auto r : rules) out.push_back(kLetters[static_cast<int>(r)]);
  return out;
}

std::vector<PureStrategy> enumerate_strategies(const RootedTree& tree, std::size_t cap) {
  const std::size_t b = tree.branch_nodes().size();
  if (b > cap) {
    throw CapExceeded("tree has " + std::to_string(b) + " branch nodes; enumeration cap is " + std::to_string(cap));
  }
  const std::size_t count = std::size_t{1} << (2 * b);
  std::vector<PureStrategy> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto& rules = out[k].rules;
    rules.resize(b);
    std::size_t code = k;
    for (std::size_t i = b; i-- > 0;) {
      rules[i] = static_cast<PureRule>(code & 3u);
      code >>= 2;
    }
  }
  return out;
}

namespace {

// Root-to-leaf path summary: at each branch node on the path, which child
// leads to the leaf and how long the other branch is.
struct PathStep {
  std::size_t branch_index;
  int toward;  // 0 or 1 in child order
  double off_length;
};

struct LeafPath {
  double depth;
  std::vector<PathStep> steps;
};

LeafPath leaf_path(const RootedTree& tree, const std::vector<NodeId>& branches, NodeId leaf) {
  LeafPath out{tree.depth(leaf), {}};
  const auto path = tree.path_from_root(leaf);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const NodeId j = path[i];
    if (!tree.is_branch(j)) continue;
    const auto kids = tree.children(j);
    const int toward = kids[0] == path[i + 1] ? 0 : 1;
    const auto pos = std::find(branches.begin(), branches.end(), j) - branches.begin();
    out.steps.push_back({static_cast<std::size_t>(pos), toward, tree.branch_length(kids[1 - toward])});
  }
  return out;
}

double wrong_first_probability(PureRule rule, int toward, double p, double q) {
  switch (rule) {
    case PureRule::AlwaysFirst: return toward == 0 ? 0.0 : 1.0;
    case PureRule::AlwaysSecond: return toward == 1 ? 0.0 : 1.0;
    case PureRule::Follow: return q;
    case PureRule::Opposite: return p;
  }
  return 0.0;
}

double path_payoff(const LeafPath& path, const PureStrategy& s, double p, double q) {
  double t = path.depth;
  for (const auto& step : path.steps) {
    t += wrong_first_probability(s.rules[step.branch_index], step.toward, p, q) * 2.0 * step.off_length;
  }
  return t;
}

}  // namespace

double pure_payoff(const RootedTree& tree, const PureStrategy& strategy, NodeId leaf, SignalAccuracy acc) {
  const auto branches = tree.branch_nodes();
  if (strategy.rules.size() != branches.size()) {
    throw std::invalid_argument("pure strategy does not cover every branch node");
  }
  if (index(leaf) >= tree.node_count() || !tree.is_leaf(leaf)) throw std::invalid_argument("target is not a leaf");
  return path_payoff(leaf_path(tree, branches, leaf), strategy, acc.p(), acc.q());
}

MatrixGame build_matrix_game(const RootedTree& tree, SignalAccuracy acc, std::size_t cap) {
  MatrixGame game;
  game.cols = enumerate_strategies(tree, cap);
  game.rows = tree.leaves();
  const auto branches = tree.branch_nodes();
  game.payoffs = PayoffMatrix(game.rows.size(), game.cols.size());
  for (std::size_t i = 0; i < game.rows.size(); ++i) {
    const LeafPath path = leaf_path(tree, branches, game.rows[i]);
    for (std::size_t j = 0; j < game.cols.size(); ++j) {
      game.payoffs(i, j) = path_payoff(path, game.cols[j], acc.p(), acc.q());
    }
  }
  return game;
}

std::vector<double> policy_column_mix(const RootedTree& tree, const SearcherPolicy& policy,
                                      const std::vector<PureStrategy>& cols) {
  policy.validate(tree);
  const auto branches = tree.branch_nodes();
  std::vector<double> mix(cols.size(), 0.0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    double w = 1.0;
    for (std::size_t k = 0; k < branches.size() && w > 0.0; ++k) {
      const BranchRule& rule = *policy.rule(branches[k]);
      const PureRule toward_favored =
          tree.children(branches[k])[0] == rule.favored ? PureRule::AlwaysFirst : PureRule::AlwaysSecond;
      const PureRule r = cols[j].rules[k];
      if (r == toward_favored) {
        w *= rule.beta;
      } else if (r == PureRule::Follow) {
        w *= 1.0 - rule.beta;
      } else {
        w = 0.0;
      }
    }
    mix[j] = w;
  }
  return mix;
}

CrossValidationReport cross_validate(const RootedTree& tree, SignalAccuracy acc, std::size_t cap, double tol) {
  CrossValidationReport r;
  r.tree_hash = tree_hash(tree);
  r.p = acc.p();

  const Solution sol = solve(tree, acc);
  r.recursion_value = sol.value;

  const MatrixGame game = build_matrix_game(tree, acc, cap);
  const MatrixGameSolution lp = solve_matrix_game(game.payoffs);
  r.lp_value = lp.value;
  r.max_residual = lp.max_residual;

  const double scale = std::max(1.0, std::abs(sol.value));
  auto fail = [&r](std::string what) { r.failures.push_back(std::move(what)); };

  if (std::abs(lp.value - sol.value) > tol * scale) fail("LP value differs from recursion value");
  if (lp.max_residual > tol * scale) fail("LP residual exceeds tolerance");

  std::vector<double> lambda(game.rows.size(), 0.0);
  for (std::size_t i = 0; i < game.rows.size(); ++i) {
    auto it = sol.lambda_bar.find(game.rows[i]);
    if (it != sol.lambda_bar.end()) lambda[i] = it->second;
    r.row_mix_distance = std::max(r.row_mix_distance, std::abs(lambda[i] - lp.row_mix[i]));
  }
  r.lambda_guarantee = row_guarantee(game.payoffs, lambda);
  if (r.lambda_guarantee < sol.value - tol * scale) fail("optimal Hider mix does not guarantee the value");
  // A differing LP row mix is only admissible if the Hider's optimum is not unique,
  // which the check above has already shown (both mixes guarantee the value).
  r.hider_mix_unique = r.row_mix_distance <= 1e-6;

  const auto induced = policy_column_mix(tree, sol.policy(tree), game.cols);
  r.policy_guarantee = col_guarantee(game.payoffs, induced);
  if (r.policy_guarantee > sol.value + tol * scale) fail("optimal Searcher policy does not guarantee the value");

  // Opposite at a node is weakly dominated by Follow at the same node.
  const std::size_t b = tree.branch_nodes().size();
  for (std::size_t j = 0; j < game.cols.size(); ++j) {
    if (!game.cols[j].uses_opposite()) continue;
    std::size_t follow_index = 0;
    for (std::size_t k = 0; k < b; ++k) {
      const auto rule = game.cols[j].rules[k] == PureRule::Opposite ? PureRule::Follow : game.cols[j].rules[k];
      follow_index = follow_index * 4 + static_cast<std::size_t>(rule);
    }
    for (std::size_t i = 0; i < game.rows.size(); ++i) {
      if (game.payoffs(i, j) < game.payoffs(i, follow_index) - tol) r.opposite_dominated = false;
    }
  }
  if (!r.opposite_dominated) fail("an Opposite column is not dominated by its Follow counterpart");

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < game.cols.size(); ++j) {
    if (!game.cols[j].uses_opposite()) kept.push_back(j);
  }
  PayoffMatrix reduced(game.rows.size(), kept.size());
  for (std::size_t i = 0; i < game.rows.size(); ++i) {
    for (std::size_t j = 0; j < kept.size(); ++j) reduced(i, j) = game.payoffs(i, kept[j]);
  }
  r.no_opposite_lp_value = solve_matrix_game(reduced).value;
  if (std::abs(r.no_opposite_lp_value - lp.value) > tol * scale) fail("removing Opposite columns changed the value");

  r.pass = r.failures.empty();
  return r;
}

std::string to_json(const CrossValidationReport& r) {
  nlohmann::ordered_json doc{
      {"tree_hash", r.tree_hash},         {"p", r.p},
      {"recursion_value", r.recursion_value}, {"lp_value", r.lp_value},
      {"max_residual", r.max_residual},   {"pass", r.pass},
  };
  return doc.dump();
}

}  // namespace sigsearch
