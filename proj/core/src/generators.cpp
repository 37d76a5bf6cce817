#include "sigsearch/generators.hpp"

#include <stdexcept>

namespace sigsearch {

RootedTree perfect_binary_tree(int n, double total_length) {
  if (n < 1 || n > 24) throw std::invalid_argument("perfect_binary_tree: n must be in [1, 24]");
  if (!(total_length > 0.0)) throw std::invalid_argument("perfect_binary_tree: total length must be positive");
  const double arcs = static_cast<double>((std::size_t{1} << (n + 1)) - 2);
  const double len = total_length / arcs;

  std::vector<EdgeSpec> edges;
  std::vector<std::string> frontier{""};
  for (int level = 0; level < n; ++level) {
    std::vector<std::string> next;
    for (const auto& path : frontier) {
      const std::string parent = path.empty() ? "O" : "v" + path;
      for (char bit : {'0', '1'}) {
        next.push_back(path + bit);
        edges.push_back({parent, "v" + next.back(), len, false});
      }
    }
    frontier = std::move(next);
  }
  return RootedTree::build("O", edges);
}

RootedTree two_arc_tree(double length_a, double length_b) {
  const EdgeSpec edges[] = {{"O", "A", length_a, false}, {"O", "B", length_b, false}};
  return RootedTree::build("O", edges);
}

RootedTree random_binary_tree(std::mt19937_64& rng, const RandomTreeOptions& options) {
  if (options.max_leaves < 1) throw std::invalid_argument("random_binary_tree: max_leaves must be >= 1");
  if (!(options.min_length > 0.0) || options.max_length < options.min_length) {
    throw std::invalid_argument("random_binary_tree: invalid length range");
  }
  std::uniform_int_distribution<std::size_t> leaf_count(1, options.max_leaves);
  std::uniform_real_distribution<double> length(options.min_length, options.max_length);
  std::bernoulli_distribution root_branches(0.5);

  const std::size_t target = leaf_count(rng);
  std::vector<EdgeSpec> edges;
  std::vector<std::string> leaves;
  std::size_t next_id = 1;
  auto fresh = [&next_id] { return "n" + std::to_string(next_id++); };

  if (target >= 2 && root_branches(rng)) {
    for (int i = 0; i < 2; ++i) {
      leaves.push_back(fresh());
      edges.push_back({"O", leaves.back(), length(rng), false});
    }
  } else {
    leaves.push_back(fresh());
    edges.push_back({"O", leaves.back(), length(rng), false});
  }

  while (leaves.size() < target) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    const std::size_t k = pick(rng);
    const std::string parent = leaves[k];
    leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(k));
    for (int i = 0; i < 2; ++i) {
      leaves.push_back(fresh());
      edges.push_back({parent, leaves.back(), length(rng), false});
    }
  }
  return RootedTree::build("O", edges);
}

}  // namespace sigsearch
