#include "sigsearch/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace sigsearch {

SignalAccuracy::SignalAccuracy(double p) : p_(p) {
  if (!(p > 0.5 && p <= 1.0)) {
    std::ostringstream os;
    os << "signal accuracy p must satisfy 1/2 < p <= 1 (got " << p << ")";
    throw std::invalid_argument(os.str());
  }
}

void SearcherPolicy::set(NodeId branch, BranchRule rule) {
  if (index(branch) >= rules_.size()) throw std::out_of_range("SearcherPolicy::set: node out of range");
  rules_[index(branch)] = rule;
}

void SearcherPolicy::validate(const RootedTree& tree) const {
  if (rules_.size() != tree.node_count()) {
    throw std::invalid_argument("policy was built for a different tree");
  }
  for (auto v : tree.preorder()) {
    const auto& r = rules_[index(v)];
    if (!tree.is_branch(v)) {
      if (r) throw std::invalid_argument("policy has a rule for non-branch node '" + tree.name(v) + "'");
      continue;
    }
    if (!r) throw std::invalid_argument("policy has no rule for branch node '" + tree.name(v) + "'");
    auto kids = tree.children(v);
    if (std::find(kids.begin(), kids.end(), r->favored) == kids.end()) {
      throw std::invalid_argument("favored node of '" + tree.name(v) + "' is not one of its children");
    }
    if (!(r->beta >= 0.0 && r->beta <= 1.0)) {
      throw std::invalid_argument("beta at '" + tree.name(v) + "' is outside [0, 1]");
    }
  }
}

void validate_distribution(const RootedTree& tree, const LeafDistribution& lambda) {
  double sum = 0.0;
  for (const auto& [leaf, w] : lambda) {
    if (index(leaf) >= tree.node_count() || !tree.is_leaf(leaf)) {
      throw std::invalid_argument("distribution puts mass on a non-leaf");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("distribution has a negative or non-finite weight at '" + tree.name(leaf) + "'");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kTolerance) {
    std::ostringstream os;
    os << "distribution sums to " << sum << ", not 1";
    throw std::invalid_argument(os.str());
  }
}

SearcherPolicy parse_policy(const RootedTree& tree, std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed policy JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_object()) {
    throw std::invalid_argument("policy must be an object with a \"nodes\" object");
  }
  SearcherPolicy policy(tree);
  for (const auto& [name, entry] : doc["nodes"].items()) {
    if (!entry.is_object() || !entry.contains("favored") || !entry["favored"].is_string() ||
        !entry.contains("beta") || !entry["beta"].is_number()) {
      throw std::invalid_argument("policy entry '" + name + "' needs string \"favored\" and number \"beta\"");
    }
    policy.set(tree.id(name), BranchRule{tree.id(entry["favored"].get<std::string>()), entry["beta"].get<double>()});
  }
  policy.validate(tree);
  return policy;
}

std::string to_json(const RootedTree& tree, const SearcherPolicy& policy) {
  using nlohmann::json;
  json nodes = json::object();
  for (auto v : tree.branch_nodes()) {
    if (const auto& r = policy.rule(v)) {
      nodes[tree.name(v)] = {{"favored", tree.name(r->favored)}, {"beta", r->beta}};
    }
  }
  return json{{"nodes", std::move(nodes)}}.dump();
}

}  // namespace sigsearch
