#include "sigsearch/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace sigsearch {

std::string_view to_string(TreeErrorKind kind) noexcept {
  switch (kind) {
    case TreeErrorKind::Syntax: return "syntax";
    case TreeErrorKind::EmptyTree: return "empty-tree";
    case TreeErrorKind::SelfLoop: return "self-loop";
    case TreeErrorKind::DuplicateArc: return "duplicate-arc";
    case TreeErrorKind::Cycle: return "cycle";
    case TreeErrorKind::Disconnected: return "disconnected";
    case TreeErrorKind::UnknownRoot: return "unknown-root";
    case TreeErrorKind::NonPositiveLength: return "non-positive-length";
    case TreeErrorKind::UnknownNode: return "unknown-node";
    case TreeErrorKind::NotNormalized: return "not-normalized";
  }
  return "unknown";
}

namespace {

std::string arc_label(const EdgeSpec& e) { return e.a + "-" + e.b; }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

RootedTree RootedTree::build(std::string_view root, std::span<const EdgeSpec> edges) {
  if (edges.empty()) {
    throw TreeError(TreeErrorKind::EmptyTree, "tree has no arcs");
  }

  std::set<std::pair<std::string, std::string>> seen_arcs;
  std::map<std::string, std::size_t, std::less<>> temp_index;
  for (const auto& e : edges) {
    if (e.a == e.b) {
      throw TreeError(TreeErrorKind::SelfLoop, "arc " + arc_label(e) + " is a self-loop");
    }
    const bool bad_length = !std::isfinite(e.length) || e.length < 0.0 || (e.length == 0.0 && !e.inserted);
    if (bad_length) {
      std::ostringstream os;
      os << "arc " << arc_label(e) << " has non-positive length " << e.length;
      throw TreeError(TreeErrorKind::NonPositiveLength, os.str());
    }
    auto key = std::minmax(e.a, e.b);
    if (!seen_arcs.emplace(key.first, key.second).second) {
      throw TreeError(TreeErrorKind::DuplicateArc, "arc " + arc_label(e) + " appears more than once");
    }
    temp_index.emplace(e.a, 0);
    temp_index.emplace(e.b, 0);
  }

  std::vector<std::string> temp_names;
  temp_names.reserve(temp_index.size());
  for (auto& [name, idx] : temp_index) {
    idx = temp_names.size();
    temp_names.push_back(name);
  }

  auto root_it = temp_index.find(root);
  if (root_it == temp_index.end()) {
    throw TreeError(TreeErrorKind::UnknownRoot, "root '" + std::string(root) + "' is not an endpoint of any arc");
  }

  const std::size_t n = temp_names.size();
  DisjointSets sets(n);
  struct Adj {
    std::size_t other;
    std::size_t edge;
  };
  std::vector<std::vector<Adj>> adjacency(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::size_t a = temp_index.find(edges[k].a)->second;
    const std::size_t b = temp_index.find(edges[k].b)->second;
    if (!sets.unite(a, b)) {
      throw TreeError(TreeErrorKind::Cycle, "arc " + arc_label(edges[k]) + " closes a cycle");
    }
    adjacency[a].push_back({b, k});
    adjacency[b].push_back({a, k});
  }
  const std::size_t root_component = sets.find(root_it->second);
  for (std::size_t v = 0; v < n; ++v) {
    if (sets.find(v) != root_component) {
      throw TreeError(TreeErrorKind::Disconnected,
                      "node '" + temp_names[v] + "' is not connected to root '" + std::string(root) + "'");
    }
  }

  // Orient away from the root; names are sorted, so sorting adjacency by the
  // neighbour's temp index gives lexicographic child order.
  for (auto& adj : adjacency) {
    std::sort(adj.begin(), adj.end(), [](const Adj& x, const Adj& y) { return x.other < y.other; });
  }

  RootedTree t;
  t.names_.reserve(n);
  t.parents_.reserve(n);
  t.children_.resize(n);
  t.arc_length_.reserve(n);
  t.arc_inserted_.reserve(n);
  t.depth_.reserve(n);

  struct Frame {
    std::size_t temp;
    std::optional<NodeId> parent;
    double length;
    bool inserted;
  };
  std::vector<Frame> stack{{root_it->second, std::nullopt, 0.0, false}};
  std::vector<std::size_t> parent_temp(n, n);
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const NodeId id = node_id(t.names_.size());
    t.names_.push_back(temp_names[f.temp]);
    t.parents_.push_back(f.parent);
    t.arc_length_.push_back(f.length);
    t.arc_inserted_.push_back(f.inserted);
    t.depth_.push_back(f.parent ? t.depth_[index(*f.parent)] + f.length : 0.0);
    t.preorder_.push_back(id);
    if (f.parent) t.children_[index(*f.parent)].push_back(id);
    // Push in reverse so the lexicographically first child is visited first.
    const auto& adj = adjacency[f.temp];
    for (auto it = adj.rbegin(); it != adj.rend(); ++it) {
      if (f.parent && it->other == parent_temp[f.temp]) continue;
      parent_temp[it->other] = f.temp;
      const auto& e = edges[it->edge];
      stack.push_back({it->other, id, e.length, e.inserted});
    }
  }

  for (std::size_t i = 0; i < n; ++i) t.by_name_.emplace(t.names_[i], node_id(i));
  t.root_ = node_id(0);

  t.subtree_length_.assign(n, 0.0);
  for (auto it = t.preorder_.rbegin(); it != t.preorder_.rend(); ++it) {
    const auto v = *it;
    if (auto p = t.parents_[index(v)]) {
      t.subtree_length_[index(*p)] += t.arc_length_[index(v)] + t.subtree_length_[index(v)];
    }
  }
  return t;
}

std::optional<NodeId> RootedTree::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NodeId RootedTree::id(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw TreeError(TreeErrorKind::UnknownNode, "unknown node '" + std::string(name) + "'");
}

NodeView RootedTree::view(NodeId v) const {
  return NodeView{v, name(v), parent(v), children(v), is_leaf(v), depth(v)};
}

std::vector<NodeId> RootedTree::leaves() const {
  std::vector<NodeId> out;
  for (auto v : preorder_) {
    if (is_leaf(v)) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> RootedTree::branch_nodes() const {
  std::vector<NodeId> out;
  for (auto v : preorder_) {
    if (is_branch(v)) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> RootedTree::path_from_root(NodeId v) const {
  std::vector<NodeId> path{v};
  while (auto p = parent(path.back())) path.push_back(*p);
  std::reverse(path.begin(), path.end());
  return path;
}

bool RootedTree::is_descendant(NodeId v, NodeId ancestor) const {
  std::optional<NodeId> cur = v;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = parent(*cur);
  }
  return false;
}

bool RootedTree::is_normalized() const noexcept {
  for (auto v : preorder_) {
    const auto k = children_[index(v)].size();
    if (v == root_) {
      if (k != 1 && k != 2) return false;
    } else if (k != 0 && k != 2) {
      return false;
    }
  }
  return true;
}

std::vector<EdgeSpec> RootedTree::edges() const {
  std::vector<EdgeSpec> out;
  out.reserve(arc_count());
  for (auto v : preorder_) {
    if (auto p = parent(v)) {
      out.push_back({name(*p), name(v), arc_length(v), arc_inserted(v)});
    }
  }
  return out;
}

bool RootedTree::same_structure(const RootedTree& other, double tol) const {
  if (name(root()) != other.name(other.root())) return false;
  const auto mine = edges();
  const auto theirs = other.edges();
  if (mine.size() != theirs.size()) return false;
  for (std::size_t i = 0; i < mine.size(); ++i) {
    const auto& x = mine[i];
    const auto& y = theirs[i];
    if (x.a != y.a || x.b != y.b || x.inserted != y.inserted) return false;
    if (std::abs(x.length - y.length) > tol) return false;
  }
  return true;
}

double subtree_length(const RootedTree& tree, NodeId node) {
  if (index(node) >= tree.node_count()) {
    throw TreeError(TreeErrorKind::UnknownNode, "node index " + std::to_string(index(node)) + " out of range");
  }
  return tree.subtree_length(node);
}

double subtree_length(const RootedTree& tree, std::string_view node) {
  return tree.subtree_length(tree.id(node));
}

std::map<std::string, double> leaf_depths(const RootedTree& tree) {
  std::map<std::string, double> out;
  for (auto v : tree.leaves()) out.emplace(tree.name(v), tree.depth(v));
  return out;
}

std::string tree_hash(const RootedTree& tree) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(tree.name(tree.root()));
  mix("\n");
  auto edges = tree.edges();
  std::sort(edges.begin(), edges.end(), [](const EdgeSpec& x, const EdgeSpec& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  char buf[64];
  for (const auto& e : edges) {
    std::snprintf(buf, sizeof buf, "%.17g", e.length);
    mix(e.a);
    mix(" ");
    mix(e.b);
    mix(" ");
    mix(buf);
    mix(e.inserted ? " i\n" : "\n");
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sigsearch
