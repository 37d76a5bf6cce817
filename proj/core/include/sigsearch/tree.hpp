#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sigsearch {

/// Dense index of a node inside one RootedTree. Only meaningful together with
/// the tree that issued it.
enum class NodeId : std::uint32_t {};

constexpr std::size_t index(NodeId id) noexcept { return static_cast<std::size_t>(id); }
constexpr NodeId node_id(std::size_t i) noexcept { return static_cast<NodeId>(i); }

/// Default absolute tolerance for comparing lengths, depths and values.
inline constexpr double kTolerance = 1e-9;

enum class TreeErrorKind {
  Syntax,
  EmptyTree,
  SelfLoop,
  DuplicateArc,
  Cycle,
  Disconnected,
  UnknownRoot,
  NonPositiveLength,
  UnknownNode,
  NotNormalized,
};

std::string_view to_string(TreeErrorKind kind) noexcept;

class TreeError : public std::runtime_error {
 public:
  TreeError(TreeErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  TreeErrorKind kind() const noexcept { return kind_; }

 private:
  TreeErrorKind kind_;
};

/// One undirected arc as supplied by a caller. `inserted` marks zero-length
/// arcs created by binarization; only those may have length 0.
struct EdgeSpec {
  std::string a;
  std::string b;
  double length = 0.0;
  bool inserted = false;
};

struct NodeView {
  NodeId id;
  std::string_view name;
  std::optional<NodeId> parent;
  std::span<const NodeId> children;
  bool is_leaf = false;
  double depth = 0.0;
};

/// Immutable rooted metric tree. Arcs are stored oriented away from the root;
/// each non-root node owns the arc to its parent. Children are always kept in
/// lexicographic order of node names.
class RootedTree {
 public:
  /// Validates connectivity, acyclicity, root membership and arc lengths.
  /// Throws TreeError naming the offending element.
  static RootedTree build(std::string_view root, std::span<const EdgeSpec> edges);

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t arc_count() const noexcept { return names_.size() - 1; }
  NodeId root() const noexcept { return root_; }

  const std::string& name(NodeId v) const { return names_.at(index(v)); }
  std::optional<NodeId> find(std::string_view name) const;
  /// Like find(), but throws TreeError(UnknownNode).
  NodeId id(std::string_view name) const;

  std::optional<NodeId> parent(NodeId v) const { return parents_.at(index(v)); }
  std::span<const NodeId> children(NodeId v) const { return children_.at(index(v)); }
  /// Length of the arc from v's parent to v; 0 for the root.
  double arc_length(NodeId v) const { return arc_length_.at(index(v)); }
  bool arc_inserted(NodeId v) const { return arc_inserted_.at(index(v)); }
  double depth(NodeId v) const { return depth_.at(index(v)); }
  /// Total length of the arcs strictly below v.
  double subtree_length(NodeId v) const { return subtree_length_.at(index(v)); }
  /// Length of the branch hanging from v's parent through v: the parent arc plus
  /// everything below v.
  double branch_length(NodeId v) const { return arc_length(v) + subtree_length(v); }
  double total_length() const noexcept { return subtree_length_[index(root_)]; }

  bool is_leaf(NodeId v) const { return children(v).empty() && v != root_; }
  bool is_branch(NodeId v) const { return children(v).size() == 2; }
  NodeView view(NodeId v) const;

  /// Nodes in depth-first preorder, children visited in stored order.
  const std::vector<NodeId>& preorder() const noexcept { return preorder_; }
  /// Leaves in preorder.
  std::vector<NodeId> leaves() const;
  /// Nodes with exactly two children, in preorder.
  std::vector<NodeId> branch_nodes() const;
  /// Path root -> v, inclusive at both ends.
  std::vector<NodeId> path_from_root(NodeId v) const;
  /// True if `v` lies in the subtree at `ancestor` (inclusive).
  bool is_descendant(NodeId v, NodeId ancestor) const;

  /// Every non-root internal node has exactly 2 children and the root has 1 or 2.
  bool is_normalized() const noexcept;

  /// All arcs, oriented parent -> child, in preorder of the child.
  std::vector<EdgeSpec> edges() const;

  /// Structural equality: same root name, same oriented arcs (by name), same
  /// lengths within `tol`, same inserted flags.
  bool same_structure(const RootedTree& other, double tol = 0.0) const;

 private:
  RootedTree() = default;

  std::vector<std::string> names_;
  std::map<std::string, NodeId, std::less<>> by_name_;
  std::vector<std::optional<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<double> arc_length_;
  std::vector<bool> arc_inserted_;
  std::vector<double> depth_;
  std::vector<double> subtree_length_;
  std::vector<NodeId> preorder_;
  NodeId root_{};
};

/// Parses the JSON tree format: {"root": "O", "edges": [["O", "A", 1.5], ...]}.
/// No normalization is applied.
RootedTree parse_tree(std::string_view text);
RootedTree load_tree(const std::string& path);
/// Serializes back into the JSON tree format (inserted arcs included).
std::string to_json(const RootedTree& tree);

/// Splits k-ary nodes (k > 2) into chains of binary nodes joined by flagged
/// zero-length arcs, and contracts non-root nodes with a single child.
/// Leaf set, leaf depths and total length are preserved.
RootedTree normalize(const RootedTree& tree);

double subtree_length(const RootedTree& tree, NodeId node);
double subtree_length(const RootedTree& tree, std::string_view node);

/// Distance from the root to every leaf, keyed by leaf name.
std::map<std::string, double> leaf_depths(const RootedTree& tree);

/// Stable 64-bit FNV-1a hash of the canonical edge list, as 16 hex digits.
std::string tree_hash(const RootedTree& tree);

}  // namespace sigsearch
