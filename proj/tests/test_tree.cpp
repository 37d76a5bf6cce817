#include <random>

#include "doctest.h"
#include "sigsearch/generators.hpp"
#include "sigsearch/tree.hpp"
#include "support.hpp"

using namespace sigsearch;
using sigsearch::testing::example_tree;

namespace {

TreeErrorKind parse_error_kind(std::string_view text) {
  try {
    parse_tree(text);
  } catch (const TreeError& e) {
    return e.kind();
  }
  FAIL("expected a TreeError");
  return TreeErrorKind::Syntax;
}

std::string parse_error_message(std::string_view text) {
  try {
    parse_tree(text);
  } catch (const TreeError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parse example tree") {
  const auto t = parse_tree(R"({"root":"O","edges":[["O","A",1],["A","L1",2],["A","L2",3],["O","R",4]]})");
  CHECK(t.node_count() == 5);
  CHECK(t.total_length() == 10.0);
  CHECK(t.name(t.root()) == "O");
  CHECK(t.is_normalized());
  CHECK(subtree_length(t, "A") == 5.0);
  CHECK(subtree_length(t, "O") == 10.0);
  CHECK(subtree_length(t, "R") == 0.0);
  CHECK(subtree_length(t, "L1") == 0.0);

  const auto depths = leaf_depths(t);
  CHECK(depths.size() == 3);
  CHECK(depths.at("L1") == 3.0);
  CHECK(depths.at("L2") == 4.0);
  CHECK(depths.at("R") == 4.0);
}

TEST_CASE("edge orientation in the file is informational") {
  const auto t = parse_tree(R"({"root":"O","edges":[["A","O",1],["L1","A",2],["A","L2",3],["R","O",4]]})");
  CHECK(t.same_structure(example_tree()));
}

TEST_CASE("single arc and exponent notation") {
  const auto t = parse_tree(R"({"root":"O","edges":[["O","A",0.7e1]]})");
  CHECK(t.node_count() == 2);
  CHECK(t.total_length() == 7.0);
  CHECK(leaf_depths(t).at("A") == 7.0);
  CHECK(t.is_leaf(t.id("A")));
  CHECK_FALSE(t.is_leaf(t.root()));
}

TEST_CASE("parse diagnostics") {
  CHECK(parse_error_kind("{") == TreeErrorKind::Syntax);
  CHECK(parse_error_kind("[]") == TreeErrorKind::Syntax);
  CHECK(parse_error_kind(R"({"edges":[]})") == TreeErrorKind::Syntax);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","A"]]})") == TreeErrorKind::Syntax);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","A","1"]]})") == TreeErrorKind::Syntax);
  CHECK(parse_error_kind(R"({"root":"O","edges":[]})") == TreeErrorKind::EmptyTree);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","O",1]]})") == TreeErrorKind::SelfLoop);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","A",1],["A","O",2]]})") == TreeErrorKind::DuplicateArc);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","A",1],["A","B",1],["B","O",1]]})") == TreeErrorKind::Cycle);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","A",1],["B","C",1]]})") == TreeErrorKind::Disconnected);
  CHECK(parse_error_kind(R"({"root":"X","edges":[["O","A",1]]})") == TreeErrorKind::UnknownRoot);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","A",0]]})") == TreeErrorKind::NonPositiveLength);
  CHECK(parse_error_kind(R"({"root":"O","edges":[["O","A",-2]]})") == TreeErrorKind::NonPositiveLength);

  // Diagnostics name the offending element.
  CHECK(parse_error_message(R"({"root":"O","edges":[["O","A",1],["A","Z",0]]})").find("A-Z") != std::string::npos);
  CHECK(parse_error_message(R"({"root":"O","edges":[["O","A",1],["B","C",1]]})").find("'B'") != std::string::npos);
  CHECK(parse_error_message(R"({"root":"X","edges":[["O","A",1]]})").find("'X'") != std::string::npos);
  CHECK(parse_error_message(R"({"root":"O","edges":[["O","A",1],["O","A",1]]})").find("O-A") != std::string::npos);
}

TEST_CASE("unknown node lookup") {
  const auto t = example_tree();
  CHECK_THROWS_AS(t.id("nope"), TreeError);
  CHECK_THROWS_AS(subtree_length(t, "nope"), TreeError);
  CHECK_THROWS_AS(subtree_length(t, node_id(99)), TreeError);
}

TEST_CASE("node views") {
  const auto t = example_tree();
  const auto root = t.view(t.root());
  CHECK_FALSE(root.parent.has_value());
  CHECK(root.depth == 0.0);
  CHECK(root.children.size() == 2);
  const auto l2 = t.view(t.id("L2"));
  CHECK(l2.is_leaf);
  CHECK(l2.depth == 4.0);
  CHECK(t.name(*l2.parent) == "A");
  // Children are in lexicographic order.
  const auto a = t.children(t.id("A"));
  CHECK(t.name(a[0]) == "L1");
  CHECK(t.name(a[1]) == "L2");
}

TEST_CASE("normalize splits a ternary root") {
  const EdgeSpec edges[] = {{"O", "a", 1, false}, {"O", "b", 2, false}, {"O", "c", 3, false}};
  const auto t = RootedTree::build("O", edges);
  CHECK_FALSE(t.is_normalized());
  const auto n = normalize(t);
  CHECK(n.is_normalized());
  CHECK(n.children(n.root()).size() == 2);
  CHECK(n.total_length() == 6.0);
  CHECK(n.node_count() == 5);

  // Left fold: the inserted joint carries a and b, the root keeps c.
  const NodeId joint = n.id("O#1");
  CHECK(n.arc_length(joint) == 0.0);
  CHECK(n.arc_inserted(joint));
  CHECK(n.name(*n.parent(n.id("a"))) == "O#1");
  CHECK(n.name(*n.parent(n.id("b"))) == "O#1");
  CHECK(n.name(*n.parent(n.id("c"))) == "O");
  CHECK(leaf_depths(n) == leaf_depths(t));
}

TEST_CASE("normalize contracts a degree-2 node") {
  const EdgeSpec edges[] = {{"O", "A", 1, false}, {"A", "B", 2, false}};
  const auto n = normalize(RootedTree::build("O", edges));
  CHECK(n.node_count() == 2);
  CHECK(n.arc_length(n.id("B")) == 3.0);
  CHECK_FALSE(n.find("A").has_value());
}

TEST_CASE("normalize keeps binary trees unchanged") {
  const auto t = example_tree();
  CHECK(normalize(t).same_structure(t));
  const auto b3 = perfect_binary_tree(3);
  CHECK(normalize(b3).same_structure(b3));
}

TEST_CASE("inserted names avoid collisions") {
  const EdgeSpec edges[] = {
      {"O", "O#1", 1, false}, {"O", "b", 2, false}, {"O", "c", 3, false}, {"O", "d", 4, false}};
  const auto n = normalize(RootedTree::build("O", edges));
  CHECK(n.is_normalized());
  CHECK(n.node_count() == 7);
  CHECK(n.total_length() == 10.0);
}

TEST_CASE("json round trip keeps inserted arcs") {
  const EdgeSpec edges[] = {{"O", "a", 1, false}, {"O", "b", 2, false}, {"O", "c", 3, false}, {"O", "d", 4, false}};
  const auto n = normalize(RootedTree::build("O", edges));
  const auto back = parse_tree(to_json(n));
  CHECK(back.same_structure(n));
  CHECK(tree_hash(back) == tree_hash(n));
}

TEST_CASE("zero-length arcs only when flagged") {
  const EdgeSpec bad[] = {{"O", "A", 0, false}};
  CHECK_THROWS_AS(RootedTree::build("O", bad), TreeError);
  const EdgeSpec ok[] = {{"O", "X", 0, true}, {"X", "A", 1, false}, {"X", "B", 2, false}};
  CHECK_NOTHROW(RootedTree::build("O", ok));
}

TEST_CASE("perfect binary trees") {
  for (int n = 1; n <= 6; ++n) {
    const auto t = perfect_binary_tree(n);
    CHECK(t.leaves().size() == (std::size_t{1} << n));
    CHECK(t.arc_count() == (std::size_t{1} << (n + 1)) - 2);
    CHECK(t.total_length() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t.is_normalized());
  }
  // B_2 with unit length: every leaf at 2/6.
  for (const auto& [leaf, d] : leaf_depths(perfect_binary_tree(2))) {
    CHECK(d == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("random binary trees are normalized") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto t = random_binary_tree(rng, {.max_leaves = 6});
    CHECK(t.is_normalized());
    CHECK(t.leaves().size() >= 1);
    CHECK(t.leaves().size() <= 6);
  }
}

TEST_CASE("property: normalize preserves leaves, depths and length; is idempotent") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(2, 14);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = sigsearch::testing::random_general_tree(rng, size(rng));
    const auto n = normalize(t);
    INFO("tree " << to_json(t));
    REQUIRE(n.is_normalized());
    CHECK(normalize(n).same_structure(n));
    CHECK(n.total_length() == doctest::Approx(t.total_length()).epsilon(1e-12));

    const auto before = leaf_depths(t);
    const auto after = leaf_depths(n);
    REQUIRE(before.size() == after.size());
    for (const auto& [leaf, d] : before) {
      REQUIRE(after.contains(leaf));
      CHECK(std::abs(after.at(leaf) - d) <= 1e-9);
    }

    for (auto v : n.preorder()) {
      double sum = 0.0;
      for (auto c : n.children(v)) sum += n.arc_length(c) + n.subtree_length(c);
      CHECK(std::abs(n.subtree_length(v) - sum) <= 1e-12);
      if (auto p = n.parent(v)) CHECK(n.depth(v) == n.depth(*p) + n.arc_length(v));
    }
  }
}

TEST_CASE("tree hash is stable and discriminating") {
  CHECK(tree_hash(example_tree()) == tree_hash(example_tree()));
  CHECK(tree_hash(example_tree()).size() == 16);
  CHECK(tree_hash(example_tree()) != tree_hash(two_arc_tree(3, 5)));
}
