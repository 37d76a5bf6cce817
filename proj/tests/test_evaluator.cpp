#include <random>

#include "doctest.h"
#include "sigsearch/evaluator.hpp"
#include "sigsearch/generators.hpp"
#include "support.hpp"

using namespace sigsearch;
using sigsearch::testing::example_tree;
using sigsearch::testing::single_arc_tree;

namespace {

const SignalAccuracy kTwoThirds(2.0 / 3.0);
constexpr double kExampleValue = 223.0 / 28;

}  // namespace

TEST_CASE("capture times under the optimal policy on the example tree") {
  const auto t = example_tree();
  const auto s = solve(t, kTwoThirds);
  const auto policy = s.policy(t);

  // R: 4 + (111/112)(1/3) 12;  L2: 4 + (19/56) 8 + (5/16) 4.
  CHECK(std::abs(expected_capture_time(t, policy, t.id("R"), kTwoThirds) - kExampleValue) <= 1e-12);
  CHECK(std::abs(4.0 + (111.0 / 112) * (1.0 / 3) * 12 - kExampleValue) <= 1e-12);
  CHECK(std::abs(expected_capture_time(t, policy, t.id("L2"), kTwoThirds) - kExampleValue) <= 1e-12);
  CHECK(std::abs(4.0 + (19.0 / 56) * 8 + (5.0 / 16) * 4 - kExampleValue) <= 1e-12);
  CHECK(std::abs(expected_capture_time(t, policy, t.id("L1"), kTwoThirds) - kExampleValue) <= 1e-12);

  const auto best = hider_best_response(t, policy, kTwoThirds);
  CHECK(std::abs(best.time - kExampleValue) <= 1e-12);
  CHECK(t.name(best.leaf) == "L1");  // all tie; lexicographically first

  CHECK(std::abs(hider_expected_time(t, policy, s.lambda_bar, kTwoThirds) - kExampleValue) <= 1e-12);
  CHECK(std::abs(hider_expected_time(t, policy, {{t.id("L1"), 1.0}}, kTwoThirds) - kExampleValue) <= 1e-12);
}

TEST_CASE("always following at the root is exploitable") {
  const auto t = example_tree();
  auto policy = solve(t, kTwoThirds).policy(t);
  policy.set(t.root(), {t.id("R"), 0.0});
  const auto best = hider_best_response(t, policy, kTwoThirds);
  // Exact: R -> 8, L1 = L2 -> 95/12.
  CHECK(t.name(best.leaf) == "R");
  CHECK(std::abs(best.time - 8.0) <= 1e-12);
  CHECK(best.time > kExampleValue);
  CHECK(std::abs(expected_capture_time(t, policy, t.id("L1"), kTwoThirds) - 95.0 / 12) <= 1e-12);
}

TEST_CASE("two-arc: always searching the long arc first") {
  const auto t = two_arc_tree(3, 5);
  SearcherPolicy policy(t);
  policy.set(t.root(), {t.id("B"), 1.0});
  const auto best = hider_best_response(t, policy, kTwoThirds);
  CHECK(t.name(best.leaf) == "A");
  CHECK(best.time == doctest::Approx(13.0));
}

TEST_CASE("single arc: any policy, any distribution") {
  const auto t = single_arc_tree(7);
  const SearcherPolicy policy(t);
  CHECK(expected_capture_time(t, policy, t.id("A"), SignalAccuracy(0.9)) == 7.0);
  CHECK(hider_expected_time(t, policy, {{t.id("A"), 1.0}}, SignalAccuracy(0.6)) == 7.0);
}

TEST_CASE("evaluation errors") {
  const auto t = example_tree();
  const SearcherPolicy incomplete(t);
  CHECK_THROWS_AS(expected_capture_time(t, incomplete, t.id("R"), kTwoThirds), std::invalid_argument);
  const auto policy = solve(t, kTwoThirds).policy(t);
  CHECK_THROWS_AS(expected_capture_time(t, policy, t.id("A"), kTwoThirds), std::invalid_argument);
  CHECK_THROWS_AS(hider_expected_time(t, policy, {{t.id("R"), 0.5}}, kTwoThirds), std::invalid_argument);
  CHECK_THROWS_AS(hider_expected_time(t, policy, {{t.id("A"), 1.0}}, kTwoThirds), std::invalid_argument);
  CHECK_THROWS_AS(hider_expected_time(t, policy, {{t.id("R"), 1.5}, {t.id("L1"), -0.5}}, kTwoThirds),
                  std::invalid_argument);

  auto bad_child = policy;
  bad_child.set(t.root(), {t.id("L1"), 0.1});
  CHECK_THROWS_AS(bad_child.validate(t), std::invalid_argument);
  auto bad_beta = policy;
  bad_beta.set(t.root(), {t.id("R"), 1.5});
  CHECK_THROWS_AS(bad_beta.validate(t), std::invalid_argument);
  // Betas above 1/2 are fine for evaluation.
  auto big_beta = policy;
  big_beta.set(t.root(), {t.id("R"), 0.9});
  CHECK_NOTHROW(expected_capture_time(t, big_beta, t.id("R"), kTwoThirds));
}

TEST_CASE("node matrix entries") {
  const auto m = node_matrix(5, 3, 5, 3, kTwoThirds);
  CHECK(m(0, NodeColumn::AlwaysFirst) == doctest::Approx(5));
  CHECK(m(0, NodeColumn::AlwaysSecond) == doctest::Approx(11));
  CHECK(m(0, NodeColumn::Follow) == doctest::Approx(7));
  CHECK(m(0, NodeColumn::Opposite) == doctest::Approx(9));
  CHECK(m(1, NodeColumn::AlwaysFirst) == doctest::Approx(13));
  CHECK(m(1, NodeColumn::AlwaysSecond) == doctest::Approx(3));
  CHECK(m(1, NodeColumn::Follow) == doctest::Approx(19.0 / 3));
  CHECK(m(1, NodeColumn::Opposite) == doctest::Approx(29.0 / 3));

  const auto perfect = node_matrix(5, 3, 5, 3, SignalAccuracy(1.0));
  CHECK(perfect.entries[0] == std::array<double, 4>{5, 11, 5, 11});
  CHECK(perfect.entries[1] == std::array<double, 4>{13, 3, 3, 13});
}

TEST_CASE("property: node matrix dominance and payoff-line geometry") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> pd(0.5, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double p = pd(rng);
    if (p <= 0.5) continue;
    const SignalAccuracy acc(p);
    const double q = acc.q();
    // Random branch pair: Vi in [Di, mui] comes from a real subtree game.
    const auto t1 = random_binary_tree(rng, {.max_leaves = 3});
    const auto t2 = random_binary_tree(rng, {.max_leaves = 3});
    const auto s1 = solve(t1, acc);
    const auto s2 = solve(t2, acc);
    double mu1 = t1.total_length(), mu2 = t2.total_length();
    double v1 = s1.value, v2 = s2.value, d1 = s1.mean_depth, d2 = s2.mean_depth;
    if (d1 < d2) {
      std::swap(mu1, mu2);
      std::swap(v1, v2);
      std::swap(d1, d2);
    }
    const auto m = node_matrix(mu1, mu2, v1, v2, acc);

    const double gap0 = m(0, NodeColumn::Opposite) - m(0, NodeColumn::Follow);
    const double gap1 = m(1, NodeColumn::Opposite) - m(1, NodeColumn::Follow);
    CHECK(std::abs(gap0 - 2 * mu2 * (2 * p - 1)) <= 1e-12 * (1 + mu2));
    CHECK(std::abs(gap1 - 2 * mu1 * (2 * p - 1)) <= 1e-12 * (1 + mu1));
    CHECK(gap0 > 0.0);
    CHECK(gap1 > 0.0);

    // T(x) = x * row0 + (1 - x) * row1; slope = row0 - row1.
    auto slope = [&](NodeColumn c) { return m(0, c) - m(1, c); };
    CHECK(slope(NodeColumn::AlwaysFirst) < 0.0);
    CHECK(slope(NodeColumn::AlwaysSecond) > 0.0);
    CHECK(slope(NodeColumn::Follow) >= -1e-12);
    CHECK(std::abs(slope(NodeColumn::Follow) - (p - q) * (d1 - d2)) <= 1e-9);

    const double xbar = mu1 / (mu1 + mu2);
    auto line = [&](NodeColumn c, double x) { return x * m(0, c) + (1 - x) * m(1, c); };
    CHECK(std::abs(line(NodeColumn::AlwaysFirst, xbar) - line(NodeColumn::AlwaysSecond, xbar)) <= 1e-9);
    const double gap = line(NodeColumn::AlwaysSecond, xbar) - line(NodeColumn::Follow, xbar);
    CHECK(std::abs(gap - 2 * mu1 * mu2 * (1 - 2 * q) / (mu1 + mu2)) <= 1e-9);

    // [1,1] and follow cross at x* = p mu1 / (p mu1 + q mu2) at height V.
    const double x_star = p * mu1 / (p * mu1 + q * mu2);
    CHECK(std::abs(line(NodeColumn::AlwaysFirst, x_star) - line(NodeColumn::Follow, x_star)) <= 1e-9);
    const double d = (p * mu1 * d1 + q * mu2 * d2) / (p * mu1 + q * mu2);
    CHECK(std::abs(line(NodeColumn::AlwaysFirst, x_star) - (2 * q * (mu1 + mu2) + (p - q) * d)) <= 1e-9);
  }
}

TEST_CASE("indifference holds for the optimal policy") {
  const auto t = example_tree();
  const auto report = verify_indifference(t, solve(t, kTwoThirds), kTwoThirds);
  CHECK(report.pass);
  CHECK(report.max_deviation <= 1e-12);

  const auto b3 = perfect_binary_tree(3);
  const SignalAccuracy acc(0.9);
  CHECK(verify_indifference(b3, solve(b3, acc), acc).pass);
}

TEST_CASE("indifference fails for a perturbed policy and names a leaf") {
  const auto t = example_tree();
  const auto s = solve(t, kTwoThirds);
  auto policy = s.policy(t);
  policy.set(t.root(), {t.id("R"), 1.0 / 112 + 0.05});
  const auto report = verify_indifference(t, s, policy, kTwoThirds);
  CHECK_FALSE(report.pass);
  REQUIRE_FALSE(report.violations.empty());
  bool named_l1 = false;
  for (const auto& v : report.violations) {
    if (t.name(v.node) == "L1") {
      named_l1 = true;
      CHECK(std::abs(v.observed - 3457.0 / 420) <= 1e-12);
    }
  }
  CHECK(named_l1);
}

TEST_CASE("property: the game value bounds every policy and every Hider reply") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = random_binary_tree(rng, {.max_leaves = 6});
    const SignalAccuracy acc(0.5 + 0.5 * std::max(unit(rng), 1e-6));
    const auto s = solve(t, acc);
    CHECK(verify_indifference(t, s, acc).pass);

    SearcherPolicy random_policy(t);
    for (auto v : t.branch_nodes()) {
      const auto kids = t.children(v);
      random_policy.set(v, {kids[unit(rng) < 0.5 ? 0 : 1], unit(rng)});
    }
    CHECK(hider_best_response(t, random_policy, acc).time >= s.value - 1e-12);
    CHECK(hider_expected_time(t, random_policy, s.lambda_bar, acc) >= s.value - 1e-12);
  }
}
