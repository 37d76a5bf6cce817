#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace sigsearch::cli;

int main(int argc, char** argv) {
  CLI::App app{"sigsearch: search games on trees with noisy branch signals"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--out", config.out_path, "Write output to this file instead of stdout");
  };

  auto* solve = app.add_subcommand("solve", "Solve the game on a tree: value, Hider distribution, Searcher biases");
  solve->add_option("--tree", config.tree_path, "Tree file (JSON)")->required();
  solve->add_option("--p", config.p, "Signal accuracy, e.g. 0.9 or 2/3")->required();
  add_common(solve);

  auto* oracle = app.add_subcommand("oracle", "Cross-check the recursion against the full matrix game (LP)");
  oracle->add_option("--tree", config.tree_path, "Tree file (JSON)");
  oracle->add_option("--p", config.p, "Signal accuracy");
  oracle->add_option("--random", config.random_trees, "Check this many random trees instead of --tree");
  oracle->add_option("--max-leaves", config.max_leaves, "Leaf cap for random trees")->capture_default_str();
  oracle->add_option("--seed", config.seed, "Seed for random trees")->capture_default_str();
  oracle->add_option("--cap", config.cap, "Maximum number of branch nodes to enumerate")->capture_default_str();
  add_common(oracle);

  auto* sweep = app.add_subcommand("sweep", "Solve over a grid of p values (CSV)");
  sweep->add_option("--tree", config.tree_path, "Tree file (JSON)")->required();
  sweep->add_option("--p-start", config.grid.start, "First p")->capture_default_str();
  sweep->add_option("--p-stop", config.grid.stop, "Last p (inclusive)")->capture_default_str();
  sweep->add_option("--p-step", config.grid.step, "Grid step")->capture_default_str();
  add_common(sweep);

  auto* bn = app.add_subcommand("bn-table", "Values on the perfect binary trees B_1..B_n (CSV)");
  bn->add_option("--n-max", config.n_max, "Largest n")->capture_default_str();
  bn->add_option("--p", config.p, "Signal accuracy")->required();
  bn->add_option("--scale", config.scale, "Total length of each tree")->capture_default_str();
  add_common(bn);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the expected capture time");
  simulate->add_option("--tree", config.tree_path, "Tree file (JSON)")->required();
  simulate->add_option("--p", config.p, "Signal accuracy")->required();
  simulate->add_option("--n", config.n, "Number of plays")->capture_default_str();
  simulate->add_option("--seed", config.seed, "RNG seed (mt19937_64)")->capture_default_str();
  simulate->add_option("--policy", config.policy_path, "Searcher policy JSON (default: the optimal policy)");
  simulate->add_option("--play-log", config.play_log_path, "Write every play as JSON lines to this file");
  simulate->add_option("--degrade-to", config.degrade_to, "Degrade each signal to this accuracy");
  add_common(simulate);

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(solve)) config.command = Command::Solve;
  else if (app.got_subcommand(oracle)) config.command = Command::Oracle;
  else if (app.got_subcommand(sweep)) config.command = Command::Sweep;
  else if (app.got_subcommand(bn)) config.command = Command::BnTable;
  else config.command = Command::Simulate;

  if (!format.empty()) config.format = parse_format(format);

  return run(config, std::cout, std::cerr);
}
