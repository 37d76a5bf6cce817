#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace sigsearch::cli {

enum class Command { Solve, Oracle, Sweep, BnTable, Simulate };
enum class OutputFormat { Text, Json, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitVerification = 2;

struct PGrid {
  std::string start = "0.51";
  std::string stop = "1";
  std::string step = "0.01";
};

struct RunConfig {
  Command command = Command::Solve;
  std::string tree_path;
  std::string p;  ///< decimal or fraction, e.g. "2/3"
  PGrid grid;
  std::size_t n = 1'000'000;
  std::uint64_t seed = 1;
  std::optional<OutputFormat> format;  ///< per-command default when unset
  std::size_t cap = 8;
  std::string out_path;

  // oracle --random
  std::size_t random_trees = 0;
  std::size_t max_leaves = 4;

  // bn-table
  int n_max = 10;
  double scale = 1.0;

  // simulate
  std::string policy_path;
  std::string play_log_path;
  std::string degrade_to;
};

/// Parses "0.9", "1", "2/3", "1e-1". Fractions are split into exact integer
/// (or decimal) parts before the single division. Throws std::invalid_argument.
double parse_number(std::string_view text);

/// parse_number plus the 1/2 < p <= 1 domain check.
double parse_probability(std::string_view text);

std::optional<OutputFormat> parse_format(std::string_view text);

/// Runs one command. Output goes to `out` unless config.out_path is set;
/// diagnostics go to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace sigsearch::cli
