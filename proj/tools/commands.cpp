#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "sigsearch/evaluator.hpp"
#include "sigsearch/generators.hpp"
#include "sigsearch/oracle.hpp"
#include "sigsearch/simulator.hpp"
#include "sigsearch/solver.hpp"
#include "sigsearch/tree.hpp"

namespace sigsearch::cli {

using nlohmann::ordered_json;

namespace {

/// Raised for failed cross-checks; maps to exit code 2.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

// Round to 12 significant digits so JSON output matches the text/CSV output.
double json_num(double x) { return std::stod(num(x)); }

double parse_plain(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void print_csv_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

OutputFormat format_or(const RunConfig& c, OutputFormat fallback) { return c.format.value_or(fallback); }

RootedTree load_normalized(const RunConfig& c) {
  if (c.tree_path.empty()) throw std::invalid_argument("--tree is required");
  return normalize(load_tree(c.tree_path));
}

// ---------------------------------------------------------------- solve

int cmd_solve(const RunConfig& c, std::ostream& out) {
  const auto tree = load_normalized(c);
  const SignalAccuracy acc(parse_probability(c.p));
  const Solution sol = solve(tree, acc);

  switch (format_or(c, OutputFormat::Text)) {
    case OutputFormat::Text: {
      out << "p = " << num(acc.p()) << '\n';
      out << "V = " << num(sol.value) << '\n';
      out << "D = " << num(sol.mean_depth) << '\n';
      out << "mu = " << num(tree.total_length()) << '\n';
      out << "leaf distribution:\n";
      for (auto v : tree.leaves()) {
        out << "  " << tree.name(v) << "  depth " << num(tree.depth(v)) << "  lambda " << num(sol.lambda_bar.at(v))
            << '\n';
      }
      out << "branch nodes:\n";
      for (auto v : tree.branch_nodes()) {
        const auto& a = sol.at(v);
        out << "  " << tree.name(v) << "  favored " << tree.name(*a.favored) << "  beta " << num(a.beta) << '\n';
      }
      break;
    }
    case OutputFormat::Json: {
      ordered_json lambda = ordered_json::object();
      for (auto v : tree.leaves()) lambda[tree.name(v)] = json_num(sol.lambda_bar.at(v));
      ordered_json branches = ordered_json::object();
      for (auto v : tree.branch_nodes()) {
        const auto& a = sol.at(v);
        branches[tree.name(v)] = {{"favored", tree.name(*a.favored)}, {"beta", json_num(a.beta)}};
      }
      ordered_json doc{{"tree_hash", tree_hash(tree)},
                       {"p", json_num(acc.p())},
                       {"value", json_num(sol.value)},
                       {"mean_depth", json_num(sol.mean_depth)},
                       {"mu", json_num(tree.total_length())},
                       {"lambda_bar", std::move(lambda)},
                       {"branches", std::move(branches)}};
      out << doc.dump() << '\n';
      break;
    }
    case OutputFormat::Csv: {
      print_csv_header(out, {"node", "kind", "depth", "mu", "mean_depth", "value", "lambda", "favored", "beta"});
      for (auto v : tree.preorder()) {
        const auto& a = sol.at(v);
        const char* kind = tree.is_leaf(v) ? "leaf" : tree.is_branch(v) ? "branch" : "root";
        out << tree.name(v) << ',' << kind << ',' << num(tree.depth(v)) << ',' << num(a.mu) << ','
            << num(a.mean_depth) << ',' << num(a.value) << ',';
        if (tree.is_leaf(v)) out << num(sol.lambda_bar.at(v));
        out << ',';
        if (a.favored) out << tree.name(*a.favored) << ',' << num(a.beta);
        else out << ',';
        out << '\n';
      }
      break;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.random_trees == 0) {
    const auto tree = load_normalized(c);
    const SignalAccuracy acc(parse_probability(c.p));
    const auto report = cross_validate(tree, acc, c.cap);
    out << to_json(report) << '\n';
    if (!report.pass) {
      for (const auto& f : report.failures) err << "oracle: " << f << '\n';
      return kExitVerification;
    }
    return kExitOk;
  }

  Rng rng(c.seed);
  RandomTreeOptions options;
  options.max_leaves = c.max_leaves;
  std::uniform_real_distribution<double> p_dist(0.5, 1.0);
  ordered_json reports = ordered_json::array();
  std::size_t passed = 0;
  double max_diff = 0.0;
  for (std::size_t k = 0; k < c.random_trees; ++k) {
    const auto tree = random_binary_tree(rng, options);
    double p = p_dist(rng);
    while (p <= 0.5) p = p_dist(rng);
    const auto report = cross_validate(tree, SignalAccuracy(p), c.cap);
    passed += report.pass ? 1 : 0;
    max_diff = std::max(max_diff, std::abs(report.lp_value - report.recursion_value));
    reports.push_back(ordered_json::parse(to_json(report)));
  }
  ordered_json doc{{"seed", c.seed},
                   {"rng", kRngName},
                   {"trees", c.random_trees},
                   {"max_leaves", c.max_leaves},
                   {"passed", passed},
                   {"max_abs_difference", max_diff},
                   {"reports", std::move(reports)}};
  out << doc.dump() << '\n';
  return passed == c.random_trees ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------- sweep

std::vector<double> expand_grid(const PGrid& g) {
  const double start = parse_number(g.start);
  const double stop = parse_number(g.stop);
  const double step = parse_number(g.step);
  if (!(step > 0.0)) throw std::invalid_argument("p-grid step must be positive");
  if (stop < start) throw std::invalid_argument("p-grid is empty (stop < start)");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> ps;
  for (std::size_t i = 0; i < count; ++i) {
    double p = start + static_cast<double>(i) * step;
    if (p > 1.0 && p - 1.0 < 1e-12) p = 1.0;
    ps.push_back(SignalAccuracy(p).p());
  }
  return ps;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto tree = load_normalized(c);
  const auto ps = expand_grid(c.grid);
  const auto branches = tree.branch_nodes();
  const auto leaves = tree.leaves();

  if (format_or(c, OutputFormat::Csv) == OutputFormat::Json) {
    ordered_json rows = ordered_json::array();
    for (double p : ps) {
      const auto sol = solve(tree, SignalAccuracy(p));
      ordered_json beta = ordered_json::object();
      for (auto v : branches) beta[tree.name(v)] = json_num(sol.at(v).beta);
      ordered_json lambda = ordered_json::object();
      for (auto v : leaves) lambda[tree.name(v)] = json_num(sol.lambda_bar.at(v));
      rows.push_back({{"p", json_num(p)},
                      {"value", json_num(sol.value)},
                      {"mean_depth", json_num(sol.mean_depth)},
                      {"beta", std::move(beta)},
                      {"lambda", std::move(lambda)}});
    }
    out << rows.dump() << '\n';
    return kExitOk;
  }

  std::vector<std::string> header{"p", "value", "mean_depth"};
  for (auto v : branches) header.push_back("beta_" + tree.name(v));
  for (auto v : leaves) header.push_back("lambda_" + tree.name(v));
  print_csv_header(out, header);
  for (double p : ps) {
    const auto sol = solve(tree, SignalAccuracy(p));
    out << num(p) << ',' << num(sol.value) << ',' << num(sol.mean_depth);
    for (auto v : branches) out << ',' << num(sol.at(v).beta);
    for (auto v : leaves) out << ',' << num(sol.lambda_bar.at(v));
    out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bn-table

int cmd_bn_table(const RunConfig& c, std::ostream& out) {
  if (c.n_max < 1 || c.n_max > 20) throw std::invalid_argument("--n-max must be in [1, 20]");
  if (!(c.scale > 0.0)) throw std::invalid_argument("--scale must be positive");
  const SignalAccuracy acc(parse_probability(c.p));

  struct Row {
    int n;
    double leaves, mu, depth, value, solve_value;
  };
  std::vector<Row> rows;
  for (int n = 1; n <= c.n_max; ++n) {
    const double arcs = std::ldexp(1.0, n + 1) - 2.0;
    const double depth = c.scale * n / arcs;
    const double value = 2.0 * acc.q() * c.scale + acc.edge() * depth;
    const auto tree = perfect_binary_tree(n, c.scale);
    const double solved = solve(tree, acc).value;
    if (std::abs(solved - value) > kTolerance * std::max(1.0, value)) {
      throw VerificationFailure("B_" + std::to_string(n) + ": closed form " + num(value) + " != solve() " +
                                num(solved));
    }
    rows.push_back({n, std::ldexp(1.0, n), c.scale, depth, value, solved});
  }

  if (format_or(c, OutputFormat::Csv) == OutputFormat::Json) {
    ordered_json doc = ordered_json::array();
    for (const auto& r : rows) {
      doc.push_back({{"n", r.n},
                     {"leaves", r.leaves},
                     {"mu", json_num(r.mu)},
                     {"depth", json_num(r.depth)},
                     {"value", json_num(r.value)},
                     {"solve_value", json_num(r.solve_value)}});
    }
    out << doc.dump() << '\n';
  } else {
    print_csv_header(out, {"n", "leaves", "mu", "depth", "value", "solve_value"});
    for (const auto& r : rows) {
      out << r.n << ',' << num(r.leaves) << ',' << num(r.mu) << ',' << num(r.depth) << ',' << num(r.value) << ','
          << num(r.solve_value) << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const auto tree = load_normalized(c);
  const SignalAccuracy acc(parse_probability(c.p));
  if (c.n < 1) throw std::invalid_argument("--n must be at least 1");

  SimulationOptions options;
  SignalAccuracy policy_acc = acc;
  if (!c.degrade_to.empty()) {
    options.degrade_to = parse_probability(c.degrade_to);
    degrade_keep_probability(acc.p(), *options.degrade_to);
    policy_acc = SignalAccuracy(*options.degrade_to);
  }

  // The Hider plays the optimal distribution of the game the Searcher
  // effectively plays; the Searcher uses the solved or supplied policy.
  const Solution sol = solve(tree, policy_acc);
  const SearcherPolicy policy =
      c.policy_path.empty() ? sol.policy(tree) : parse_policy(tree, read_file(c.policy_path));
  const double exact = hider_expected_time(tree, policy, sol.lambda_bar, policy_acc);

  const McEstimate est = monte_carlo_value(tree, policy, sol.lambda_bar, acc, c.n, c.seed, options);
  const double z = est.std_error > 0.0 ? (est.mean - exact) / est.std_error : 0.0;

  if (!c.play_log_path.empty()) {
    std::ofstream log(c.play_log_path);
    if (!log) throw std::invalid_argument("cannot write play log '" + c.play_log_path + "'");
    Rng rng(c.seed);
    std::vector<NodeId> leaves;
    std::vector<double> weights;
    for (const auto& [leaf, w] : sol.lambda_bar) {
      leaves.push_back(leaf);
      weights.push_back(w);
    }
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    for (std::size_t k = 0; k < c.n; ++k) {
      const NodeId hider = leaves[pick(rng)];
      log << to_json_line(tree, simulate_play(tree, policy, hider, acc, rng, options)) << '\n';
    }
  }

  if (format_or(c, OutputFormat::Text) == OutputFormat::Json) {
    ordered_json doc{{"n", est.n},
                     {"seed", est.seed},
                     {"stream", est.stream},
                     {"p", json_num(acc.p())},
                     {"mean", json_num(est.mean)},
                     {"std_error", json_num(est.std_error)},
                     {"exact", json_num(exact)},
                     {"z", json_num(z)}};
    if (options.degrade_to) doc["degrade_to"] = json_num(*options.degrade_to);
    out << doc.dump() << '\n';
  } else {
    out << "plays = " << est.n << '\n';
    out << "seed = " << est.seed << " (" << est.stream << ")\n";
    out << "p = " << num(acc.p()) << '\n';
    if (options.degrade_to) out << "degraded to p' = " << num(*options.degrade_to) << '\n';
    out << "estimate = " << num(est.mean) << '\n';
    out << "std_error = " << num(est.std_error) << '\n';
    out << "exact = " << num(exact) << '\n';
    out << "z = " << num(z) << '\n';
  }
  return kExitOk;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  switch (c.command) {
    case Command::Solve: return cmd_solve(c, out);
    case Command::Oracle: return cmd_oracle(c, out, err);
    case Command::Sweep: return cmd_sweep(c, out);
    case Command::BnTable: return cmd_bn_table(c, out);
    case Command::Simulate: return cmd_simulate(c, out);
  }
  return kExitValidation;
}

}  // namespace

double parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty number");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain(text);
  const double numerator = parse_plain(trim(text.substr(0, slash)));
  const double denominator = parse_plain(trim(text.substr(slash + 1)));
  if (denominator == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return numerator / denominator;
}

double parse_probability(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("--p is required");
  const auto slash = text.find('/');
  bool above_half;
  double p;
  if (slash == std::string_view::npos) {
    p = parse_plain(text);
    above_half = p > 0.5;
  } else {
    const double a = parse_plain(trim(text.substr(0, slash)));
    const double b = parse_plain(trim(text.substr(slash + 1)));
    if (!(b > 0.0)) throw std::invalid_argument("denominator must be positive in '" + std::string(text) + "'");
    // 2a > b compared before dividing, so "1/2" is rejected exactly.
    above_half = 2.0 * a > b;
    p = a / b;
  }
  if (!above_half) throw std::invalid_argument("p must exceed 1/2 (got " + std::string(text) + ")");
  if (p > 1.0) throw std::invalid_argument("p must not exceed 1 (got " + std::string(text) + ")");
  return p;
}

std::optional<OutputFormat> parse_format(std::string_view text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  return std::nullopt;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.out_path.empty()) return dispatch(config, out, err);
    std::ostringstream buffer;
    const int code = dispatch(config, buffer, err);
    std::ofstream file(config.out_path);
    if (!file) throw std::invalid_argument("cannot write '" + config.out_path + "'");
    file << buffer.str();
    return code;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const TreeError& e) {
    err << "error: tree " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace sigsearch::cli
