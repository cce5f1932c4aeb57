#pragma once

// Command-line front end speaking the MaxSAT Evaluation line protocol:
//   c <comment>   o <cost>   s <status>   v <literals>
// Exit codes: 0 optimum, 20 unsatisfiable, 1 error or timeout.

#include <chrono>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cardimax/algorithms.hpp"
#include "cardimax/wcnf.hpp"

namespace cardimax {

inline constexpr int kExitOptimum = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnsatisfiable = 20;

/// One line per algorithm listing the strategies it accepts.
inline std::string applicability_matrix() {
  std::string out;
  for (Algorithm a : kAlgorithms) {
    out += "  ";
    out += to_string(a);
    out += ':';
    for (Strategy s : admissible_strategies(a)) {
      out += ' ';
      out += to_string(s);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline void print_stats(std::ostream& out, const RunStats& s) {
  out << "c stats sat_calls=" << s.sat_calls << " hard_check_calls=" << s.hard_check_calls
      << " conflicts=" << s.conflicts_total << " clauses_emitted=" << s.clauses_emitted
      << " solver_instances=" << s.solver_instances << " cores=" << s.cores_found
      << " core_size_total=" << s.core_size_total << " peak_solver_clauses=" << s.peak_solver_clauses
      << " final_bound=" << s.final_bound << '\n';
  out << "c time " << s.wall_seconds << '\n';
}

} // namespace detail

/// `args` excludes the program name. `env_seed` stands in for CARDIMAX_SEED;
/// an explicit --seed wins over it.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   const char* env_seed = std::getenv("CARDIMAX_SEED")) {
  CLI::App app{"Partial MaxSAT solver with incremental cardinality encodings", "cardimax"};
  std::string input;
  std::string algorithm_name = "msu3";
  std::string strategy_name = "iterative";
  double timeout = 0.0;
  bool stats = false;
  bool trace = false;
  std::uint64_t seed = 0;
  app.add_option("input", input, "WCNF file")->required();
  app.add_option("--algorithm", algorithm_name, "linear-us | fu-malik | msu3")->capture_default_str();
  app.add_option("--strategy", strategy_name, "none | blocking | weakening | iterative")->capture_default_str();
  app.add_option("--timeout", timeout, "wall-clock limit in seconds (0: none)")->check(CLI::NonNegativeNumber);
  app.add_flag("--stats", stats, "print run statistics as comment lines");
  app.add_flag("--trace", trace, "print one comment line per SAT call");
  auto* seed_opt = app.add_option("--seed", seed, "solver seed (overrides CARDIMAX_SEED)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOptimum;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitError;
  }

  if (seed_opt->count() == 0 && env_seed && *env_seed) {
    try {
      seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      err << "usage error: CARDIMAX_SEED is not an unsigned integer: " << env_seed << '\n';
      return kExitError;
    }
  }

  auto algorithm = parse_algorithm(algorithm_name);
  auto strategy = parse_strategy(strategy_name);
  if (!algorithm || !strategy) {
    err << "usage error: unknown " << (algorithm ? "strategy '" + strategy_name : "algorithm '" + algorithm_name)
        << "'\n";
    return kExitError;
  }
  if (!admissible(*algorithm, *strategy)) {
    err << "usage error: " << algorithm_name << " cannot be combined with the " << strategy_name
        << " strategy; applicability matrix:\n"
        << applicability_matrix();
    return kExitError;
  }

  WcnfDocument doc;
  try {
    doc = read_wcnf_file(input);
  } catch (const ParseError& e) {
    err << "error: " << input << ": " << e.what() << '\n';
    out << "s UNKNOWN\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    out << "s UNKNOWN\n";
    return kExitError;
  }
  const WcnfInstance& inst = doc.instance;

  out << "c cardimax algorithm=" << algorithm_name << " strategy=" << strategy_name << " seed=" << seed;
  if (timeout > 0)
    out << " timeout=" << timeout;
  out << '\n';
  out << "c instance vars=" << inst.num_vars << " hard=" << inst.hard.size() << " soft=" << inst.soft.size() << '\n';

  MaxSatOptions opts;
  opts.solver.seed = seed;
  if (timeout > 0)
    opts.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout));
  if (trace)
    opts.on_iteration = [&out](const IterationTrace& t) { out << "c " << to_string(t) << '\n'; };

  MaxSatResult res = solve_maxsat(inst, *algorithm, *strategy, opts);
  if (stats)
    detail::print_stats(out, res.stats);

  switch (res.status) {
  case MaxSatStatus::Optimum: {
    out << "o " << res.optimum << '\n';
    out << "s OPTIMUM FOUND\n";
    out << 'v';
    for (std::uint32_t v = 1; v <= inst.num_vars; ++v)
      out << ' ' << (res.model.value(Var{v}) ? "" : "-") << v;
    out << '\n';
    return kExitOptimum;
  }
  case MaxSatStatus::Unsatisfiable:
    out << "s UNSATISFIABLE\n";
    return kExitUnsatisfiable;
  case MaxSatStatus::Timeout:
    break;
  }
  out << "s UNKNOWN\n";
  return kExitError;
}

} // namespace cardimax
