// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and suite
// sizes are pinned below; exit status is nonzero if any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cardimax/bench.hpp"
#include "cardimax/cli.hpp"
#include "cardimax/generator.hpp"
#include "cardimax/solver.hpp"
#include "cardimax/totalizer.hpp"
#include "support.hpp"

using namespace cardimax;
using namespace cardimax::testing;

namespace {

// Pinned parameters.
constexpr std::uint64_t kTinySeed = 1;
constexpr std::size_t kTinyCount = 1000;
constexpr std::uint32_t kMaxTotalizerInputs = 8;
constexpr std::size_t kScheduleCount = 200;
constexpr std::uint64_t kScheduleSeed = 3;
constexpr std::uint64_t kMediumSeed = 2026;
constexpr std::size_t kMediumCount = 50;
constexpr double kMediumBudgetSeconds = 60.0;
constexpr std::size_t kClauseGrowthMinOptimum = 5;
constexpr double kClauseGrowthFactor = 2.0;
constexpr double kMinMedianSpeedup = 1.0;
constexpr double kMinConflictShare = 0.70;
constexpr std::size_t kCoreChecks = 500;
constexpr std::uint32_t kCoreMaxVars = 20;
constexpr std::uint64_t kCoreSeed = 7;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct TinyRun {
  Algorithm algorithm;
  Strategy strategy;
  MaxSatResult result;
};

// Shared state: the tiny runs feed criteria 1, 5 and 6; the medium bench
// feeds 4 and 8.
std::vector<WcnfInstance> g_tiny;
std::vector<std::vector<TinyRun>> g_tiny_runs;
std::vector<GeneratedInstance> g_medium;
std::optional<BenchReport> g_bench;
std::string g_bench_error;

void run_tiny_suite() {
  if (!g_tiny_runs.empty())
    return;
  g_tiny = tiny_suite(kTinySeed, kTinyCount);
  for (const auto& inst : g_tiny) {
    std::vector<TinyRun> runs;
    for (Algorithm a : kAlgorithms)
      for (Strategy s : admissible_strategies(a))
        runs.push_back({a, s, solve_maxsat(inst, a, s)});
    g_tiny_runs.push_back(std::move(runs));
  }
}

void run_medium_suite() {
  if (g_bench || !g_bench_error.empty())
    return;
  g_medium = generate_instances(kMediumSeed, Profile::Medium, kMediumCount);
  std::vector<BenchInstance> instances;
  for (const auto& g : g_medium)
    instances.push_back({g.name, g.instance});
  BenchOptions opts;
  opts.budget = std::chrono::duration<double>(kMediumBudgetSeconds);
  try {
    g_bench = run_bench(instances, all_admissible_configs(), opts);
  } catch (const std::exception& e) {
    g_bench_error = e.what();
  }
}

std::string label(Algorithm a, Strategy s) {
  return std::string(to_string(a)) + "/" + std::string(to_string(s));
}

Outcome oracle_equivalence() {
  run_tiny_suite();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < g_tiny.size(); ++i) {
    const auto& inst = g_tiny[i];
    if (inst.num_vars > 12 || inst.soft.size() > 30)
      return {false, "tiny instance " + std::to_string(i) + " exceeds size limits"};
    auto expected = brute_maxsat(inst);
    for (const auto& r : g_tiny_runs[i]) {
      ++checked;
      const auto& res = r.result;
      std::string where = "instance " + std::to_string(i) + " " + label(r.algorithm, r.strategy);
      if (!expected) {
        if (res.status != MaxSatStatus::Unsatisfiable)
          return {false, where + ": expected unsatisfiable"};
        continue;
      }
      if (res.status != MaxSatStatus::Optimum || res.optimum != *expected)
        return {false, where + ": got " + std::to_string(res.optimum) + ", oracle " + std::to_string(*expected)};
      if (!satisfies_all(res.model, inst.hard) || cost(res.model, inst.soft) != res.optimum)
        return {false, where + ": model does not realize optimum"};
    }
  }
  return {true, std::to_string(g_tiny.size()) + " instances, " + std::to_string(checked) + " runs, all exact"};
}

bool clash_free_sat(Solver& s, const std::vector<Lit>& a) {
  std::set<Lit> seen(a.begin(), a.end());
  for (Lit l : a)
    if (seen.count(~l))
      return false;
  return s.solve(a).status == SolveStatus::Sat;
}

std::vector<Lit> input_lits(std::uint32_t n) {
  std::vector<Lit> out;
  for (std::uint32_t v = 1; v <= n; ++v)
    out.push_back(Lit::pos(Var{v}));
  return out;
}

Outcome totalizer_semantics() {
  std::size_t checks = 0;
  for (std::uint32_t n = 1; n <= kMaxTotalizerInputs; ++n)
    for (std::uint32_t k = 0; k <= n; ++k) {
      RecordingSink sink(n);
      auto t = TotalizerTree::build(input_lits(n), std::min(k, n - 1), sink);
      auto cmp = k < n ? t.at_most(k) : std::vector<Lit>{};
      Solver s;
      while (s.num_vars() < sink.num_vars())
        s.new_var();
      for (const auto& c : sink.clauses())
        s.add_clause(c);
      for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << n); ++pat) {
        std::vector<Lit> a = cmp;
        for (std::uint32_t v = 1; v <= n; ++v)
          a.push_back(Lit(Var{v}, (pat >> (v - 1)) & 1u));
        bool expect = static_cast<std::uint32_t>(std::popcount(pat)) <= k;
        ++checks;
        if (clash_free_sat(s, a) != expect)
          return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " pattern=" + std::to_string(pat)};
      }
    }
  return {true, std::to_string(checks) + " (n, k, pattern) checks for n <= 8"};
}

Outcome incremental_equals_scratch() {
  Rng rng(kScheduleSeed);
  std::size_t done = 0;
  while (done < kScheduleCount) {
    auto n = static_cast<std::uint32_t>(rng.range(1, kMaxTotalizerInputs));
    std::vector<std::uint32_t> schedule{static_cast<std::uint32_t>(rng.below(n))};
    while (schedule.back() + 1 < n && rng.below(4) != 0)
      schedule.push_back(schedule.back() + static_cast<std::uint32_t>(rng.range(1, 2)));
    RecordingSink inc(n);
    auto t = TotalizerTree::build(input_lits(n), schedule[0], inc);
    for (std::size_t i = 1; i < schedule.size(); ++i)
      t.raise_bound(schedule[i], inc);
    RecordingSink scratch(n);
    TotalizerTree::build(input_lits(n), schedule.back(), scratch);
    auto a = clause_set(inc.clauses());
    auto b = clause_set(scratch.clauses());
    if (a != b || inc.clauses().size() != scratch.clauses().size()) {
      std::ostringstream d;
      d << "n=" << n << " schedule=";
      for (auto k : schedule)
        d << k << ' ';
      return {false, d.str() + "differs from scratch"};
    }
    ++done;
  }
  return {true, std::to_string(done) + " sampled schedules, exact set equality"};
}

Outcome clause_growth() {
  run_medium_suite();
  if (!g_bench)
    return {false, "medium bench aborted: " + g_bench_error};
  std::map<std::string, const BenchRow*> blocking, iterative;
  for (const auto& r : g_bench->rows) {
    if (r.algorithm != Algorithm::LinearUS)
      continue;
    if (r.strategy == Strategy::Blocking)
      blocking[r.instance] = &r;
    if (r.strategy == Strategy::Iterative)
      iterative[r.instance] = &r;
  }
  std::size_t eligible = 0;
  double worst = 1e300;
  for (const auto& g : g_medium) {
    if (*g.planted_optimum < kClauseGrowthMinOptimum)
      continue;
    ++eligible;
    const BenchRow* b = blocking[g.name];
    const BenchRow* it = iterative[g.name];
    if (!b->solved() || !it->solved())
      return {false, g.name + ": linear-us blocking or iterative did not finish within budget"};
    double ratio = static_cast<double>(b->stats.clauses_emitted) / std::max<double>(1, it->stats.clauses_emitted);
    worst = std::min(worst, ratio);
    if (ratio < kClauseGrowthFactor)
      return {false, g.name + ": ratio " + std::to_string(ratio)};
  }
  if (eligible == 0)
    return {false, "no medium instance with planted optimum >= 5"};
  std::ostringstream d;
  d << eligible << " instances with optimum >= 5, minimum blocking/iterative clause ratio " << std::fixed
    << std::setprecision(2) << worst;
  return {true, d.str()};
}

Outcome solver_reuse() {
  run_tiny_suite();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < g_tiny_runs.size(); ++i)
    for (const auto& r : g_tiny_runs[i]) {
      const auto& st = r.result.stats;
      if (r.result.status != MaxSatStatus::Optimum)
        continue;
      ++checked;
      std::uint64_t expected = r.strategy == Strategy::NonIncremental ? st.sat_calls : 1;
      if (st.solver_instances != expected)
        return {false, "instance " + std::to_string(i) + " " + label(r.algorithm, r.strategy) +
                           ": solver_instances=" + std::to_string(st.solver_instances) +
                           " expected " + std::to_string(expected)};
    }
  return {true, std::to_string(checked) + " solves"};
}

Outcome iteration_counts() {
  run_tiny_suite();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < g_tiny_runs.size(); ++i)
    for (const auto& r : g_tiny_runs[i]) {
      const auto& res = r.result;
      if (res.status != MaxSatStatus::Optimum)
        continue;
      ++checked;
      std::string where = "instance " + std::to_string(i) + " " + label(r.algorithm, r.strategy);
      if (r.algorithm == Algorithm::Msu3) {
        if (res.stats.final_bound != res.optimum)
          return {false, where + ": final lambda " + std::to_string(res.stats.final_bound)};
      } else if (res.stats.sat_calls != res.optimum + 1) {
        return {false, where + ": " + std::to_string(res.stats.sat_calls) + " main calls for optimum " +
                           std::to_string(res.optimum)};
      }
    }
  return {true, std::to_string(checked) + " solves"};
}

/// Whether some assignment over 1..n satisfies `clauses` with `fixed` held.
/// Enumerates only the variables `fixed` leaves open.
bool brute_sat_fixed(std::uint32_t n, const std::vector<Clause>& clauses, const std::vector<Lit>& fixed) {
  std::uint32_t base = 0, fixed_mask = 0;
  for (Lit l : fixed) {
    std::uint32_t bit = 1u << (l.var().index - 1);
    if ((fixed_mask & bit) && (((base & bit) != 0) != l.positive()))
      return false;
    fixed_mask |= bit;
    if (l.positive())
      base |= bit;
  }
  std::vector<std::uint32_t> free_bits;
  for (std::uint32_t v = 0; v < n; ++v)
    if (!(fixed_mask & (1u << v)))
      free_bits.push_back(1u << v);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> masks;
  for (const auto& c : clauses) {
    std::uint32_t pos = 0, neg = 0;
    for (Lit l : c)
      (l.positive() ? pos : neg) |= 1u << (l.var().index - 1);
    masks.emplace_back(pos, neg);
  }
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << free_bits.size()); ++m) {
    std::uint32_t a = base;
    for (std::size_t i = 0; i < free_bits.size(); ++i)
      if ((m >> i) & 1u)
        a |= free_bits[i];
    bool ok = true;
    for (auto [pos, neg] : masks)
      if (((a & pos) | (~a & neg)) == 0) {
        ok = false;
        break;
      }
    if (ok)
      return true;
  }
  return false;
}

Outcome core_soundness() {
  Rng rng(kCoreSeed);
  std::size_t found = 0, attempts = 0;
  std::size_t core_total = 0;
  while (found < kCoreChecks) {
    ++attempts;
    auto n = static_cast<std::uint32_t>(rng.range(8, kCoreMaxVars));
    std::size_t m = rng.range(n, 3 * n);
    std::vector<Clause> clauses;
    for (std::size_t i = 0; i < m; ++i) {
      Clause c;
      std::size_t width = rng.range(2, 3);
      while (c.size() < width) {
        Var v{static_cast<std::uint32_t>(rng.range(1, n))};
        if (std::none_of(c.begin(), c.end(), [&](Lit l) { return l.var() == v; }))
          c.push_back(Lit(v, rng.coin()));
      }
      clauses.push_back(c);
    }
    Solver s;
    for (std::uint32_t v = 0; v < n; ++v)
      s.new_var();
    for (const auto& c : clauses)
      s.add_clause(c);
    if (s.solve().status != SolveStatus::Sat)
      continue; // want cores that come from the assumptions
    std::vector<Lit> assumptions;
    for (std::uint32_t v = 1; v <= n; ++v)
      if (rng.below(3) != 0)
        assumptions.push_back(Lit(Var{v}, rng.coin()));
    rng.shuffle(assumptions);
    auto r = s.solve(assumptions);
    if (r.status != SolveStatus::Unsat)
      continue;
    ++found;
    core_total += r.core.size();
    std::set<Lit> assumed(assumptions.begin(), assumptions.end());
    for (Lit l : r.core)
      if (!assumed.count(l))
        return {false, "core literal " + std::to_string(l.to_dimacs()) + " was not assumed"};
    if (r.core.empty() || brute_sat_fixed(n, clauses, r.core))
      return {false, "core " + std::to_string(found) + " is satisfiable with the permanent clauses"};
  }
  std::ostringstream d;
  d << found << " cores confirmed (" << attempts << " attempts, mean size " << std::fixed << std::setprecision(2)
    << static_cast<double>(core_total) / found << ")";
  return {true, d.str()};
}

Outcome speedup_direction() {
  run_medium_suite();
  if (!g_bench)
    return {false, "medium bench aborted: " + g_bench_error};
  const auto& report = *g_bench;
  std::ostringstream d;
  bool pass = true;
  for (Algorithm a : kAlgorithms) {
    const BenchSummary* best = nullptr;
    for (Strategy s : admissible_strategies(a)) {
      if (s == Strategy::NonIncremental)
        continue;
      const BenchSummary* x = report.find(a, s);
      if (x && x->median_speedup && (!best || *x->median_speedup > *best->median_speedup))
        best = x;
    }
    if (!best) {
      d << to_string(a) << ": no commonly solved instances; ";
      pass = false;
      continue;
    }
    // Conflict comparison over the instances every strategy of `a` solved.
    std::map<std::string, std::map<Strategy, const BenchRow*>> by_instance;
    for (const auto& r : report.rows)
      if (r.algorithm == a)
        by_instance[r.instance][r.strategy] = &r;
    std::size_t common = 0, fewer = 0;
    for (const auto& [name, rows] : by_instance) {
      bool all = std::all_of(rows.begin(), rows.end(), [](const auto& kv) { return kv.second->solved(); });
      if (!all)
        continue;
      ++common;
      if (rows.at(best->strategy)->stats.conflicts_total <= rows.at(Strategy::NonIncremental)->stats.conflicts_total)
        ++fewer;
    }
    double share = common ? static_cast<double>(fewer) / common : 0.0;
    bool ok = *best->median_speedup >= kMinMedianSpeedup && share >= kMinConflictShare;
    pass = pass && ok;
    d << to_string(a) << " best=" << to_string(best->strategy) << " median=" << std::fixed << std::setprecision(2)
      << *best->median_speedup << " conflicts<=none on " << fewer << "/" << common << "; ";
  }
  std::size_t solved_none = 0;
  for (const auto& r : report.rows)
    solved_none += r.solved() ? 0 : 1;
  d << report.rows.size() << " runs, " << solved_none << " timeouts";
  return {pass, d.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_conformance() {
  struct Case {
    std::vector<std::string> args;
    int code;
    std::string golden_out;
    std::string golden_err;
  };
  const std::string s = CARDIMAX_SAMPLES_DIR;
  const std::vector<Case> cases{
      {{s + "/forced_pair.wcnf"}, kExitOptimum, "forced_pair.out", ""},
      {{s + "/forced_pair.wcnf", "--algorithm", "linear-us", "--strategy", "blocking", "--trace"},
       kExitOptimum,
       "forced_pair_linear_blocking_trace.out",
       ""},
      {{s + "/two_conflicts.wcnf", "--algorithm", "fu-malik", "--strategy", "none"},
       kExitOptimum,
       "two_conflicts_fu_malik.out",
       ""},
      {{s + "/unsat_hard.wcnf", "--algorithm", "linear-us", "--strategy", "weakening"},
       kExitUnsatisfiable,
       "unsat_hard.out",
       ""},
      {{s + "/forced_pair.wcnf", "--algorithm", "fu-malik", "--strategy", "iterative"},
       kExitError,
       "",
       "fu_malik_iterative.err"},
  };
  const std::string golden = std::string(CARDIMAX_GOLDEN_DIR) + "/cli/";
  for (const auto& c : cases) {
    std::ostringstream out, err;
    int code = run_cli(c.args, out, err, nullptr);
    std::string name = c.golden_out.empty() ? c.golden_err : c.golden_out;
    if (code != c.code)
      return {false, name + ": exit " + std::to_string(code)};
    if (!c.golden_out.empty() && out.str() != slurp(golden + c.golden_out))
      return {false, name + ": stdout differs from golden"};
    if (!c.golden_err.empty() && err.str() != slurp(golden + c.golden_err))
      return {false, name + ": stderr differs from golden"};
  }
  // Exit 1 on error and on timeout.
  std::ostringstream out, err;
  if (run_cli({s + "/weighted.wcnf"}, out, err, nullptr) != kExitError)
    return {false, "weighted soft input did not exit 1"};
  std::ostringstream tout, terr;
  if (run_cli({s + "/pigeonhole_10_9.wcnf", "--timeout", "0.2"}, tout, terr, nullptr) != kExitError ||
      tout.str().find("s UNKNOWN\n") == std::string::npos)
    return {false, "timeout did not print s UNKNOWN with exit 1"};
  return {true, std::to_string(cases.size()) + " golden cases plus error and timeout exits"};
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle-equivalence", oracle_equivalence},
      {2, "totalizer-semantics", totalizer_semantics},
      {3, "incremental-equals-scratch", incremental_equals_scratch},
      {4, "clause-growth-separation", clause_growth},
      {5, "solver-reuse", solver_reuse},
      {6, "iteration-counts", iteration_counts},
      {7, "core-soundness", core_soundness},
      {8, "speedup-direction", speedup_direction},
      {9, "cli-conformance", cli_conformance},
  };
  bool all = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.name << ": " << o.detail << " ("
              << std::fixed << std::setprecision(1) << secs << "s)" << std::endl;
    all = all && o.pass;
  }
  if (g_bench) {
    std::cout << "\nmedium suite summary (solved / median speedup vs none):\n" << g_bench->render_table();
  }
  return all ? 0 : 1;
}
