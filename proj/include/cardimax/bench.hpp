#pragma once

// Runs every (instance x algorithm x strategy) combination under a time
// budget, checks that all combinations agree on each instance's optimum and
// summarizes solved counts and median speedups over the non-incremental run.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cardimax/algorithms.hpp"
#include "cardimax/wcnf.hpp"

namespace cardimax {

struct BenchConfig {
  Algorithm algorithm;
  Strategy strategy;
};

/// Every admissible combination, Fu-Malik first, strategies in column order.
inline std::vector<BenchConfig> all_admissible_configs() {
  std::vector<BenchConfig> out;
  for (Algorithm a : kAlgorithms)
    for (Strategy s : admissible_strategies(a))
      out.push_back({a, s});
  return out;
}

struct BenchRow {
  std::string instance;
  Algorithm algorithm = Algorithm::LinearUS;
  Strategy strategy = Strategy::NonIncremental;
  MaxSatStatus status = MaxSatStatus::Timeout;
  std::size_t optimum = 0;
  RunStats stats;

  bool solved() const { return status != MaxSatStatus::Timeout; }
};

struct BenchSummary {
  Algorithm algorithm = Algorithm::LinearUS;
  Strategy strategy = Strategy::NonIncremental;
  std::size_t solved = 0;
  std::size_t common = 0; // instances solved by every compared strategy of this algorithm
  std::optional<double> median_speedup;
  RunStats totals; // summed over solved runs; peak_solver_clauses is the maximum
};

class OptimumMismatch : public std::runtime_error {
public:
  OptimumMismatch(const std::string& instance, const std::string& detail)
      : std::runtime_error("optimum disagreement on " + instance + ": " + detail), instance_(instance) {}
  const std::string& instance() const { return instance_; }

private:
  std::string instance_;
};

inline double median(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;

  static constexpr const char* kCsvHeader =
      "instance,algorithm,strategy,status,time,sat_calls,conflicts,clauses_emitted,solver_instances";

  void write_csv(std::ostream& os) const {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
      os << r.instance << ',' << to_string(r.algorithm) << ',' << to_string(r.strategy) << ','
         << to_string(r.status) << ',' << std::fixed << std::setprecision(6) << r.stats.wall_seconds << ','
         << r.stats.sat_calls << ',' << r.stats.conflicts_total << ',' << r.stats.clauses_emitted << ','
         << r.stats.solver_instances << '\n';
    }
    os.unsetf(std::ios::floatfield);
  }

  const BenchSummary* find(Algorithm a, Strategy s) const {
    for (const auto& x : summary)
      if (x.algorithm == a && x.strategy == s)
        return &x;
    return nullptr;
  }

  /// Solved counts and median speedups, one row per algorithm and one
  /// column pair per strategy; "-" marks combinations that were not run.
  std::string render_table() const {
    std::ostringstream os;
    os << std::left << std::setw(10) << "" << " |";
    for (Strategy s : kStrategies)
      os << ' ' << std::setw(16) << to_string(s) << '|';
    os << '\n' << std::setw(10) << "" << " |";
    for (std::size_t i = 0; i < std::size(kStrategies); ++i)
      os << ' ' << std::right << std::setw(6) << "#inst" << std::setw(9) << "speedup" << " |" << std::left;
    os << '\n';
    for (Algorithm a : kAlgorithms) {
      os << std::left << std::setw(10) << to_string(a) << " |" << std::right;
      for (Strategy s : kStrategies) {
        const BenchSummary* x = find(a, s);
        if (!x) {
          os << std::setw(7) << "-" << std::setw(9) << "-" << " |";
          continue;
        }
        os << std::setw(7) << x->solved;
        if (x->median_speedup)
          os << std::setw(9) << std::fixed << std::setprecision(2) << *x->median_speedup;
        else
          os << std::setw(9) << "-";
        os << " |";
      }
      os << '\n';
    }
    return os.str();
  }
};

namespace detail {

inline void check_agreement(const std::vector<BenchRow>& rows) {
  std::map<std::string, const BenchRow*> reference;
  for (const auto& r : rows) {
    if (!r.solved())
      continue;
    auto [it, inserted] = reference.emplace(r.instance, &r);
    if (inserted)
      continue;
    const BenchRow& ref = *it->second;
    if (ref.status != r.status || (r.status == MaxSatStatus::Optimum && ref.optimum != r.optimum)) {
      std::ostringstream d;
      d << to_string(ref.algorithm) << '/' << to_string(ref.strategy) << " says " << to_string(ref.status) << ' '
        << ref.optimum << ", " << to_string(r.algorithm) << '/' << to_string(r.strategy) << " says "
        << to_string(r.status) << ' ' << r.optimum;
      throw OptimumMismatch(r.instance, d.str());
    }
  }
}

inline std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows, const std::vector<BenchConfig>& configs) {
  std::vector<BenchSummary> out;
  std::map<std::pair<int, int>, std::map<std::string, const BenchRow*>> by_config;
  std::vector<std::string> instances;
  for (const auto& r : rows) {
    by_config[{static_cast<int>(r.algorithm), static_cast<int>(r.strategy)}][r.instance] = &r;
    if (std::find(instances.begin(), instances.end(), r.instance) == instances.end())
      instances.push_back(r.instance);
  }

  for (Algorithm a : kAlgorithms) {
    std::vector<Strategy> compared;
    for (const auto& c : configs)
      if (c.algorithm == a)
        compared.push_back(c.strategy);
    if (compared.empty())
      continue;

    auto row_of = [&](Strategy s, const std::string& inst) -> const BenchRow* {
      auto& m = by_config[{static_cast<int>(a), static_cast<int>(s)}];
      auto it = m.find(inst);
      return it == m.end() ? nullptr : it->second;
    };

    std::vector<std::string> common;
    for (const auto& inst : instances) {
      bool all = std::all_of(compared.begin(), compared.end(), [&](Strategy s) {
        const BenchRow* r = row_of(s, inst);
        return r && r->solved();
      });
      if (all)
        common.push_back(inst);
    }
    bool has_baseline = std::find(compared.begin(), compared.end(), Strategy::NonIncremental) != compared.end();

    for (Strategy s : compared) {
      BenchSummary sum;
      sum.algorithm = a;
      sum.strategy = s;
      sum.common = common.size();
      for (const auto& inst : instances) {
        const BenchRow* r = row_of(s, inst);
        if (!r || !r->solved())
          continue;
        ++sum.solved;
        auto& t = sum.totals;
        t.sat_calls += r->stats.sat_calls;
        t.hard_check_calls += r->stats.hard_check_calls;
        t.conflicts_total += r->stats.conflicts_total;
        t.clauses_emitted += r->stats.clauses_emitted;
        t.solver_instances += r->stats.solver_instances;
        t.cores_found += r->stats.cores_found;
        t.core_size_total += r->stats.core_size_total;
        t.peak_solver_clauses = std::max(t.peak_solver_clauses, r->stats.peak_solver_clauses);
        t.wall_seconds += r->stats.wall_seconds;
      }
      if (has_baseline && !common.empty()) {
        std::vector<double> ratios;
        for (const auto& inst : common) {
          double base = std::max(row_of(Strategy::NonIncremental, inst)->stats.wall_seconds, 1e-6);
          double mine = std::max(row_of(s, inst)->stats.wall_seconds, 1e-6);
          ratios.push_back(base / mine);
        }
        sum.median_speedup = median(std::move(ratios));
      }
      out.push_back(sum);
    }
  }
  return out;
}

} // namespace detail

struct BenchInstance {
  std::string name;
  WcnfInstance instance;
};

/// `.wcnf` files of `dir` in name order, parsed.
inline std::vector<BenchInstance> load_bench_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wcnf")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<BenchInstance> out;
  for (const auto& f : files)
    out.push_back({f.filename().string(), read_wcnf_file(f.string()).instance});
  return out;
}

struct BenchOptions {
  std::chrono::duration<double> budget{60.0};
  unsigned jobs = 1;
  SolverOptions solver;
  std::function<void(const BenchRow&)> on_row; // called under the collector lock
};

/// Throws OptimumMismatch if two combinations disagree on an instance.
inline BenchReport run_bench(const std::vector<BenchInstance>& instances, const std::vector<BenchConfig>& configs,
                             const BenchOptions& opts = {}) {
  for (const auto& c : configs)
    if (!admissible(c.algorithm, c.strategy))
      throw std::invalid_argument(std::string(to_string(c.algorithm)) + " does not support " +
                                  std::string(to_string(c.strategy)));

  std::size_t total = instances.size() * configs.size();
  std::vector<BenchRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::mutex collector;

  auto worker = [&] {
    for (std::size_t task; (task = next++) < total;) {
      const auto& inst = instances[task / configs.size()];
      const auto& cfg = configs[task % configs.size()];
      MaxSatOptions mo;
      mo.solver = opts.solver;
      mo.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(opts.budget);
      auto res = solve_maxsat(inst.instance, cfg.algorithm, cfg.strategy, mo);
      BenchRow row{inst.name, cfg.algorithm, cfg.strategy, res.status, res.optimum, res.stats};
      std::lock_guard lock(collector);
      rows[task] = row;
      if (opts.on_row)
        opts.on_row(rows[task]);
    }
  };
  unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < jobs; ++i)
      pool.emplace_back(worker);
  }

  detail::check_agreement(rows);
  BenchReport report;
  report.rows = std::move(rows);
  report.summary = detail::summarize(report.rows, configs);
  return report;
}

inline BenchReport run_bench(const std::filesystem::path& dir, const std::vector<BenchConfig>& configs,
                             const BenchOptions& opts = {}) {
  return run_bench(load_bench_dir(dir), configs, opts);
}

} // namespace cardimax
