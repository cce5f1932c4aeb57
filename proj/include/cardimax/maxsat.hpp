#pragma once

// Shared types for the MaxSAT drivers and the solver/formula bookkeeping
// they have in common.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cardimax/sink.hpp"
#include "cardimax/solver.hpp"
#include "cardimax/totalizer.hpp"
#include "cardimax/types.hpp"

namespace cardimax {

enum class Algorithm { LinearUS, FuMalik, Msu3 };

/// How the cardinality constraint is carried from one SAT call to the next.
enum class Strategy { NonIncremental, Blocking, Weakening, Iterative };

inline constexpr Algorithm kAlgorithms[] = {Algorithm::FuMalik, Algorithm::LinearUS, Algorithm::Msu3};
inline constexpr Strategy kStrategies[] = {Strategy::NonIncremental, Strategy::Blocking, Strategy::Weakening,
                                           Strategy::Iterative};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::LinearUS: return "linear-us";
  case Algorithm::FuMalik: return "fu-malik";
  case Algorithm::Msu3: return "msu3";
  }
  return "?";
}

inline std::string_view to_string(Strategy s) {
  switch (s) {
  case Strategy::NonIncremental: return "none";
  case Strategy::Blocking: return "blocking";
  case Strategy::Weakening: return "weakening";
  case Strategy::Iterative: return "iterative";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : kAlgorithms)
    if (to_string(a) == s)
      return a;
  return std::nullopt;
}

inline std::optional<Strategy> parse_strategy(std::string_view s) {
  for (Strategy st : kStrategies)
    if (to_string(st) == s)
      return st;
  return std::nullopt;
}

/// Fu-Malik only adds at-most-one constraints and rewrites soft clauses, so
/// there is no single growing cardinality constraint to weaken or extend.
constexpr bool admissible(Algorithm a, Strategy s) {
  if (a == Algorithm::FuMalik)
    return s == Strategy::NonIncremental || s == Strategy::Blocking;
  return true;
}

inline std::vector<Strategy> admissible_strategies(Algorithm a) {
  std::vector<Strategy> out;
  for (Strategy s : kStrategies)
    if (admissible(a, s))
      out.push_back(s);
  return out;
}

struct RunStats {
  std::uint64_t sat_calls = 0;        // main-loop SAT calls
  std::uint64_t hard_check_calls = 0; // preliminary satisfiability check of the hard clauses
  std::uint64_t conflicts_total = 0;
  std::uint64_t clauses_emitted = 0;  // cardinality-encoding clauses produced by the totalizer
  std::uint64_t solver_instances = 0; // solvers that served main-loop calls
  std::uint64_t cores_found = 0;
  std::uint64_t core_size_total = 0;
  std::uint64_t peak_solver_clauses = 0;
  std::uint32_t final_bound = 0;      // lambda at termination (Fu-Malik: cores found)
  double wall_seconds = 0.0;
};

enum class MaxSatStatus { Optimum, Unsatisfiable, Timeout };

inline std::string_view to_string(MaxSatStatus s) {
  switch (s) {
  case MaxSatStatus::Optimum: return "optimum";
  case MaxSatStatus::Unsatisfiable: return "unsatisfiable";
  case MaxSatStatus::Timeout: return "timeout";
  }
  return "?";
}

struct MaxSatResult {
  MaxSatStatus status = MaxSatStatus::Timeout;
  std::size_t optimum = 0;
  Model model; // original variables only
  RunStats stats;
};

/// One main-loop SAT call.
struct IterationTrace {
  std::uint64_t iteration = 0;
  std::uint32_t lambda = 0;
  Algorithm algorithm = Algorithm::LinearUS;
  Strategy strategy = Strategy::NonIncremental;
  SolveStatus status = SolveStatus::Unknown;
  std::vector<std::size_t> core; // soft ids
  std::uint64_t clauses_emitted = 0;
};

inline std::string to_string(const IterationTrace& t) {
  std::ostringstream os;
  os << "iter=" << t.iteration << " lambda=" << t.lambda << " algorithm=" << to_string(t.algorithm)
     << " strategy=" << to_string(t.strategy) << " status=" << to_string(t.status) << " core=";
  for (std::size_t i = 0; i < t.core.size(); ++i)
    os << (i ? "," : "") << t.core[i];
  os << " emitted=" << t.clauses_emitted;
  return os.str();
}

struct MaxSatOptions {
  std::optional<Clock::time_point> deadline;
  std::function<void(const IterationTrace&)> on_iteration;
  SolverOptions solver;
};

/// Model of the hard clauses, or nullopt if they are unsatisfiable.
inline std::optional<Model> check_hard(const WcnfInstance& inst, const SolverOptions& options = {}) {
  Solver s(options);
  for (std::uint32_t v = 0; v < inst.num_vars; ++v)
    s.new_var();
  for (const auto& c : inst.hard)
    if (!s.add_clause(c))
      return std::nullopt;
  auto r = s.solve();
  if (r.status != SolveStatus::Sat)
    return std::nullopt;
  return r.model.restricted(inst.num_vars);
}

/// Soft clauses left unsatisfied by a model of the hard clauses; never
/// below the optimum.
inline std::size_t compute_upper_bound(const WcnfInstance& inst, const Model& hard_model) {
  return cost(hard_model, inst.soft);
}

namespace detail {

/// Holds the working formula (with its variable numbering) and the solver
/// or solvers it is loaded into. Incremental strategies keep one solver and
/// push new clauses as they appear; the non-incremental strategy loads the
/// whole formula into a fresh solver for every call.
class Driver {
public:
  Driver(const WcnfInstance& inst, Algorithm algorithm, Strategy strategy, const MaxSatOptions& opts)
      : inst_(inst), algorithm_(algorithm), strategy_(strategy), opts_(opts), formula_(inst.num_vars),
        start_(Clock::now()) {
    if (!admissible(algorithm, strategy))
      throw std::invalid_argument(std::string(to_string(algorithm)) + " does not support the " +
                                  std::string(to_string(strategy)) + " strategy");
    for (const auto& c : inst.hard)
      formula_.add_clause(c);
  }

protected:
  bool incremental() const { return strategy_ != Strategy::NonIncremental; }

  /// Satisfiability check of the hard clauses. Incremental strategies run it
  /// on the main solver before anything else is loaded.
  std::optional<Model> hard_check() {
    ++stats_.hard_check_calls;
    SolveResult r;
    if (incremental()) {
      r = timed_solve(main_solver(), {});
    } else {
      Solver s(opts_.solver);
      load_into(s);
      r = timed_solve(s, {});
    }
    if (r.status == SolveStatus::Unknown)
      timed_out_ = true;
    if (r.status != SolveStatus::Sat)
      return std::nullopt;
    return r.model.restricted(inst_.num_vars);
  }

  /// The single solver of an incremental run, synced with the formula.
  Solver& main_solver() {
    if (!solver_) {
      solver_.emplace(opts_.solver);
      ++stats_.solver_instances;
    }
    while (solver_->num_vars() < formula_.num_vars())
      solver_->new_var();
    const auto& cs = formula_.clauses();
    for (; loaded_ < cs.size(); ++loaded_)
      solver_->add_clause(cs[loaded_]);
    note_size(*solver_);
    return *solver_;
  }

  /// A new solver holding the current formula; used once per call by the
  /// non-incremental strategy.
  Solver fresh_solver() {
    Solver s(opts_.solver);
    ++stats_.solver_instances;
    load_into(s);
    return s;
  }

  SolveResult main_call(Solver& s, std::span<const Lit> assumptions) {
    note_size(s);
    ++stats_.sat_calls;
    auto r = timed_solve(s, assumptions);
    if (r.status == SolveStatus::Unknown)
      timed_out_ = true;
    return r;
  }

  template <ClauseSink Sink>
  TotalizerTree build_counted(std::span<const Lit> inputs, std::uint32_t k, Sink& sink) {
    auto t = TotalizerTree::build(inputs, k, sink);
    stats_.clauses_emitted += t.emitted();
    return t;
  }

  template <ClauseSink Sink>
  void raise_counted(TotalizerTree& t, std::uint32_t k, Sink& sink) {
    auto before = t.emitted();
    t.raise_bound(k, sink);
    stats_.clauses_emitted += t.emitted() - before;
  }

  template <ClauseSink Sink>
  TotalizerTree merge_counted(TotalizerTree a, TotalizerTree b, std::uint32_t k, Sink& sink) {
    auto before = a.emitted() + b.emitted();
    auto t = TotalizerTree::merge(std::move(a), std::move(b), k, sink);
    stats_.clauses_emitted += t.emitted() - before;
    return t;
  }

  bool out_of_time() const { return timed_out_ || (opts_.deadline && Clock::now() >= *opts_.deadline); }

  void trace(std::uint32_t lambda, SolveStatus status, std::vector<std::size_t> core) {
    if (status == SolveStatus::Unsat) {
      ++stats_.cores_found;
      stats_.core_size_total += core.size();
    }
    if (opts_.on_iteration) {
      IterationTrace t;
      t.iteration = stats_.sat_calls;
      t.lambda = lambda;
      t.algorithm = algorithm_;
      t.strategy = strategy_;
      t.status = status;
      t.core = std::move(core);
      t.clauses_emitted = stats_.clauses_emitted - emitted_at_last_trace_;
      opts_.on_iteration(t);
    }
    emitted_at_last_trace_ = stats_.clauses_emitted;
  }

  MaxSatResult finish_optimum(std::size_t optimum, const Model& model) {
    MaxSatResult res;
    res.status = MaxSatStatus::Optimum;
    res.optimum = optimum;
    res.model = model.restricted(inst_.num_vars);
    if (!satisfies_all(res.model, inst_.hard) || cost(res.model, inst_.soft) != optimum)
      throw std::logic_error("internal error: model does not realize the reported optimum");
    return finish(std::move(res));
  }

  MaxSatResult finish_status(MaxSatStatus status) {
    MaxSatResult res;
    res.status = status;
    return finish(std::move(res));
  }

  const WcnfInstance& inst_;
  Algorithm algorithm_;
  Strategy strategy_;
  const MaxSatOptions& opts_;
  RecordingSink formula_;
  RunStats stats_;

private:
  void load_into(Solver& s) {
    while (s.num_vars() < formula_.num_vars())
      s.new_var();
    for (const auto& c : formula_.clauses())
      s.add_clause(c);
  }

  SolveResult timed_solve(Solver& s, std::span<const Lit> assumptions) {
    auto before = s.stats().conflicts;
    s.set_deadline(opts_.deadline);
    auto r = s.solve(assumptions);
    stats_.conflicts_total += s.stats().conflicts - before;
    return r;
  }

  void note_size(const Solver& s) {
    stats_.peak_solver_clauses = std::max<std::uint64_t>(stats_.peak_solver_clauses, s.num_clauses());
  }

  MaxSatResult finish(MaxSatResult res) {
    stats_.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    res.stats = stats_;
    return res;
  }

  std::optional<Solver> solver_;
  std::size_t loaded_ = 0;
  bool timed_out_ = false;
  std::uint64_t emitted_at_last_trace_ = 0;
  Clock::time_point start_;
};

} // namespace detail
} // namespace cardimax
