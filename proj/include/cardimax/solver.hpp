#pragma once

// Incremental CDCL solver with assumption-based cores.
//
// Permanent clauses are never removed. Learned clauses are derived from
// permanent clauses only (assumptions enter as decisions), so they may be
// dropped at any time and stay valid across solve calls.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cardimax/types.hpp"

namespace cardimax {

enum class SolveStatus { Sat, Unsat, Unknown };

inline const char* to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::Sat: return "SAT";
  case SolveStatus::Unsat: return "UNSAT";
  case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Model model;
  /// Assumption literals that together with the permanent clauses are
  /// unsatisfiable. Listed in assumption order. Empty when the permanent
  /// clauses alone are unsatisfiable.
  std::vector<Lit> core;
};

struct SolverStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t solve_calls = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnts_deleted = 0;
};

struct SolverOptions {
  double var_decay = 0.95;
  double clause_decay = 0.999;
  std::uint64_t restart_first = 100;
  double restart_factor = 1.5;
  std::uint64_t deadline_check_interval = 1024;
  /// 0 keeps the default heuristic. Other values perturb initial activities.
  std::uint64_t seed = 0;
};

using Clock = std::chrono::steady_clock;

class Solver {
public:
  explicit Solver(SolverOptions options = {}) : opts_(options), rng_(options.seed) {
    // Slot 0 is unused so that variable indices address arrays directly.
    assigns_.push_back(0);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    polarity_.push_back(0);
    activity_.push_back(0.0);
    seen_.push_back(0);
    heap_index_.push_back(kNotInHeap);
    watches_.resize(2);
  }

  Var new_var() {
    Var v{static_cast<std::uint32_t>(assigns_.size())};
    assigns_.push_back(0);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    polarity_.push_back(0);
    activity_.push_back(opts_.seed ? std::uniform_real_distribution<double>(0.0, 1e-5)(rng_) : 0.0);
    seen_.push_back(0);
    heap_index_.push_back(kNotInHeap);
    watches_.resize(2 * (v.index + 1));
    heap_insert(v.index);
    return v;
  }

  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assigns_.size() - 1); }
  /// Number of add_clause calls made so far, counting those simplified away.
  std::uint64_t num_clauses() const { return added_clauses_; }
  std::size_t num_learnts() const { return learnts_.size(); }
  bool okay() const { return ok_; }
  const SolverStats& stats() const { return stats_; }

  void set_deadline(std::optional<Clock::time_point> deadline) { deadline_ = deadline; }

  /// Returns false iff the permanent store is now unsatisfiable at level 0.
  bool add_clause(std::span<const Lit> lits) {
    for (Lit l : lits)
      check_allocated(l);
    ++added_clauses_;
    if (!ok_)
      return false;
    auto normalized = normalize_clause(lits);
    if (!normalized)
      return true;
    Clause c;
    c.reserve(normalized->size());
    for (Lit l : *normalized) {
      int v = value(l);
      if (v > 0)
        return true;
      if (v == 0)
        c.push_back(l);
    }
    if (c.empty())
      return ok_ = false;
    if (c.size() == 1) {
      enqueue(c[0], kNoReason);
      return ok_ = (propagate() == kNoReason);
    }
    attach(alloc_clause(std::move(c), false));
    return true;
  }
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

  SolveResult solve(std::span<const Lit> assumptions = {}) {
    ++stats_.solve_calls;
    for (Lit l : assumptions)
      check_allocated(l);
    check_consistent(assumptions);

    SolveResult result;
    if (!ok_) {
      result.status = SolveStatus::Unsat;
      return result;
    }
    assumptions_.assign(assumptions.begin(), assumptions.end());
    max_learnts_ = std::max<double>({max_learnts_, static_cast<double>(added_clauses_) / 3.0, 2000.0});

    double budget = static_cast<double>(opts_.restart_first);
    SearchOutcome outcome = SearchOutcome::Restart;
    while (outcome == SearchOutcome::Restart) {
      if (deadline_passed()) {
        outcome = SearchOutcome::Timeout;
        break;
      }
      outcome = search(static_cast<std::uint64_t>(budget));
      budget *= opts_.restart_factor;
      if (outcome == SearchOutcome::Restart) {
        ++stats_.restarts;
        max_learnts_ *= 1.05;
      }
    }

    switch (outcome) {
    case SearchOutcome::Sat:
      result.status = SolveStatus::Sat;
      result.model = Model(num_vars());
      for (std::uint32_t v = 1; v <= num_vars(); ++v)
        result.model.set(Var{v}, assigns_[v] > 0);
      break;
    case SearchOutcome::Unsat:
      result.status = SolveStatus::Unsat;
      result.core = ordered_core();
      break;
    default:
      result.status = SolveStatus::Unknown;
      break;
    }
    cancel_until(0);
    assumptions_.clear();
    return result;
  }

private:
  using ClauseRef = std::uint32_t;
  static constexpr ClauseRef kNoReason = std::numeric_limits<ClauseRef>::max();
  static constexpr std::uint32_t kNotInHeap = std::numeric_limits<std::uint32_t>::max();

  enum class SearchOutcome { Sat, Unsat, Restart, Timeout };

  struct StoredClause {
    std::vector<Lit> lits;
    double activity = 0.0;
    bool learnt = false;
    bool deleted = false;
  };

  struct Watcher {
    ClauseRef cref;
    Lit blocker;
  };

  // --- assignment -----------------------------------------------------------

  int value(Lit l) const {
    int a = assigns_[l.var().index];
    return l.positive() ? a : -a;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit l, ClauseRef reason) {
    std::uint32_t v = l.var().index;
    assigns_[v] = l.positive() ? 1 : -1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl)
      return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
      std::uint32_t v = trail_[i].var().index;
      polarity_[v] = assigns_[v] > 0 ? 1 : 0;
      assigns_[v] = 0;
      reason_[v] = kNoReason;
      heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  void check_allocated(Lit l) const {
    if (l.var().index == 0 || l.var().index > num_vars())
      throw DefectError("literal " + std::to_string(l.to_dimacs()) + " uses an unallocated variable");
  }

  void check_consistent(std::span<const Lit> assumptions) {
    // seen_ doubles as a scratch polarity mark: 1 = positive, 2 = negative.
    bool clash = false;
    for (Lit l : assumptions) {
      auto& mark = seen_[l.var().index];
      std::uint8_t want = l.positive() ? 1 : 2;
      if (mark != 0 && mark != want)
        clash = true;
      mark = want;
    }
    for (Lit l : assumptions)
      seen_[l.var().index] = 0;
    if (clash)
      throw DefectError("contradictory assumptions");
  }

  bool deadline_passed() const { return deadline_ && Clock::now() >= *deadline_; }

  // --- clause store ---------------------------------------------------------

  ClauseRef alloc_clause(std::vector<Lit> lits, bool learnt) {
    ClauseRef cref;
    if (!free_.empty()) {
      cref = free_.back();
      free_.pop_back();
      clauses_[cref] = StoredClause{std::move(lits), 0.0, learnt, false};
    } else {
      cref = static_cast<ClauseRef>(clauses_.size());
      clauses_.push_back(StoredClause{std::move(lits), 0.0, learnt, false});
    }
    if (learnt)
      learnts_.push_back(cref);
    return cref;
  }

  void attach(ClauseRef cref) {
    const auto& c = clauses_[cref].lits;
    watches_[(~c[0]).code()].push_back({cref, c[1]});
    watches_[(~c[1]).code()].push_back({cref, c[0]});
  }

  bool locked(ClauseRef cref) const {
    Lit first = clauses_[cref].lits[0];
    return value(first) > 0 && reason_[first.var().index] == cref;
  }

  void reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [&](ClauseRef a, ClauseRef b) {
      const auto& ca = clauses_[a];
      const auto& cb = clauses_[b];
      bool bin_a = ca.lits.size() == 2, bin_b = cb.lits.size() == 2;
      if (bin_a != bin_b)
        return !bin_a;
      if (ca.activity != cb.activity)
        return ca.activity < cb.activity;
      return a < b;
    });
    std::size_t half = learnts_.size() / 2;
    std::vector<ClauseRef> kept;
    kept.reserve(learnts_.size());
    std::vector<ClauseRef> dropped;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
      ClauseRef cr = learnts_[i];
      auto& c = clauses_[cr];
      if (i < half && c.lits.size() > 2 && !locked(cr)) {
        c.deleted = true;
        dropped.push_back(cr);
      } else {
        kept.push_back(cr);
      }
    }
    if (dropped.empty())
      return;
    for (auto& ws : watches_)
      std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
    for (ClauseRef cr : dropped) {
      clauses_[cr].lits.clear();
      clauses_[cr].lits.shrink_to_fit();
      free_.push_back(cr);
    }
    stats_.learnts_deleted += dropped.size();
    learnts_ = std::move(kept);
  }

  // --- propagation ----------------------------------------------------------

  ClauseRef propagate() {
    ClauseRef conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      Lit false_lit = ~p;
      auto& ws = watches_[p.code()];
      ++stats_.propagations;
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) > 0) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& lits = clauses_[w.cref].lits;
        if (lits[0] == false_lit)
          std::swap(lits[0], lits[1]);
        ++i;
        Lit first = lits[0];
        Watcher kept{w.cref, first};
        if (first != w.blocker && value(first) > 0) {
          ws[j++] = kept;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) >= 0) {
            lits[1] = lits[k];
            lits[k] = false_lit;
            watches_[(~lits[1]).code()].push_back(kept);
            moved = true;
            break;
          }
        }
        if (moved)
          continue;
        ws[j++] = kept;
        if (value(first) < 0) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size())
            ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
    }
    return conflict;
  }

  // --- conflict analysis ----------------------------------------------------

  void analyze(ClauseRef conflict, std::vector<Lit>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(Lit{});
    int path = 0;
    Lit p{};
    bool have_p = false;
    std::size_t index = trail_.size();
    to_clear_.clear();

    do {
      auto& c = clauses_[conflict];
      if (c.learnt)
        bump_clause(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        Lit q = c.lits[k];
        std::uint32_t v = q.var().index;
        if (!seen_[v] && level_[v] > 0) {
          bump_var(v);
          seen_[v] = 1;
          to_clear_.push_back(v);
          if (level_[v] >= decision_level())
            ++path;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[trail_[--index].var().index]) {
      }
      p = trail_[index];
      have_p = true;
      conflict = reason_[p.var().index];
      seen_[p.var().index] = 0;
      --path;
    } while (path > 0);
    learnt[0] = ~p;

    // Drop literals whose reason is already covered by the clause.
    std::size_t out = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      std::uint32_t v = learnt[i].var().index;
      ClauseRef r = reason_[v];
      bool redundant = r != kNoReason;
      if (redundant) {
        const auto& rl = clauses_[r].lits;
        for (std::size_t k = 1; k < rl.size(); ++k) {
          std::uint32_t u = rl[k].var().index;
          if (!seen_[u] && level_[u] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant)
        learnt[out++] = learnt[i];
    }
    learnt.resize(out);

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[learnt[i].var().index] > level_[learnt[max_i].var().index])
          max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[learnt[1].var().index];
    }
    for (std::uint32_t v : to_clear_)
      seen_[v] = 0;
  }

  /// `p` is an assumption that is false under the current trail. Collects the
  /// assumptions whose propagation falsified it.
  void analyze_final(Lit p) {
    final_core_.clear();
    final_core_.push_back(p);
    if (decision_level() == 0)
      return;
    seen_[p.var().index] = 1;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
      std::uint32_t v = trail_[i].var().index;
      if (!seen_[v])
        continue;
      if (reason_[v] == kNoReason) {
        final_core_.push_back(trail_[i]);
      } else {
        const auto& lits = clauses_[reason_[v]].lits;
        for (std::size_t k = 1; k < lits.size(); ++k)
          if (level_[lits[k].var().index] > 0)
            seen_[lits[k].var().index] = 1;
      }
      seen_[v] = 0;
    }
    seen_[p.var().index] = 0;
  }

  std::vector<Lit> ordered_core() {
    std::vector<Lit> core;
    if (final_core_.empty())
      return core;
    for (Lit l : final_core_)
      seen_[l.var().index] = 1;
    for (Lit l : assumptions_) {
      auto& mark = seen_[l.var().index];
      if (mark) {
        core.push_back(l);
        mark = 0;
      }
    }
    for (Lit l : final_core_)
      seen_[l.var().index] = 0;
    final_core_.clear();
    return core;
  }

  // --- heuristics -----------------------------------------------------------

  void bump_var(std::uint32_t v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (auto& a : activity_)
        a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[v] != kNotInHeap)
      heap_up(heap_index_[v]);
  }

  void bump_clause(StoredClause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
      for (ClauseRef cr : learnts_)
        clauses_[cr].activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  bool heap_before(std::uint32_t a, std::uint32_t b) const {
    if (activity_[a] != activity_[b])
      return activity_[a] > activity_[b];
    return a < b;
  }

  void heap_insert(std::uint32_t v) {
    if (heap_index_[v] != kNotInHeap)
      return;
    heap_index_[v] = static_cast<std::uint32_t>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_index_[v]);
  }

  void heap_up(std::uint32_t i) {
    std::uint32_t v = heap_[i];
    while (i > 0) {
      std::uint32_t parent = (i - 1) / 2;
      if (!heap_before(v, heap_[parent]))
        break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }

  void heap_down(std::uint32_t i) {
    std::uint32_t v = heap_[i];
    auto n = static_cast<std::uint32_t>(heap_.size());
    for (;;) {
      std::uint32_t child = 2 * i + 1;
      if (child >= n)
        break;
      if (child + 1 < n && heap_before(heap_[child + 1], heap_[child]))
        ++child;
      if (!heap_before(heap_[child], v))
        break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }

  std::uint32_t heap_pop() {
    std::uint32_t top = heap_[0];
    heap_index_[top] = kNotInHeap;
    std::uint32_t last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  std::optional<Lit> pick_branch() {
    while (!heap_.empty()) {
      std::uint32_t v = heap_pop();
      if (assigns_[v] == 0)
        return Lit(Var{v}, polarity_[v] != 0);
    }
    return std::nullopt;
  }

  // --- search ---------------------------------------------------------------

  SearchOutcome search(std::uint64_t conflict_budget) {
    std::uint64_t conflicts_here = 0;
    std::vector<Lit> learnt;
    for (;;) {
      ClauseRef conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          ok_ = false;
          final_core_.clear();
          return SearchOutcome::Unsat;
        }
        int backtrack_level = 0;
        analyze(conflict, learnt, backtrack_level);
        cancel_until(backtrack_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          ClauseRef cr = alloc_clause(learnt, true);
          attach(cr);
          bump_clause(clauses_[cr]);
          enqueue(learnt[0], cr);
        }
        var_inc_ /= opts_.var_decay;
        cla_inc_ /= opts_.clause_decay;
        if (stats_.conflicts % opts_.deadline_check_interval == 0 && deadline_passed())
          return SearchOutcome::Timeout;
        continue;
      }

      if (conflicts_here >= conflict_budget) {
        cancel_until(0);
        return SearchOutcome::Restart;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_)
        reduce_db();

      std::optional<Lit> next;
      while (decision_level() < static_cast<int>(assumptions_.size())) {
        Lit a = assumptions_[decision_level()];
        int v = value(a);
        if (v > 0) {
          trail_lim_.push_back(trail_.size());
        } else if (v < 0) {
          analyze_final(a);
          return SearchOutcome::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (!next) {
        ++stats_.decisions;
        next = pick_branch();
        if (!next)
          return SearchOutcome::Sat;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(*next, kNoReason);
    }
  }

  SolverOptions opts_;
  std::mt19937_64 rng_;
  SolverStats stats_;
  bool ok_ = true;
  std::uint64_t added_clauses_ = 0;
  std::optional<Clock::time_point> deadline_;

  std::vector<StoredClause> clauses_;
  std::vector<ClauseRef> learnts_;
  std::vector<ClauseRef> free_;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<ClauseRef> reason_;
  std::vector<std::uint8_t> polarity_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint32_t> heap_;
  std::vector<std::uint32_t> heap_index_;

  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<Lit> assumptions_;
  std::vector<Lit> final_core_;
  std::vector<std::uint32_t> to_clear_;

  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0.0;
};

} // namespace cardimax
