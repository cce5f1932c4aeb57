#pragma once

// Linear search Unsat-Sat, Fu-Malik and MSU3, each driven by one of the
// incrementality strategies.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cardimax/maxsat.hpp"

namespace cardimax {
namespace detail {

/// Maps literals assumed on behalf of soft clauses back to soft ids.
class CoreMap {
public:
  void bind(Lit assumed, std::size_t soft_id) { ids_[assumed.code()] = soft_id; }
  void unbind(Lit assumed) { ids_.erase(assumed.code()); }

  std::vector<std::size_t> soft_ids(std::span<const Lit> core) const {
    std::vector<std::size_t> out;
    for (Lit l : core)
      if (auto it = ids_.find(l.code()); it != ids_.end())
        out.push_back(it->second);
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  std::unordered_map<std::uint32_t, std::size_t> ids_;
};

inline Clause with(const Clause& base, std::initializer_list<Lit> extra) {
  Clause c = base;
  c.insert(c.end(), extra);
  return c;
}

class LinearUsDriver : Driver {
public:
  using Driver::Driver;

  MaxSatResult run() {
    auto hard_model = hard_check();
    if (!hard_model)
      return finish_status(out_of_time() ? MaxSatStatus::Timeout : MaxSatStatus::Unsatisfiable);

    std::uint32_t upper = 0;
    if (strategy_ == Strategy::Weakening) {
      upper = static_cast<std::uint32_t>(compute_upper_bound(inst_, *hard_model));
      if (upper == 0) {
        // The hard check already answered the lambda = 0 call.
        --stats_.hard_check_calls;
        ++stats_.sat_calls;
        trace(0, SolveStatus::Sat, {});
        return finish_optimum(0, *hard_model);
      }
    }

    std::vector<Lit> relax;
    for (const auto& soft : inst_.soft) {
      Lit r = Lit::pos(formula_.new_var());
      relax.push_back(r);
      formula_.add_clause(with(soft, {r}));
    }

    std::optional<TotalizerTree> tree;
    if (!relax.empty() && strategy_ == Strategy::Weakening)
      tree = build_counted(relax, upper, formula_);
    if (!relax.empty() && strategy_ == Strategy::Iterative)
      tree = build_counted(relax, 0, formula_);

    for (std::uint32_t lambda = 0;; ++lambda) {
      if (out_of_time())
        return finish_status(MaxSatStatus::Timeout);
      std::vector<Lit> assumptions;
      std::optional<Solver> fresh;
      Solver* s = nullptr;
      std::optional<Lit> blocker;

      switch (strategy_) {
      case Strategy::NonIncremental:
        fresh.emplace(fresh_solver());
        s = &*fresh;
        if (!relax.empty()) {
          auto t = build_counted(relax, lambda, *s);
          for (Lit l : t.at_most(lambda))
            s->add_clause({l});
        }
        break;
      case Strategy::Blocking:
        if (!relax.empty()) {
          blocker = Lit::pos(formula_.new_var());
          BlockingSink<RecordingSink> blocked(formula_, *blocker);
          auto t = build_counted(relax, lambda, blocked);
          assumptions.push_back(~*blocker);
          for (Lit l : t.at_most(lambda))
            assumptions.push_back(l);
        }
        s = &main_solver();
        break;
      case Strategy::Weakening:
        if (tree)
          assumptions = tree->at_most(std::min(lambda, tree->bound()));
        s = &main_solver();
        break;
      case Strategy::Iterative:
        if (tree) {
          if (lambda > tree->bound())
            raise_counted(*tree, lambda, formula_);
          assumptions = tree->at_most(lambda);
        }
        s = &main_solver();
        break;
      }

      auto r = main_call(*s, assumptions);
      stats_.final_bound = lambda;
      trace(lambda, r.status, {});
      if (r.status == SolveStatus::Sat)
        return finish_optimum(lambda, r.model);
      if (r.status == SolveStatus::Unknown)
        return finish_status(MaxSatStatus::Timeout);
      if (blocker)
        formula_.add_clause({*blocker});
    }
  }
};

class FuMalikDriver : Driver {
public:
  using Driver::Driver;

  MaxSatResult run() {
    auto hard_model = hard_check();
    if (!hard_model)
      return finish_status(out_of_time() ? MaxSatStatus::Timeout : MaxSatStatus::Unsatisfiable);

    std::size_t n = inst_.soft.size();
    std::vector<Clause> relaxed(inst_.soft.begin(), inst_.soft.end()); // soft clause plus its relaxation vars
    std::vector<Lit> blocker(n);                                       // Blocking: current copy's enabler
    CoreMap cores;

    if (strategy_ == Strategy::Blocking) {
      for (std::size_t i = 0; i < n; ++i) {
        blocker[i] = Lit::pos(formula_.new_var());
        formula_.add_clause(with(relaxed[i], {blocker[i]}));
        cores.bind(~blocker[i], i);
      }
    }

    std::uint32_t found = 0;
    for (;;) {
      if (out_of_time())
        return finish_status(MaxSatStatus::Timeout);
      std::vector<Lit> assumptions;
      std::optional<Solver> fresh;
      Solver* s = nullptr;
      std::vector<std::size_t> core;

      if (strategy_ == Strategy::NonIncremental) {
        fresh.emplace(fresh_solver());
        s = &*fresh;
        CoreMap sentinels;
        for (std::size_t i = 0; i < n; ++i) {
          Lit sentinel = Lit::pos(s->new_var());
          s->add_clause(with(relaxed[i], {sentinel}));
          assumptions.push_back(~sentinel);
          sentinels.bind(~sentinel, i);
        }
        auto r = main_call(*s, assumptions);
        if (r.status == SolveStatus::Sat) {
          trace(found, r.status, {});
          stats_.final_bound = found;
          return finish_optimum(found, r.model);
        }
        if (r.status == SolveStatus::Unknown)
          return finish_status(MaxSatStatus::Timeout);
        core = sentinels.soft_ids(r.core);
      } else {
        for (std::size_t i = 0; i < n; ++i)
          assumptions.push_back(~blocker[i]);
        auto r = main_call(main_solver(), assumptions);
        if (r.status == SolveStatus::Sat) {
          trace(found, r.status, {});
          stats_.final_bound = found;
          return finish_optimum(found, r.model);
        }
        if (r.status == SolveStatus::Unknown)
          return finish_status(MaxSatStatus::Timeout);
        core = cores.soft_ids(r.core);
      }
      if (core.empty())
        throw std::logic_error("internal error: core without soft clauses");

      std::vector<Lit> fresh_relax;
      for (std::size_t i : core) {
        Lit r = Lit::pos(formula_.new_var());
        fresh_relax.push_back(r);
        relaxed[i].push_back(r);
        if (strategy_ == Strategy::Blocking) {
          Lit retired = blocker[i];
          blocker[i] = Lit::pos(formula_.new_var());
          formula_.add_clause(with(relaxed[i], {blocker[i]}));
          formula_.add_clause({retired});
          cores.unbind(~retired);
          cores.bind(~blocker[i], i);
        }
      }
      at_most_one(fresh_relax);
      ++found;
      trace(found - 1, SolveStatus::Unsat, std::move(core));
    }
  }

private:
  void at_most_one(std::span<const Lit> lits) {
    if (lits.size() < 2)
      return;
    auto t = build_counted(lits, 1, formula_);
    for (Lit l : t.at_most(1))
      formula_.add_clause({l});
  }
};

class Msu3Driver : Driver {
public:
  using Driver::Driver;

  MaxSatResult run() {
    auto hard_model = hard_check();
    if (!hard_model)
      return finish_status(out_of_time() ? MaxSatStatus::Timeout : MaxSatStatus::Unsatisfiable);

    std::uint32_t upper = 0;
    if (strategy_ == Strategy::Weakening) {
      upper = static_cast<std::uint32_t>(compute_upper_bound(inst_, *hard_model));
      if (upper == 0) {
        --stats_.hard_check_calls;
        ++stats_.sat_calls;
        trace(0, SolveStatus::Sat, {});
        return finish_optimum(0, *hard_model);
      }
    }

    // r_i doubles as the soft clause's sentinel: assumed false until the
    // clause shows up in a core, then left to the cardinality constraint.
    std::size_t n = inst_.soft.size();
    std::vector<Lit> relax(n);
    std::vector<bool> relaxed(n, false);
    std::vector<Lit> relaxed_order;
    CoreMap cores;
    for (std::size_t i = 0; i < n; ++i) {
      relax[i] = Lit::pos(formula_.new_var());
      formula_.add_clause(with(inst_.soft[i], {relax[i]}));
      cores.bind(~relax[i], i);
    }

    std::optional<TotalizerTree> tree;
    if (strategy_ == Strategy::Weakening)
      tree = build_counted(relax, upper, formula_);

    for (std::uint32_t lambda = 0;; ++lambda) {
      if (out_of_time())
        return finish_status(MaxSatStatus::Timeout);
      std::vector<Lit> assumptions;
      for (std::size_t i = 0; i < n; ++i)
        if (!relaxed[i])
          assumptions.push_back(~relax[i]);

      std::optional<Solver> fresh;
      Solver* s = nullptr;
      std::optional<Lit> blocker;

      switch (strategy_) {
      case Strategy::NonIncremental:
        fresh.emplace(fresh_solver());
        s = &*fresh;
        if (!relaxed_order.empty()) {
          auto t = build_counted(relaxed_order, lambda, *s);
          for (Lit l : t.at_most(lambda))
            s->add_clause({l});
        }
        break;
      case Strategy::Blocking:
        if (!relaxed_order.empty()) {
          blocker = Lit::pos(formula_.new_var());
          BlockingSink<RecordingSink> blocked(formula_, *blocker);
          auto t = build_counted(relaxed_order, lambda, blocked);
          assumptions.push_back(~*blocker);
          for (Lit l : t.at_most(lambda))
            assumptions.push_back(l);
        }
        s = &main_solver();
        break;
      case Strategy::Weakening:
        for (Lit l : tree->at_most(std::min(lambda, tree->bound())))
          assumptions.push_back(l);
        s = &main_solver();
        break;
      case Strategy::Iterative:
        if (tree)
          for (Lit l : tree->at_most(lambda))
            assumptions.push_back(l);
        s = &main_solver();
        break;
      }

      auto r = main_call(*s, assumptions);
      stats_.final_bound = lambda;
      if (r.status == SolveStatus::Sat) {
        trace(lambda, r.status, {});
        return finish_optimum(lambda, r.model);
      }
      if (r.status == SolveStatus::Unknown)
        return finish_status(MaxSatStatus::Timeout);
      if (blocker)
        formula_.add_clause({*blocker});

      auto core = cores.soft_ids(r.core);
      std::vector<Lit> newly;
      for (std::size_t i : core) {
        if (relaxed[i])
          continue;
        relaxed[i] = true;
        newly.push_back(relax[i]);
        relaxed_order.push_back(relax[i]);
        cores.unbind(~relax[i]);
      }
      trace(lambda, SolveStatus::Unsat, std::move(core));

      std::uint32_t next = lambda + 1;
      if (strategy_ == Strategy::Iterative) {
        if (tree)
          raise_counted(*tree, next, formula_);
        if (!newly.empty()) {
          auto sub = build_counted(newly, next, formula_);
          tree = tree ? merge_counted(std::move(*tree), std::move(sub), next, formula_) : std::move(sub);
        }
      }
    }
  }
};

} // namespace detail

inline MaxSatResult solve_linear_us(const WcnfInstance& inst, Strategy strategy, const MaxSatOptions& opts = {}) {
  return detail::LinearUsDriver(inst, Algorithm::LinearUS, strategy, opts).run();
}

/// Only NonIncremental and Blocking are accepted.
inline MaxSatResult solve_fu_malik(const WcnfInstance& inst, Strategy strategy, const MaxSatOptions& opts = {}) {
  return detail::FuMalikDriver(inst, Algorithm::FuMalik, strategy, opts).run();
}

inline MaxSatResult solve_msu3(const WcnfInstance& inst, Strategy strategy, const MaxSatOptions& opts = {}) {
  return detail::Msu3Driver(inst, Algorithm::Msu3, strategy, opts).run();
}

/// Throws std::invalid_argument for an inadmissible combination.
inline MaxSatResult solve_maxsat(const WcnfInstance& inst, Algorithm algorithm, Strategy strategy,
                                 const MaxSatOptions& opts = {}) {
  switch (algorithm) {
  case Algorithm::LinearUS: return solve_linear_us(inst, strategy, opts);
  case Algorithm::FuMalik: return solve_fu_malik(inst, strategy, opts);
  case Algorithm::Msu3: return solve_msu3(inst, strategy, opts);
  }
  throw std::invalid_argument("unknown algorithm");
}

} // namespace cardimax
