#pragma once

// Destinations for encoder output. Anything that can allocate a fresh
// variable and accept a clause is a sink; the solver is the usual one.

#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "cardimax/types.hpp"

namespace cardimax {

template <class S>
concept ClauseSink = requires(S& s, std::span<const Lit> lits) {
  { s.new_var() } -> std::same_as<Var>;
  s.add_clause(lits);
};

/// Records clauses in emission order. Variables are allocated densely after
/// the `num_vars` it was constructed with.
class RecordingSink {
public:
  explicit RecordingSink(std::uint32_t num_vars = 0) : num_vars_(num_vars) {}

  Var new_var() { return Var{++num_vars_}; }
  void add_clause(std::span<const Lit> lits) { clauses_.emplace_back(lits.begin(), lits.end()); }
  void add_clause(std::initializer_list<Lit> lits) { clauses_.emplace_back(lits); }

  std::uint32_t num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::vector<Clause> take() { return std::exchange(clauses_, {}); }

private:
  std::uint32_t num_vars_;
  std::vector<Clause> clauses_;
};

/// Appends a blocking literal to every clause before forwarding it.
template <ClauseSink Inner>
class BlockingSink {
public:
  BlockingSink(Inner& inner, Lit blocker) : inner_(inner), blocker_(blocker) {}

  Var new_var() { return inner_.new_var(); }
  void add_clause(std::span<const Lit> lits) {
    buffer_.assign(lits.begin(), lits.end());
    buffer_.push_back(blocker_);
    inner_.add_clause(std::span<const Lit>(buffer_));
  }

private:
  Inner& inner_;
  Lit blocker_;
  Clause buffer_;
};

/// Forwards everything and counts the clauses that pass through.
template <ClauseSink Inner>
class CountingSink {
public:
  explicit CountingSink(Inner& inner) : inner_(inner) {}

  Var new_var() { return inner_.new_var(); }
  void add_clause(std::span<const Lit> lits) {
    ++count_;
    inner_.add_clause(lits);
  }
  std::uint64_t count() const { return count_; }

private:
  Inner& inner_;
  std::uint64_t count_ = 0;
};

} // namespace cardimax
