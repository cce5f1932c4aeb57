#pragma once

// Vocabulary types shared by the solver, the encoder and the MaxSAT drivers.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cardimax {

/// Raised when a caller breaks a documented precondition.
class DefectError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// 1-based propositional variable.
struct Var {
  std::uint32_t index = 0;

  constexpr bool valid() const { return index != 0; }
  friend constexpr auto operator<=>(Var, Var) = default;
};

/// A literal packs (var, sign) as 2*var + negative, so complement is `code ^ 1`.
class Lit {
public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool positive) : code_(2 * v.index + (positive ? 0u : 1u)) {}

  static constexpr Lit pos(Var v) { return Lit(v, true); }
  static constexpr Lit neg(Var v) { return Lit(v, false); }
  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }
  /// Accepts a nonzero DIMACS integer.
  static Lit from_dimacs(long long value) {
    if (value == 0)
      throw DefectError("DIMACS literal 0 has no variable");
    return Lit(Var{static_cast<std::uint32_t>(value < 0 ? -value : value)}, value > 0);
  }

  constexpr Var var() const { return Var{code_ >> 1}; }
  constexpr bool positive() const { return (code_ & 1u) == 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  long long to_dimacs() const {
    auto v = static_cast<long long>(var().index);
    return positive() ? v : -v;
  }

  friend constexpr auto operator<=>(Lit, Lit) = default;

private:
  std::uint32_t code_ = 0;
};

constexpr Lit negate(Lit l) { return ~l; }

inline std::ostream& operator<<(std::ostream& os, Lit l) { return os << l.to_dimacs(); }

using Clause = std::vector<Lit>;

/// Sorts by (var, polarity) and drops duplicates. Returns nullopt for a
/// tautology. An empty input stays empty (falsum).
inline std::optional<Clause> normalize_clause(std::span<const Lit> lits) {
  Clause out(lits.begin(), lits.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i - 1].var() == out[i].var())
      return std::nullopt;
  return out;
}

/// Partial MaxSAT instance. A soft clause's id is its position in `soft`.
struct WcnfInstance {
  std::uint32_t num_vars = 0;
  std::vector<Clause> hard;
  std::vector<Clause> soft;

  std::size_t soft_id(std::size_t position) const { return position; }
  bool operator==(const WcnfInstance&) const = default;
};

/// Total assignment over variables 1..size().
class Model {
public:
  Model() = default;
  explicit Model(std::uint32_t num_vars) : values_(num_vars + 1, 0) {}

  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(values_.size() ? values_.size() - 1 : 0); }
  bool assigned(Var v) const { return v.index >= 1 && v.index < values_.size(); }

  bool value(Var v) const {
    if (!assigned(v))
      throw DefectError("model has no value for variable " + std::to_string(v.index));
    return values_[v.index] != 0;
  }
  bool value(Lit l) const { return value(l.var()) == l.positive(); }
  void set(Var v, bool b) {
    if (!assigned(v))
      throw DefectError("model has no slot for variable " + std::to_string(v.index));
    values_[v.index] = b ? 1 : 0;
  }

  bool satisfies(std::span<const Lit> clause) const {
    return std::any_of(clause.begin(), clause.end(), [&](Lit l) { return value(l); });
  }

  /// Copy limited to variables 1..n.
  Model restricted(std::uint32_t n) const {
    Model m(n);
    for (std::uint32_t v = 1; v <= n; ++v)
      m.values_[v] = values_.at(v);
    return m;
  }

  bool operator==(const Model&) const = default;

private:
  std::vector<std::uint8_t> values_;
};

/// Number of soft clauses falsified by `model`.
inline std::size_t cost(const Model& model, std::span<const Clause> soft) {
  std::size_t unsat = 0;
  for (const auto& c : soft)
    if (!model.satisfies(c))
      ++unsat;
  return unsat;
}

inline bool satisfies_all(const Model& model, std::span<const Clause> clauses) {
  return std::all_of(clauses.begin(), clauses.end(), [&](const Clause& c) { return model.satisfies(c); });
}

} // namespace cardimax
