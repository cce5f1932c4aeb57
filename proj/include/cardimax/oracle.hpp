#pragma once

// Exhaustive reference solver for small instances. Shares nothing with the
// CDCL path, which is what makes it useful in tests.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardimax/types.hpp"

namespace cardimax {

class OracleRefused : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  bool satisfiable = false; // hard clauses admit a model
  std::size_t optimum = 0;
  Model witness;
};

inline constexpr std::uint32_t kOracleDefaultCap = 22;

namespace detail {

struct MaskClause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;

  bool satisfied(std::uint32_t assignment) const { return ((assignment & pos) | (~assignment & neg)) != 0; }
};

inline MaskClause to_mask(const Clause& c) {
  MaskClause m;
  for (Lit l : c) {
    std::uint32_t bit = 1u << (l.var().index - 1);
    (l.positive() ? m.pos : m.neg) |= bit;
  }
  return m;
}

} // namespace detail

/// Minimum number of falsified soft clauses over all assignments to the
/// instance's variables that satisfy every hard clause.
inline OracleResult brute_force_optimum(const WcnfInstance& inst, std::uint32_t cap = kOracleDefaultCap) {
  if (inst.num_vars > cap || inst.num_vars > 30)
    throw OracleRefused("brute force refused: " + std::to_string(inst.num_vars) + " variables exceeds cap " +
                        std::to_string(cap));
  std::vector<detail::MaskClause> hard, soft;
  for (const auto& c : inst.hard)
    hard.push_back(detail::to_mask(c));
  for (const auto& c : inst.soft)
    soft.push_back(detail::to_mask(c));

  OracleResult best;
  std::size_t best_cost = std::numeric_limits<std::size_t>::max();
  std::uint32_t best_assignment = 0;
  const std::uint64_t total = std::uint64_t{1} << inst.num_vars;
  for (std::uint64_t a64 = 0; a64 < total; ++a64) {
    auto a = static_cast<std::uint32_t>(a64);
    bool ok = true;
    for (const auto& h : hard)
      if (!h.satisfied(a)) {
        ok = false;
        break;
      }
    if (!ok)
      continue;
    std::size_t c = 0;
    for (const auto& s : soft)
      if (!s.satisfied(a) && ++c >= best_cost)
        break;
    if (c < best_cost) {
      best_cost = c;
      best_assignment = a;
      if (c == 0)
        break;
    }
  }
  if (best_cost == std::numeric_limits<std::size_t>::max())
    return best;
  best.satisfiable = true;
  best.optimum = best_cost;
  best.witness = Model(inst.num_vars);
  for (std::uint32_t v = 1; v <= inst.num_vars; ++v)
    best.witness.set(Var{v}, (best_assignment >> (v - 1)) & 1u);
  return best;
}

} // namespace cardimax
