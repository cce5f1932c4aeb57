#pragma once

// Reference checks used only by tests. None of this calls into the CDCL
// solver or the totalizer, so agreement with them is evidence.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "cardimax/generator.hpp"
#include "cardimax/types.hpp"

namespace cardimax::testing {

inline bool lit_true(std::uint64_t assignment, Lit l) {
  bool v = (assignment >> (l.var().index - 1)) & 1u;
  return v == l.positive();
}

inline bool clause_true(std::uint64_t assignment, const Clause& c) {
  for (Lit l : c)
    if (lit_true(assignment, l))
      return true;
  return false;
}

/// Any assignment over vars 1..n satisfying every clause and every unit in
/// `fixed`. Exhaustive, so keep n small.
inline std::optional<std::uint64_t> brute_sat(std::uint32_t n, const std::vector<Clause>& clauses,
                                              std::span<const Lit> fixed = {}) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    bool ok = true;
    for (Lit l : fixed)
      if (!lit_true(a, l)) {
        ok = false;
        break;
      }
    for (std::size_t i = 0; ok && i < clauses.size(); ++i)
      ok = clause_true(a, clauses[i]);
    if (ok)
      return a;
  }
  return std::nullopt;
}

/// Minimum falsified softs by straightforward enumeration, or nullopt when
/// the hard clauses have no model.
inline std::optional<std::size_t> brute_maxsat(const WcnfInstance& inst) {
  std::optional<std::size_t> best;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << inst.num_vars); ++a) {
    bool ok = true;
    for (const auto& c : inst.hard)
      if (!clause_true(a, c)) {
        ok = false;
        break;
      }
    if (!ok)
      continue;
    std::size_t cost = 0;
    for (const auto& c : inst.soft)
      cost += clause_true(a, c) ? 0 : 1;
    if (!best || cost < *best)
      best = cost;
  }
  return best;
}

/// Clause as a sorted set of DIMACS integers, for order-free comparison.
inline std::vector<long long> canonical(const Clause& c) {
  std::vector<long long> v;
  for (Lit l : c)
    v.push_back(l.to_dimacs());
  std::sort(v.begin(), v.end());
  return v;
}

inline std::set<std::vector<long long>> clause_set(const std::vector<Clause>& cs) {
  std::set<std::vector<long long>> out;
  for (const auto& c : cs)
    out.insert(canonical(c));
  return out;
}

/// The (alpha, beta, sigma) triples with alpha + beta = sigma, 1 <= sigma <=
/// p_len, 0 <= alpha <= q_len and 0 <= beta <= r_len: one clause each.
inline std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> counting_triples(std::size_t q_len,
                                                                                      std::size_t r_len,
                                                                                      std::size_t p_len) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
  for (std::size_t sigma = 1; sigma <= p_len; ++sigma)
    for (std::size_t alpha = 0; alpha <= q_len; ++alpha)
      for (std::size_t beta = 0; beta <= r_len; ++beta)
        if (alpha + beta == sigma)
          out.emplace_back(alpha, beta, sigma);
  return out;
}

inline std::vector<WcnfInstance> tiny_suite(std::uint64_t seed, std::size_t count) {
  std::vector<WcnfInstance> out;
  for (auto& g : generate_instances(seed, Profile::Tiny, count))
    out.push_back(std::move(g.instance));
  return out;
}

} // namespace cardimax::testing
