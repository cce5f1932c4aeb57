#pragma once

// Seeded instance families.
//
// tiny   - up to 12 variables and 30 soft clauses; small enough for the
//          brute-force oracle.
// medium - 100 to 400 variables with a planted optimum between 3 and 25.
//          A hidden assignment satisfies every hard clause and every soft
//          clause except those inside disjoint conflict gadgets. A pair
//          gadget (soft y, soft z, hard -y|-z) costs exactly 1 and a triple
//          gadget (three soft units under a hard at-most-one) costs exactly
//          2, so the optimum equals the planted gadget cost.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cardimax/types.hpp"
#include "cardimax/wcnf.hpp"

namespace cardimax {

/// mt19937_64 with our own range reduction, so output does not depend on the
/// standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1)
      return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do
      x = engine_();
    while (x >= limit);
    return x % n;
  }

  /// Uniform in [lo, hi].
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return (engine_() >> 63) != 0; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

private:
  std::mt19937_64 engine_;
};

enum class Profile { Tiny, Medium };

inline std::string_view to_string(Profile p) { return p == Profile::Tiny ? "tiny" : "medium"; }

inline std::optional<Profile> parse_profile(std::string_view s) {
  if (s == "tiny")
    return Profile::Tiny;
  if (s == "medium")
    return Profile::Medium;
  return std::nullopt;
}

struct GeneratedInstance {
  std::string name;
  WcnfInstance instance;
  std::optional<std::size_t> planted_optimum;
};

struct MediumShape {
  std::uint32_t num_vars = 0;     // 0: draw from [100, 400]
  std::uint32_t optimum = 0;      // 0: draw from [3, 25]
  double hard_ratio = 3.0;        // random 3-clauses per variable
  double soft_ratio = 0.5;        // background soft clauses per variable
};

namespace detail {

inline Clause random_clause(Rng& rng, std::uint32_t num_vars, std::size_t len) {
  Clause c;
  while (c.size() < len) {
    Var v{static_cast<std::uint32_t>(rng.range(1, num_vars))};
    if (std::any_of(c.begin(), c.end(), [&](Lit l) { return l.var() == v; }))
      continue;
    c.push_back(Lit(v, rng.coin()));
  }
  return c;
}

/// A random clause of the given length over `pool` that `planted` satisfies.
inline Clause planted_clause(Rng& rng, const std::vector<std::uint32_t>& pool, const std::vector<bool>& planted,
                             std::size_t len) {
  for (;;) {
    Clause c;
    while (c.size() < len) {
      Var v{pool[rng.below(pool.size())]};
      if (std::any_of(c.begin(), c.end(), [&](Lit l) { return l.var() == v; }))
        continue;
      c.push_back(Lit(v, rng.coin()));
    }
    if (std::any_of(c.begin(), c.end(), [&](Lit l) { return planted[l.var().index] == l.positive(); }))
      return c;
  }
}

} // namespace detail

inline WcnfInstance generate_tiny(Rng& rng) {
  WcnfInstance inst;
  inst.num_vars = static_cast<std::uint32_t>(rng.range(2, 12));
  std::size_t hard = rng.below(inst.num_vars + 1);
  std::size_t soft = rng.range(0, 30);
  for (std::size_t i = 0; i < hard; ++i)
    inst.hard.push_back(detail::random_clause(rng, inst.num_vars, rng.range(2, std::min<std::uint32_t>(3, inst.num_vars))));
  for (std::size_t i = 0; i < soft; ++i)
    inst.soft.push_back(detail::random_clause(rng, inst.num_vars, rng.range(1, std::min<std::uint32_t>(3, inst.num_vars))));
  return inst;
}

inline GeneratedInstance generate_medium(Rng& rng, MediumShape shape = {}) {
  std::uint32_t n = shape.num_vars ? shape.num_vars : static_cast<std::uint32_t>(rng.range(100, 400));
  std::uint32_t target = shape.optimum ? shape.optimum : static_cast<std::uint32_t>(rng.range(3, 25));
  // Pair gadgets use two variables per unit of cost; triples use fewer.
  if (n < 2 * target)
    throw std::invalid_argument("medium instance needs at least " + std::to_string(2 * target) +
                                " variables for optimum " + std::to_string(target));

  std::vector<bool> planted(n + 1);
  for (std::uint32_t v = 1; v <= n; ++v)
    planted[v] = rng.coin();

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 1u);
  rng.shuffle(order);
  std::size_t cursor = 0;

  WcnfInstance inst;
  inst.num_vars = n;
  std::uint32_t planted_cost = 0;
  while (planted_cost < target) {
    bool triple = target - planted_cost >= 2 && rng.below(3) == 0;
    std::size_t width = triple ? 3 : 2;
    std::vector<Var> g;
    for (std::size_t i = 0; i < width; ++i)
      g.push_back(Var{order[cursor++]});
    for (std::size_t i = 0; i < width; ++i) {
      planted[g[i].index] = i == 0;
      for (std::size_t j = i + 1; j < width; ++j)
        inst.hard.push_back({Lit::neg(g[i]), Lit::neg(g[j])});
      inst.soft.push_back({Lit(g[i], true)});
    }
    planted_cost += static_cast<std::uint32_t>(width - 1);
  }

  std::vector<std::uint32_t> all(order);
  auto hard_count = static_cast<std::size_t>(shape.hard_ratio * n);
  for (std::size_t i = 0; i < hard_count; ++i)
    inst.hard.push_back(detail::planted_clause(rng, all, planted, 3));
  auto soft_count = static_cast<std::size_t>(shape.soft_ratio * n);
  for (std::size_t i = 0; i < soft_count; ++i)
    inst.soft.push_back(detail::planted_clause(rng, all, planted, rng.range(1, 2)));

  // Interleave gadget and background clauses so that position gives nothing away.
  rng.shuffle(inst.hard);
  rng.shuffle(inst.soft);

  GeneratedInstance out;
  out.instance = std::move(inst);
  out.planted_optimum = planted_cost;
  return out;
}

inline std::vector<GeneratedInstance> generate_instances(std::uint64_t seed, Profile profile, std::size_t count,
                                                         MediumShape shape = {}) {
  Rng rng(seed);
  std::vector<GeneratedInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GeneratedInstance g;
    if (profile == Profile::Tiny)
      g.instance = generate_tiny(rng);
    else
      g = generate_medium(rng, shape);
    std::ostringstream name;
    name << to_string(profile) << '-' << seed << '-' << std::setw(4) << std::setfill('0') << i << ".wcnf";
    g.name = name.str();
    out.push_back(std::move(g));
  }
  return out;
}

/// Writes each instance to `dir/<name>`; the planted optimum, when known,
/// goes into a leading comment line.
inline std::vector<std::filesystem::path> write_instances(const std::filesystem::path& dir,
                                                          const std::vector<GeneratedInstance>& instances) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& g : instances) {
    auto path = dir / g.name;
    std::ofstream out(path, std::ios::binary);
    if (g.planted_optimum)
      out << "c planted optimum " << *g.planted_optimum << '\n';
    out << render_wcnf(g.instance);
    if (!out)
      throw std::runtime_error("cannot write " + path.string());
    paths.push_back(path);
  }
  return paths;
}

} // namespace cardimax
