#pragma once

// Level-1/level-2 resolvent pools, ternary resolution closure and capped
// sampling of enrichment sets.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <set>
#include <vector>

#include "gapsat/cnf.hpp"
#include "gapsat/random.hpp"

namespace gapsat {

/// Deduplicated resolvents, sorted canonically.
struct ResolventPool {
  int level = 1;
  std::size_t maxWidth = 0;
  std::vector<Clause> clauses;
  /// Pair inspections performed and whether the inspection budget ran out.
  std::uint64_t pairsInspected = 0;
  bool truncated = false;
};

namespace detail {

inline std::set<Clause> clause_set(const Formula& formula) {
  return {formula.clauses().begin(), formula.clauses().end()};
}

/// Clause ids (non-tautological) indexed by literal code.
inline std::vector<std::vector<std::uint32_t>> occurrence_index(const std::vector<Clause>& clauses, Var numVars) {
  std::vector<std::vector<std::uint32_t>> occ(2 * static_cast<std::size_t>(numVars) + 2);
  for (std::size_t i = 0; i < clauses.size(); ++i)
    if (!is_tautology(clauses[i]))
      for (Lit l : clauses[i])
        occ[l.code()].push_back(static_cast<std::uint32_t>(i));
  return occ;
}

} // namespace detail

/// All non-tautological resolvents of two clauses of the formula, of width at
/// most maxWidth, that are not already clauses of the formula.
inline ResolventPool level1_resolvents(const Formula& formula, std::size_t maxWidth) {
  ResolventPool pool;
  pool.level = 1;
  pool.maxWidth = maxWidth;
  const auto base = detail::clause_set(formula);
  std::set<Clause> found;
  for (Var v = 1; v <= formula.num_vars(); ++v) {
    for (std::uint32_t a : formula.occurrences(Lit(v, false))) {
      if (formula.is_tautology(a))
        continue;
      for (std::uint32_t b : formula.occurrences(Lit(v, true))) {
        if (formula.is_tautology(b))
          continue;
        ++pool.pairsInspected;
        auto r = resolve(formula.clause(a), formula.clause(b), v);
        if (r && r->size() <= maxWidth && !base.contains(*r))
          found.insert(std::move(*r));
      }
    }
  }
  pool.clauses.assign(found.begin(), found.end());
  return pool;
}

inline constexpr std::uint64_t defaultLevel2PairBudget = 10'000'000;

/// Resolvents with at least one level-1 parent (the other parent original or
/// level-1), excluding clauses of the formula and of the level-1 pool.
/// Enumeration stops after pairBudget pair inspections, in a fixed order.
inline ResolventPool level2_resolvents(const Formula& formula, std::size_t maxWidth,
                                       std::uint64_t pairBudget = defaultLevel2PairBudget) {
  // Level-1 parents are not restricted by maxWidth; only emitted clauses are.
  const ResolventPool level1 = level1_resolvents(formula, std::numeric_limits<std::size_t>::max());
  const std::vector<Clause>& l1 = level1.clauses;
  const auto base = detail::clause_set(formula);
  const std::set<Clause> l1set(l1.begin(), l1.end());
  const auto l1occ = detail::occurrence_index(l1, formula.num_vars());

  ResolventPool pool;
  pool.level = 2;
  pool.maxWidth = maxWidth;
  std::set<Clause> found;
  auto consider = [&](const Clause& a, const Clause& b, Var pivot) {
    ++pool.pairsInspected;
    auto r = resolve(a, b, pivot);
    if (r && r->size() <= maxWidth && !base.contains(*r) && !l1set.contains(*r))
      found.insert(std::move(*r));
  };

  for (std::size_t i = 0; i < l1.size() && !pool.truncated; ++i) {
    for (Lit l : l1[i]) {
      for (std::uint32_t j : formula.occurrences(~l)) {
        if (pool.pairsInspected >= pairBudget) {
          pool.truncated = true;
          break;
        }
        if (!formula.is_tautology(j))
          consider(l1[i], formula.clause(j), l.var());
      }
      for (std::uint32_t j : l1occ[(~l).code()]) {
        if (pool.pairsInspected >= pairBudget) {
          pool.truncated = true;
          break;
        }
        if (j > i)
          consider(l1[i], l1[j], l.var());
      }
      if (pool.truncated)
        break;
    }
  }
  pool.clauses.assign(found.begin(), found.end());
  return pool;
}

/// Closure under resolution restricted to clauses of width <= 3 with
/// resolvents of width <= 3. Returns the derived clauses only, sorted.
inline std::vector<Clause> ternary_saturate(const Formula& formula) {
  std::set<Clause> known;
  std::vector<Clause> clauses;
  std::vector<std::vector<std::uint32_t>> occ(2 * static_cast<std::size_t>(formula.num_vars()) + 2);
  std::deque<std::uint32_t> queue;

  auto add = [&](Clause c) {
    if (!known.insert(c).second)
      return false;
    const auto id = static_cast<std::uint32_t>(clauses.size());
    for (Lit l : c)
      occ[l.code()].push_back(id);
    clauses.push_back(std::move(c));
    queue.push_back(id);
    return true;
  };

  for (std::size_t i = 0; i < formula.num_clauses(); ++i)
    if (!formula.is_tautology(i) && formula.clause(i).size() <= 3)
      add(formula.clause(i));
  const std::set<Clause> base = known;

  std::vector<Clause> derived;
  while (!queue.empty()) {
    const std::uint32_t id = queue.front();
    queue.pop_front();
    const Clause c = clauses[id];
    for (Lit l : c) {
      // Partners added meanwhile meet c when they are dequeued themselves.
      const std::size_t partners = occ[(~l).code()].size();
      for (std::size_t k = 0; k < partners; ++k) {
        const std::uint32_t other = occ[(~l).code()][k];
        auto r = resolve(c, clauses[other], l.var());
        if (r && r->size() <= 3 && !base.contains(*r)) {
          Clause copy = *r;
          if (add(std::move(*r)))
            derived.push_back(std::move(copy));
        }
      }
    }
  }
  std::sort(derived.begin(), derived.end());
  return derived;
}

/// Uniform random subset of min(cap, |pool|) clauses, deterministic in seed.
/// Output keeps the pool's canonical order.
inline std::vector<Clause> sample_pool(const std::vector<Clause>& pool, std::size_t cap, std::uint64_t seed) {
  if (cap >= pool.size())
    return pool;
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = i;
  Rng rng(seed);
  // Partial Fisher-Yates: the first cap positions become the sample.
  for (std::size_t i = 0; i < cap; ++i)
    std::swap(idx[i], idx[i + static_cast<std::size_t>(rng.below(idx.size() - i))]);
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  std::vector<Clause> out;
  out.reserve(cap);
  for (std::size_t i : idx)
    out.push_back(pool[i]);
  return out;
}

inline std::vector<Clause> sample_pool(const ResolventPool& pool, std::size_t cap, std::uint64_t seed) {
  return sample_pool(pool.clauses, cap, seed);
}

/// floor(m / 10), the enrichment cap used for the quality experiments.
inline std::size_t tenth_cap(const Formula& formula) { return formula.num_clauses() / 10; }

} // namespace gapsat
