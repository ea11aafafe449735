#pragma once

// Uniform random and planted-solution k-SAT instances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gapsat/cnf.hpp"
#include "gapsat/random.hpp"

namespace gapsat {

/// Clause-to-variable ratio near the satisfiability threshold for k = 3, 5, 7.
inline double threshold_ratio(std::size_t k) {
  switch (k) {
  case 3:
    return 4.267;
  case 5:
    return 21.117;
  case 7:
    return 87.79;
  default:
    throw std::invalid_argument("no default ratio for k = " + std::to_string(k));
  }
}

struct GenSpec {
  Var n = 0;
  std::size_t k = 3;
  std::optional<double> ratio;      ///< m = round(ratio * n)
  std::optional<std::size_t> m;     ///< takes precedence over ratio
  std::optional<Assignment> planted; ///< hidden solution; drawn from seed if absent
  std::uint64_t seed = 0;

  std::size_t clause_count() const {
    if (m)
      return *m;
    const double r = ratio ? *ratio : threshold_ratio(k);
    return static_cast<std::size_t>(std::llround(r * static_cast<double>(n)));
  }

  void validate() const {
    if (k < 2)
      throw std::invalid_argument("clause width k must be at least 2");
    if (k > n)
      throw std::invalid_argument("clause width k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    if (planted && planted->num_vars() != n)
      throw std::invalid_argument("planted assignment has the wrong length");
  }
};

namespace detail {

/// k distinct variables from 1..n, uniformly.
inline std::vector<Var> distinct_vars(Rng& rng, Var n, std::size_t k) {
  std::vector<Var> vars;
  vars.reserve(k);
  while (vars.size() < k) {
    const Var v = static_cast<Var>(rng.below(n)) + 1;
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      vars.push_back(v);
  }
  return vars;
}

} // namespace detail

/// m clauses over k distinct uniform variables with uniform polarities.
inline Formula gen_uniform(const GenSpec& spec) {
  spec.validate();
  if (spec.planted)
    throw std::invalid_argument("gen_uniform: use gen_planted for a hidden solution");
  Rng rng(spec.seed);
  std::vector<Clause> clauses(spec.clause_count());
  for (Clause& c : clauses) {
    for (Var v : detail::distinct_vars(rng, spec.n, spec.k))
      c.emplace_back(v, rng.coin());
  }
  return Formula(spec.n, std::move(clauses));
}

/// Like gen_uniform, but polarity vectors falsified by the hidden assignment
/// are resampled, so the hidden assignment satisfies every clause.
inline std::pair<Formula, Assignment> gen_planted(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Assignment hidden(spec.n);
  if (spec.planted) {
    hidden = *spec.planted;
  } else {
    for (Var v = 1; v <= spec.n; ++v)
      hidden.set(v, rng.coin());
  }
  std::vector<Clause> clauses(spec.clause_count());
  for (Clause& c : clauses) {
    const auto vars = detail::distinct_vars(rng, spec.n, spec.k);
    do {
      c.clear();
      for (Var v : vars)
        c.emplace_back(v, rng.coin());
    } while (!eval_clause(c, hidden));
  }
  return {Formula(spec.n, std::move(clauses)), std::move(hidden)};
}

} // namespace gapsat
