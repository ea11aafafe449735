#pragma once

// Backbone computation, the deceptive/general clause models and clause
// quality against a fixed solution.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gapsat/cdcl.hpp"
#include "gapsat/cnf.hpp"
#include "gapsat/random.hpp"

namespace gapsat {

class UnsatisfiableError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Backbone {
  std::vector<Lit> literals; ///< sorted, at most one per variable
  /// False when a solver call ran out of budget; the literal set is then a
  /// subset of the true backbone and must not be used as the backbone.
  bool complete = true;
  std::uint64_t solverCalls = 0;
};

struct BackboneOptions {
  std::uint64_t conflictsPerCall = 2'000'000;
  double secondsPerCall = 120.0;
  std::uint64_t seed = 0;
};

/// Exact backbone by iterated solver calls. Only literals of a reference model
/// can be backbone literals; each candidate l is confirmed by F and not-l being
/// unsatisfiable, and every model found on the way rules out the variables on
/// which it disagrees with the reference.
inline Backbone compute_backbone(const Formula& formula, const BackboneOptions& options = {}) {
  MiningBudget budget;
  budget.conflictLimit = options.conflictsPerCall;
  budget.wallSeconds = options.secondsPerCall;
  Backbone bb;

  const MiningOutcome first = cdcl_solve_and_mine(formula, budget, options.seed);
  ++bb.solverCalls;
  if (first.status == MiningOutcome::Status::unsat)
    throw UnsatisfiableError("compute_backbone: formula is unsatisfiable");
  if (first.status != MiningOutcome::Status::sat) {
    bb.complete = false;
    return bb;
  }
  const Assignment& reference = *first.model;
  const Var n = formula.num_vars();
  std::vector<bool> candidate(n + 1, true);

  for (Var v = 1; v <= n; ++v) {
    if (!candidate[v])
      continue;
    const Lit l = reference.true_literal(v);
    std::vector<Clause> clauses = formula.clauses();
    for (Lit known : bb.literals)
      clauses.push_back({known});
    clauses.push_back({~l});
    const Formula probe(n, std::move(clauses));
    const MiningOutcome out = cdcl_solve_and_mine(probe, budget, options.seed + v);
    ++bb.solverCalls;
    if (out.status == MiningOutcome::Status::unsat) {
      bb.literals.push_back(l);
    } else if (out.status == MiningOutcome::Status::sat) {
      for (Var u = v; u <= n; ++u)
        if (out.model->value(u) != reference.value(u))
          candidate[u] = false;
    } else {
      bb.complete = false;
      break;
    }
  }
  std::sort(bb.literals.begin(), bb.literals.end());
  return bb;
}

/// t clauses, each one backbone literal plus the complements of two other
/// backbone literals, over three distinct variables. Sampled independently.
inline std::vector<Clause> gen_deceptive(const Backbone& backbone, std::size_t t, std::uint64_t seed) {
  const auto& b = backbone.literals;
  if (t > 0 && b.size() < 3)
    throw std::invalid_argument("gen_deceptive needs a backbone over at least 3 variables");
  Rng rng(seed);
  std::vector<Clause> out;
  out.reserve(t);
  for (std::size_t i = 0; i < t; ++i) {
    const std::size_t x = rng.below(b.size());
    std::size_t y, z;
    do
      y = rng.below(b.size());
    while (y == x);
    do
      z = rng.below(b.size());
    while (z == x || z == y);
    Clause c{b[x], ~b[y], ~b[z]};
    normalize_clause(c);
    out.push_back(std::move(c));
  }
  return out;
}

/// t clauses, each one backbone literal plus two uniformly random literals over
/// distinct other variables.
inline std::vector<Clause> gen_general(const Assignment& solution, const Backbone& backbone, std::size_t t,
                                       std::uint64_t seed) {
  const auto& b = backbone.literals;
  const Var n = solution.num_vars();
  if (t > 0 && (b.empty() || n < 3))
    throw std::invalid_argument("gen_general needs a non-empty backbone and n >= 3");
  for (Lit l : b)
    if (l.var() > n || !solution.satisfies(l))
      throw std::invalid_argument("gen_general: backbone literal " + std::to_string(l.to_dimacs()) +
                                  " is not true in the solution");
  Rng rng(seed);
  std::vector<Clause> out;
  out.reserve(t);
  for (std::size_t i = 0; i < t; ++i) {
    const Lit x = b[rng.below(b.size())];
    Var y, z;
    do
      y = static_cast<Var>(rng.below(n)) + 1;
    while (y == x.var());
    do
      z = static_cast<Var>(rng.below(n)) + 1;
    while (z == x.var() || z == y);
    Clause c{x, Lit(y, rng.coin()), Lit(z, rng.coin())};
    normalize_clause(c);
    out.push_back(std::move(c));
  }
  return out;
}

struct QualityRow {
  std::size_t clauseId = 0;
  std::size_t correct = 0;
  std::size_t width = 0;
  double quality = 0; ///< correct / width, 0 for the empty clause
};

struct QualityReport {
  std::vector<QualityRow> perClause;
  double meanQuality = 0;
  double meanCorrectLiterals = 0;
};

inline QualityReport quality_report(const std::vector<Clause>& clauses, const Assignment& solution) {
  QualityReport report;
  report.perClause.reserve(clauses.size());
  double sumQuality = 0, sumCorrect = 0;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    for (Lit l : clauses[i])
      if (l.var() > solution.num_vars())
        throw std::invalid_argument("quality_report: solution does not cover variable " + std::to_string(l.var()));
    QualityRow row;
    row.clauseId = i;
    row.width = clauses[i].size();
    row.correct = count_satisfied_literals(clauses[i], solution);
    row.quality = row.width ? static_cast<double>(row.correct) / static_cast<double>(row.width) : 0.0;
    sumQuality += row.quality;
    sumCorrect += static_cast<double>(row.correct);
    report.perClause.push_back(row);
  }
  if (!clauses.empty()) {
    report.meanQuality = sumQuality / static_cast<double>(clauses.size());
    report.meanCorrectLiterals = sumCorrect / static_cast<double>(clauses.size());
  }
  return report;
}

} // namespace gapsat
