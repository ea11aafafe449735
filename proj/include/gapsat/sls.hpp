#pragma once

// probSAT without restarts, with incrementally maintained break values.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapsat/cnf.hpp"
#include "gapsat/random.hpp"

namespace gapsat {

/// f(break) for the break-only probSAT variants:
///   poly: (epsilon + break)^-cb
///   exp:  cb^-break
struct ScoringFunction {
  enum class Kind { poly, exp };

  Kind kind = Kind::exp;
  double epsilon = 0.9;
  double cb = 3.0;

  static ScoringFunction poly(double epsilon, double cb) { return {Kind::poly, epsilon, cb}; }
  static ScoringFunction exp(double cb) { return {Kind::exp, 0.0, cb}; }

  void validate() const {
    if (kind == Kind::poly && !(epsilon > 0 && cb > 0))
      throw std::invalid_argument("poly scoring needs epsilon > 0 and cb > 0");
    if (kind == Kind::exp && !(cb > 1))
      throw std::invalid_argument("exp scoring needs cb > 1");
  }

  double operator()(std::uint32_t breaks) const {
    const double b = static_cast<double>(breaks);
    return kind == Kind::poly ? std::pow(epsilon + b, -cb) : std::pow(cb, -b);
  }

  std::string describe() const {
    return kind == Kind::poly ? "poly(eps=" + std::to_string(epsilon) + ",cb=" + std::to_string(cb) + ")"
                              : "exp(cb=" + std::to_string(cb) + ")";
  }
};

/// Default parameters by maximal clause width.
inline ScoringFunction default_scoring(std::size_t maxWidth) {
  switch (maxWidth) {
  case 3:
    return ScoringFunction::poly(0.9, 2.06);
  case 5:
    return ScoringFunction::exp(3.7);
  case 7:
    return ScoringFunction::exp(5.4);
  default:
    return ScoringFunction::exp(3.0);
  }
}

/// f(break) tabulated for break = 0..maxBreak.
class ScoreTable {
public:
  ScoreTable(const ScoringFunction& scoring, std::uint32_t maxBreak) : values_(maxBreak + 1) {
    scoring.validate();
    for (std::uint32_t b = 0; b <= maxBreak; ++b)
      values_[b] = scoring(b);
  }
  double operator[](std::uint32_t breaks) const { return values_[breaks]; }
  std::size_t size() const { return values_.size(); }

private:
  std::vector<double> values_;
};

/// Mutable local-search state over an immutable formula.
///
/// Invariants after every public call:
///  - satisfied(c) is the number of true literals of clause c;
///  - break_count(v) is the number of clauses whose only true literal is over v;
///  - falsified() lists exactly the clauses with no true literal.
/// Tautological clauses are always satisfied and are not tracked.
class SlsState {
public:
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  SlsState(const Formula& formula, std::uint64_t seed) : formula_(&formula), rng_(seed) {
    const Var n = formula.num_vars();
    const std::size_t m = formula.num_clauses();
    alpha_ = Assignment(n);
    for (Var v = 1; v <= n; ++v)
      alpha_.set(v, rng_.coin());

    std::vector<std::uint32_t> counts(2 * static_cast<std::size_t>(n) + 2, 0);
    for (std::size_t c = 0; c < m; ++c) {
      if (formula.is_tautology(c))
        continue;
      for (Lit l : formula.clause(c))
        ++counts[l.code()];
    }
    occStart_.assign(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      occStart_[i + 1] = occStart_[i] + counts[i];
      maxOccurrences_ = std::max(maxOccurrences_, counts[i]);
    }
    occ_.resize(occStart_.back());
    std::vector<std::uint32_t> fill(occStart_.begin(), occStart_.end() - 1);
    for (std::size_t c = 0; c < m; ++c) {
      if (formula.is_tautology(c))
        continue;
      for (Lit l : formula.clause(c))
        occ_[fill[l.code()]++] = static_cast<std::uint32_t>(c);
    }

    numTrue_.assign(m, 0);
    critical_.assign(m, 0);
    breaks_.assign(n + 1, 0);
    falsifiedPos_.assign(m, npos);
    for (std::size_t c = 0; c < m; ++c) {
      if (formula.is_tautology(c)) {
        numTrue_[c] = 2;
        continue;
      }
      for (Lit l : formula.clause(c)) {
        if (alpha_.satisfies(l)) {
          ++numTrue_[c];
          critical_[c] = l.var();
        }
      }
      if (numTrue_[c] == 0)
        add_falsified(static_cast<std::uint32_t>(c));
      else if (numTrue_[c] == 1)
        ++breaks_[critical_[c]];
    }
  }

  const Formula& formula() const { return *formula_; }
  const Assignment& assignment() const { return alpha_; }
  std::uint32_t break_count(Var v) const { return breaks_[v]; }
  std::uint32_t satisfied(std::size_t clause) const { return numTrue_[clause]; }
  std::span<const std::uint32_t> falsified() const { return falsified_; }
  bool is_falsified(std::size_t clause) const { return falsifiedPos_[clause] != npos; }
  std::uint64_t flips() const { return flips_; }
  std::uint32_t max_occurrences() const { return maxOccurrences_; }
  Rng& rng() { return rng_; }

  void flip(Var v) {
    const Lit wasTrue = alpha_.true_literal(v);
    const Lit nowTrue = ~wasTrue;
    alpha_.flip(v);
    ++flips_;

    for (std::uint32_t c : occurrences(nowTrue)) {
      const std::uint32_t t = ++numTrue_[c];
      if (t == 1) {
        remove_falsified(c);
        critical_[c] = v;
        ++breaks_[v];
      } else if (t == 2) {
        --breaks_[critical_[c]];
      }
    }
    for (std::uint32_t c : occurrences(wasTrue)) {
      const std::uint32_t t = --numTrue_[c];
      if (t == 0) {
        add_falsified(c);
        --breaks_[v];
      } else if (t == 1) {
        for (Lit l : formula_->clause(c)) {
          if (alpha_.satisfies(l)) {
            critical_[c] = l.var();
            break;
          }
        }
        ++breaks_[critical_[c]];
      }
    }
  }

private:
  std::span<const std::uint32_t> occurrences(Lit l) const {
    return {occ_.data() + occStart_[l.code()], occ_.data() + occStart_[l.code() + 1]};
  }
  void add_falsified(std::uint32_t c) {
    falsifiedPos_[c] = static_cast<std::uint32_t>(falsified_.size());
    falsified_.push_back(c);
  }
  void remove_falsified(std::uint32_t c) {
    const std::uint32_t pos = falsifiedPos_[c];
    const std::uint32_t last = falsified_.back();
    falsified_[pos] = last;
    falsifiedPos_[last] = pos;
    falsified_.pop_back();
    falsifiedPos_[c] = npos;
  }

  const Formula* formula_;
  Rng rng_;
  Assignment alpha_;
  std::vector<std::uint32_t> occStart_;
  std::vector<std::uint32_t> occ_;
  std::vector<std::uint32_t> numTrue_;
  std::vector<Var> critical_;
  std::vector<std::uint32_t> breaks_;
  std::vector<std::uint32_t> falsified_;
  std::vector<std::uint32_t> falsifiedPos_;
  std::uint64_t flips_ = 0;
  std::uint32_t maxOccurrences_ = 0;
};

/// Selection probabilities over the literals of a falsified clause, in clause order.
inline std::vector<double> flip_distribution(const SlsState& state, std::size_t clause, const ScoreTable& table) {
  if (!state.is_falsified(clause))
    throw std::invalid_argument("flip_distribution: clause " + std::to_string(clause) + " is not falsified");
  const Clause& c = state.formula().clause(clause);
  std::vector<double> p(c.size());
  double sum = 0;
  for (std::size_t j = 0; j < c.size(); ++j)
    sum += p[j] = table[state.break_count(c[j].var())];
  for (double& x : p)
    x /= sum;
  return p;
}

inline std::vector<double> flip_distribution(const SlsState& state, std::size_t clause,
                                             const ScoringFunction& scoring) {
  return flip_distribution(state, clause, ScoreTable(scoring, state.max_occurrences()));
}

struct RunResult {
  enum class Status { solved, flips_exhausted };

  Status status = Status::flips_exhausted;
  std::uint64_t flipsUsed = 0;
  std::optional<Assignment> model;
  std::uint64_t seed = 0;
  double wallSeconds = 0;

  bool solved() const { return status == Status::solved; }
};

struct SlsLimits {
  std::uint64_t maxFlips = std::numeric_limits<std::uint64_t>::max();
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// probSAT without restarts. Returns once the formula is satisfied, maxFlips
/// flips were made, or the deadline passed. A returned model has been checked
/// against every clause.
inline RunResult probsat_run(const Formula& formula, const SlsLimits& limits, std::uint64_t seed,
                             const ScoringFunction& scoring) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.seed = seed;

  SlsState state(formula, seed);
  const ScoreTable table(scoring, state.max_occurrences());
  const bool hasEmptyClause = std::any_of(formula.clauses().begin(), formula.clauses().end(),
                                          [](const Clause& c) { return c.empty(); });
  std::vector<double> weights(formula.max_width_or_zero());
  Rng& rng = state.rng();

  constexpr std::uint64_t clockInterval = 1 << 14;
  std::uint64_t i = 0;
  while (!hasEmptyClause) {
    if (state.falsified().empty()) {
      if (!formula.satisfied_by(state.assignment()))
        throw std::logic_error("probsat_run: incremental state claims a model that is not one");
      result.status = RunResult::Status::solved;
      result.model = state.assignment();
      break;
    }
    if (i == limits.maxFlips)
      break;
    if (limits.deadline && i % clockInterval == 0 && std::chrono::steady_clock::now() >= *limits.deadline)
      break;

    const auto falsified = state.falsified();
    const Clause& c = formula.clause(falsified[rng.below(falsified.size())]);
    double sum = 0;
    for (std::size_t j = 0; j < c.size(); ++j)
      sum += weights[j] = table[state.break_count(c[j].var())];
    double r = rng.unit() * sum;
    std::size_t pick = 0;
    while (pick + 1 < c.size() && r >= weights[pick])
      r -= weights[pick++];
    state.flip(c[pick].var());
    ++i;
  }

  result.flipsUsed = state.flips();
  result.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

inline RunResult probsat_run(const Formula& formula, std::uint64_t maxFlips, std::uint64_t seed,
                             const ScoringFunction& scoring) {
  return probsat_run(formula, SlsLimits{maxFlips, std::nullopt}, seed, scoring);
}

} // namespace gapsat
