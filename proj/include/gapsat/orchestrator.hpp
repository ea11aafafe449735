#pragma once

// The GapSAT pipeline: short probSAT run, clause mining with a per-width
// strategy, then probSAT on the augmented formula until the budget runs out.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapsat/cdcl.hpp"
#include "gapsat/cnf.hpp"
#include "gapsat/random.hpp"
#include "gapsat/sls.hpp"

namespace gapsat {

enum class Track { plain_sls, k3, k5, k7, fallback };

inline const char* to_string(Track t) {
  switch (t) {
  case Track::plain_sls:
    return "plain-sls";
  case Track::k3:
    return "k3";
  case Track::k5:
    return "k5";
  case Track::k7:
    return "k7";
  default:
    return "fallback";
  }
}

struct Strategy {
  Track track = Track::plain_sls;
  std::uint64_t initialFlips = 0;
  double minerSeconds = 0;
  std::size_t widthLimit = 0;
  std::optional<double> countCapPercent;
  bool earlyStop = false;

  bool mines() const { return track == Track::k3 || track == Track::k5 || track == Track::k7; }
  bool operator==(const Strategy&) const = default;
};

inline constexpr Var plainSlsVariableThreshold = 9000;
inline constexpr double defaultMinerSeconds = 300.0;

inline Strategy select_strategy(const Formula& formula) {
  if (formula.num_vars() > plainSlsVariableThreshold)
    return {Track::plain_sls, 0, 0, 0, std::nullopt, false};
  switch (formula.max_width_or_zero()) {
  case 3:
    return {Track::k3, 35'000'000, defaultMinerSeconds, 4, std::nullopt, false};
  case 5:
    return {Track::k5, 15'000'000, defaultMinerSeconds, 8, 5.0, true};
  case 7:
    return {Track::k7, 6'000'000, defaultMinerSeconds, 9, 1.0, true};
  default:
    return {Track::fallback, 0, 0, 0, std::nullopt, false};
  }
}

/// floor(percent * m / 100).
inline std::size_t percent_cap(double percent, std::size_t m) {
  return static_cast<std::size_t>(std::floor(percent * static_cast<double>(m) / 100.0 + 1e-9));
}

/// F with the given clauses appended; clauses already present (or repeated)
/// are dropped. The input formula is not modified.
inline Formula augment(const Formula& formula, const std::vector<Clause>& extra) {
  std::set<Clause> present(formula.clauses().begin(), formula.clauses().end());
  std::vector<Clause> clauses = formula.clauses();
  for (Clause c : extra) {
    for (Lit l : c)
      if (l.var() == 0 || l.var() > formula.num_vars())
        throw std::out_of_range("augment: literal " + std::to_string(l.to_dimacs()) + " outside 1.." +
                                std::to_string(formula.num_vars()));
    normalize_clause(c);
    if (present.insert(c).second)
      clauses.push_back(std::move(c));
  }
  return Formula(formula.num_vars(), std::move(clauses));
}

struct GapsatConfig {
  std::optional<ScoringFunction> scoring; ///< default by maximal clause width
  double minerSeconds = defaultMinerSeconds;
  /// Deterministic mode: bound the miner by conflicts and the final phase by flips.
  std::optional<std::uint64_t> minerConflicts;
  std::optional<std::uint64_t> finalMaxFlips;
  std::optional<std::uint64_t> initialFlips;
  std::optional<std::size_t> widthLimit;
  std::optional<double> countCapPercent;
};

enum class Phase { none, initial_sls, miner, final_sls };

inline const char* to_string(Phase p) {
  switch (p) {
  case Phase::initial_sls:
    return "initial-sls";
  case Phase::miner:
    return "miner";
  case Phase::final_sls:
    return "final-sls";
  default:
    return "none";
  }
}

struct SolveResult {
  enum class Status { sat, unsat, unknown };

  Status status = Status::unknown;
  std::optional<Assignment> model;
  Phase phaseSolved = Phase::none;
  Strategy strategy;
  ScoringFunction scoring;
  double initialSeconds = 0, minerSeconds = 0, finalSeconds = 0;
  std::uint64_t initialFlips = 0, finalFlips = 0;
  std::uint64_t minerConflicts = 0, minerLearned = 0;
  std::size_t clausesAdded = 0;

  std::uint64_t total_flips() const { return initialFlips + finalFlips; }

  /// Everything except wall-clock timings. Two runs with the same formula,
  /// seed and deterministic budgets produce the same string.
  std::string fingerprint() const {
    std::ostringstream out;
    out << "status=" << status_name() << " phase=" << to_string(phaseSolved) << " track=" << to_string(strategy.track)
        << " scoring=" << scoring.describe() << " flips_initial=" << initialFlips << " flips_final=" << finalFlips
        << " miner_conflicts=" << minerConflicts << " miner_learned=" << minerLearned
        << " clauses_added=" << clausesAdded;
    if (model)
      out << " model=" << format_model(*model);
    return out.str();
  }

  /// Machine-readable phase accounting line.
  std::string accounting_line() const {
    std::ostringstream out;
    out << "c gapsat status=" << status_name() << " phase=" << to_string(phaseSolved)
        << " track=" << to_string(strategy.track) << " flips_initial=" << initialFlips
        << " flips_final=" << finalFlips << " seconds_initial=" << initialSeconds
        << " seconds_miner=" << minerSeconds << " seconds_final=" << finalSeconds
        << " miner_conflicts=" << minerConflicts << " clauses_added=" << clausesAdded;
    return out.str();
  }

  const char* status_name() const {
    return status == Status::sat ? "SATISFIABLE" : status == Status::unsat ? "UNSATISFIABLE" : "UNKNOWN";
  }
};

inline SolveResult run_gapsat(const Formula& formula, double wallBudgetSeconds, std::uint64_t seed,
                              const GapsatConfig& config = {}) {
  if (!(wallBudgetSeconds > 0))
    throw std::invalid_argument("run_gapsat needs a positive wall budget");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(wallBudgetSeconds));
  auto seconds_since = [](Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); };

  SolveResult result;
  result.strategy = select_strategy(formula);
  Strategy& strategy = result.strategy;
  if (strategy.mines()) {
    if (config.initialFlips)
      strategy.initialFlips = *config.initialFlips;
    if (config.widthLimit)
      strategy.widthLimit = *config.widthLimit;
    if (config.countCapPercent)
      strategy.countCapPercent = *config.countCapPercent;
    strategy.minerSeconds = config.minerSeconds;
  }
  result.scoring = config.scoring ? *config.scoring : default_scoring(formula.max_width_or_zero());

  Rng seeds(seed);
  const std::uint64_t initialSeed = seeds.fork();
  const std::uint64_t minerSeed = seeds.fork();
  const std::uint64_t finalSeed = seeds.fork();

  auto accept_model = [&](const Assignment& model, Phase phase) {
    if (!formula.satisfied_by(model))
      throw std::logic_error("run_gapsat: model does not satisfy the original formula");
    result.status = SolveResult::Status::sat;
    result.model = model;
    result.phaseSolved = phase;
  };

  if (!strategy.mines()) {
    const SlsLimits limits{config.finalMaxFlips.value_or(UINT64_MAX), deadline};
    const RunResult run = probsat_run(formula, limits, initialSeed, result.scoring);
    result.initialFlips = run.flipsUsed;
    result.initialSeconds = run.wallSeconds;
    if (run.solved())
      accept_model(*run.model, Phase::initial_sls);
    return result;
  }

  const RunResult first = probsat_run(formula, SlsLimits{strategy.initialFlips, deadline}, initialSeed, result.scoring);
  result.initialFlips = first.flipsUsed;
  result.initialSeconds = first.wallSeconds;
  if (first.solved()) {
    accept_model(*first.model, Phase::initial_sls);
    return result;
  }

  const double remaining = wallBudgetSeconds - seconds_since(start);
  if (remaining <= 0)
    return result;
  MiningBudget budget;
  budget.wallSeconds = std::min(strategy.minerSeconds, remaining);
  budget.conflictLimit = config.minerConflicts;
  budget.widthLimit = strategy.widthLimit;
  if (strategy.earlyStop && strategy.countCapPercent)
    budget.countCap = percent_cap(*strategy.countCapPercent, formula.num_clauses());
  const MiningOutcome mined = cdcl_solve_and_mine(formula, budget, minerSeed);
  result.minerSeconds = mined.seconds;
  result.minerConflicts = mined.conflicts;
  result.minerLearned = mined.totalLearnedSeen;
  if (mined.status == MiningOutcome::Status::sat) {
    accept_model(*mined.model, Phase::miner);
    return result;
  }
  if (mined.status == MiningOutcome::Status::unsat) {
    result.status = SolveResult::Status::unsat;
    result.phaseSolved = Phase::miner;
    return result;
  }

  std::optional<std::size_t> cap;
  if (strategy.countCapPercent)
    cap.emplace(percent_cap(*strategy.countCapPercent, formula.num_clauses()));
  const auto added = filter_learned(mined.learned, strategy.widthLimit, cap, FilterMode::chronological, 0);
  const Formula augmented = augment(formula, added);
  result.clausesAdded = augmented.num_clauses() - formula.num_clauses();

  if (Clock::now() >= deadline)
    return result;
  const SlsLimits limits{config.finalMaxFlips.value_or(UINT64_MAX), deadline};
  const RunResult last = probsat_run(augmented, limits, finalSeed, result.scoring);
  result.finalFlips = last.flipsUsed;
  result.finalSeconds = last.wallSeconds;
  if (last.solved())
    accept_model(*last.model, Phase::final_sls);
  return result;
}

} // namespace gapsat
