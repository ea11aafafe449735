#pragma once

// Minimal CDCL solver that doubles as a learned-clause miner.
//
// Two-watched-literal propagation, 1-UIP learning with local minimization,
// VSIDS decisions with phase saving, Luby restarts and a learned-clause
// database that keeps short clauses and the most recently used half of the
// rest. Every learned clause is offered to the miner, which keeps those
// within the width limit.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapsat/cnf.hpp"
#include "gapsat/random.hpp"

namespace gapsat {

struct LearnedClauseRecord {
  Clause clause; ///< canonical order
  std::size_t width = 0;
  std::uint64_t learnIndex = 0;
};

struct MiningBudget {
  double wallSeconds = 300.0;
  std::optional<std::uint64_t> conflictLimit;
  std::size_t widthLimit = std::numeric_limits<std::size_t>::max();
  /// Stop as soon as this many distinct clauses within widthLimit were learned.
  std::optional<std::size_t> countCap;

  void validate() const {
    if (!(wallSeconds > 0))
      throw std::invalid_argument("mining budget needs wallSeconds > 0");
    if (widthLimit < 1)
      throw std::invalid_argument("mining budget needs widthLimit >= 1");
  }
};

struct MiningOutcome {
  enum class Status { sat, unsat, budget_exhausted };

  Status status = Status::budget_exhausted;
  std::optional<Assignment> model;
  std::vector<LearnedClauseRecord> learned; ///< width-filtered, deduplicated, learn order
  std::uint64_t totalLearnedSeen = 0;
  std::uint64_t conflicts = 0;
  bool capReached = false;
  double seconds = 0;
};

inline const char* to_string(MiningOutcome::Status s) {
  switch (s) {
  case MiningOutcome::Status::sat:
    return "sat";
  case MiningOutcome::Status::unsat:
    return "unsat";
  default:
    return "budget-exhausted";
  }
}

/// Luby sequence scaled by y: luby(2, i) = 1 1 2 1 1 2 4 ...
inline double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (std::uint64_t i = 0; i < seq; ++i)
    r *= y;
  return r;
}

class CdclSolver {
public:
  static constexpr std::uint32_t noReason = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::uint64_t restartBase = 64;
  static constexpr double activityDecay = 0.95;
  static constexpr std::size_t keepWidth = 12;

  struct LearnResult {
    Clause clause; ///< asserting literal first
    int backjumpLevel = 0;
  };

  CdclSolver(const Formula& formula, std::uint64_t seed)
      : formula_(&formula), rng_(seed), numVars_(formula.num_vars()) {
    const std::size_t n = numVars_;
    assigns_.assign(n + 1, undef);
    level_.assign(n + 1, 0);
    reason_.assign(n + 1, noReason);
    seen_.assign(n + 1, 0);
    polarity_.assign(n + 1, false);
    activity_.assign(n + 1, 0.0);
    heapIndex_.assign(n + 1, -1);
    watches_.resize(2 * n + 2);
    for (Var v = 1; v <= numVars_; ++v) {
      polarity_[v] = rng_.coin();
      activity_[v] = rng_.unit() * 1e-5;
    }
    for (Var v = 1; v <= numVars_; ++v)
      heap_insert(v);

    for (std::size_t i = 0; i < formula.num_clauses() && !unsat_; ++i) {
      if (formula.is_tautology(i))
        continue;
      const Clause& c = formula.clause(i);
      if (c.empty()) {
        unsat_ = true;
      } else if (c.size() == 1) {
        const int val = value(c[0]);
        if (val == 0)
          unsat_ = true;
        else if (val == undef)
          enqueue(c[0], noReason);
      } else {
        attach(add_clause(c, false));
      }
    }
    maxLearnts_ = std::max<double>(static_cast<double>(formula.num_clauses()) / 3.0, 1000.0);
  }

  // --- low-level interface, used by the search loop and by tests -----------

  int decision_level() const { return static_cast<int>(trailLim_.size()); }
  int level(Var v) const { return level_[v]; }
  const std::vector<Lit>& trail() const { return trail_; }

  /// 1 true, 0 false, 2 unassigned.
  int value(Lit l) const {
    const std::uint8_t a = assigns_[l.var()];
    return a == undef ? undef : (a ^ static_cast<std::uint8_t>(l.negative()));
  }

  bool root_conflict() const { return unsat_; }

  /// Open a new decision level and assign l.
  void decide(Lit l) {
    if (value(l) != undef)
      throw std::logic_error("decide on assigned literal " + std::to_string(l.to_dimacs()));
    trailLim_.push_back(static_cast<std::uint32_t>(trail_.size()));
    enqueue(l, noReason);
  }

  /// Propagate to fixpoint. Returns the literals of a falsified clause, if any.
  std::optional<Clause> unit_propagate() {
    lastConflict_ = propagate();
    if (lastConflict_ == noReason)
      return std::nullopt;
    return clauses_[lastConflict_].lits;
  }

  /// First-UIP analysis of the conflict found by the last unit_propagate.
  LearnResult learn_1uip() {
    if (lastConflict_ == noReason)
      throw std::logic_error("learn_1uip without a pending conflict");
    if (decision_level() == 0)
      throw std::logic_error("conflict at decision level 0: formula is unsatisfiable");
    return analyze(lastConflict_);
  }

  void backjump(int targetLevel) { cancel_until(targetLevel); }

  // --- search ---------------------------------------------------------------

  MiningOutcome solve(const MiningBudget& budget) {
    budget.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(budget.wallSeconds));
    MiningOutcome out;
    std::set<Clause> exported;

    auto finish = [&](MiningOutcome::Status s) {
      out.status = s;
      out.conflicts = conflicts_;
      out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    };
    auto cap_reached = [&] { return budget.countCap && out.learned.size() >= *budget.countCap; };

    if (unsat_)
      return finish(MiningOutcome::Status::unsat);
    if (cap_reached()) {
      out.capReached = true;
      return finish(MiningOutcome::Status::budget_exhausted);
    }
    cancel_until(0);

    std::uint64_t restarts = 0;
    std::uint64_t restartLimit = restartBase;
    std::uint64_t conflictsThisRestart = 0;
    std::uint64_t loops = 0;

    for (;;) {
      if ((++loops & 63) == 0 && std::chrono::steady_clock::now() >= deadline)
        return finish(MiningOutcome::Status::budget_exhausted);

      const std::uint32_t confl = propagate();
      if (confl != noReason) {
        ++conflicts_;
        ++conflictsThisRestart;
        if (decision_level() == 0) {
          unsat_ = true;
          return finish(MiningOutcome::Status::unsat);
        }
        LearnResult learnt = analyze(confl);
        cancel_until(learnt.backjumpLevel);
        if (learnt.clause.size() == 1) {
          enqueue(learnt.clause[0], noReason);
        } else {
          const std::uint32_t cref = add_clause(learnt.clause, true);
          attach(cref);
          learnts_.push_back(cref);
          enqueue(learnt.clause[0], cref);
        }
        var_inc_ /= activityDecay;

        const std::uint64_t index = out.totalLearnedSeen++;
        if (learnt.clause.size() <= budget.widthLimit) {
          Clause canonical = learnt.clause;
          normalize_clause(canonical);
          if (exported.insert(canonical).second)
            out.learned.push_back({canonical, canonical.size(), index});
        }
        if (cap_reached()) {
          out.capReached = true;
          return finish(MiningOutcome::Status::budget_exhausted);
        }
        if (budget.conflictLimit && conflicts_ >= *budget.conflictLimit)
          return finish(MiningOutcome::Status::budget_exhausted);
        continue;
      }

      if (conflictsThisRestart >= restartLimit) {
        cancel_until(0);
        conflictsThisRestart = 0;
        restartLimit = static_cast<std::uint64_t>(luby(2, ++restarts) * restartBase);
      }
      if (static_cast<double>(learnts_.size()) >= maxLearnts_ + static_cast<double>(trail_.size())) {
        reduce_db();
        maxLearnts_ *= 1.1;
      }

      const Var next = pick_branch_var();
      if (next == 0) {
        Assignment model(numVars_);
        for (Var v = 1; v <= numVars_; ++v)
          model.set(v, assigns_[v] == 1);
        if (!formula_->satisfied_by(model))
          throw std::logic_error("CDCL produced an assignment that is not a model");
        out.model = std::move(model);
        return finish(MiningOutcome::Status::sat);
      }
      decide(Lit(next, !polarity_[next]));
    }
  }

private:
  static constexpr std::uint8_t undef = 2;

  struct StoredClause {
    Clause lits;
    bool learnt = false;
    bool deleted = false;
    std::uint64_t lastUsed = 0;
  };
  struct Watch {
    std::uint32_t cref;
    Lit blocker;
  };

  std::uint32_t add_clause(const Clause& lits, bool learnt) {
    clauses_.push_back({lits, learnt, false, conflicts_});
    return static_cast<std::uint32_t>(clauses_.size() - 1);
  }

  void attach(std::uint32_t cref) {
    const Clause& c = clauses_[cref].lits;
    watches_[c[0].code()].push_back({cref, c[1]});
    watches_[c[1].code()].push_back({cref, c[0]});
  }

  void enqueue(Lit l, std::uint32_t reason) {
    assigns_[l.var()] = l.negative() ? 0 : 1;
    level_[l.var()] = decision_level();
    reason_[l.var()] = reason;
    trail_.push_back(l);
  }

  std::uint32_t propagate() {
    std::uint32_t conflict = noReason;
    while (qhead_ < trail_.size()) {
      const Lit falseLit = ~trail_[qhead_++];
      std::vector<Watch>& ws = watches_[falseLit.code()];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const Watch w = ws[i];
        if (value(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        StoredClause& sc = clauses_[w.cref];
        if (sc.deleted) {
          ++i;
          continue;
        }
        Clause& c = sc.lits;
        if (c[0] == falseLit)
          std::swap(c[0], c[1]);
        ++i;
        const Lit first = c[0];
        const Watch kept{w.cref, first};
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = kept;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            c[1] = c[k];
            c[k] = falseLit;
            watches_[c[1].code()].push_back(kept);
            moved = true;
            break;
          }
        }
        if (moved)
          continue;
        ws[j++] = kept;
        if (value(first) == 0) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size())
            ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != noReason)
        break;
    }
    return conflict;
  }

  LearnResult analyze(std::uint32_t confl) {
    LearnResult out;
    Clause& learnt = out.clause;
    learnt.push_back(Lit()); // asserting literal goes here
    int pathCount = 0;
    bool havePivot = false;
    Lit p;
    std::size_t index = trail_.size();

    do {
      StoredClause& sc = clauses_[confl];
      if (sc.learnt)
        sc.lastUsed = conflicts_;
      for (std::size_t j = havePivot ? 1 : 0; j < sc.lits.size(); ++j) {
        const Lit q = sc.lits[j];
        const Var v = q.var();
        if (seen_[v] || level_[v] == 0)
          continue;
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          ++pathCount;
        else
          learnt.push_back(q);
      }
      while (!seen_[trail_[--index].var()]) {
      }
      p = trail_[index];
      havePivot = true;
      confl = reason_[p.var()];
      seen_[p.var()] = 0;
      --pathCount;
    } while (pathCount > 0);
    learnt[0] = ~p;

    // Local minimization: drop literals implied by other literals of the clause.
    std::vector<Lit> dropped;
    std::size_t kept = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      const std::uint32_t r = reason_[learnt[i].var()];
      bool redundant = r != noReason;
      if (redundant) {
        const Clause& rc = clauses_[r].lits;
        for (std::size_t k = 1; k < rc.size(); ++k) {
          if (!seen_[rc[k].var()] && level_[rc[k].var()] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (redundant)
        dropped.push_back(learnt[i]);
      else
        learnt[kept++] = learnt[i];
    }
    learnt.resize(kept);
    for (Lit l : learnt)
      seen_[l.var()] = 0;
    for (Lit l : dropped)
      seen_[l.var()] = 0;

    if (learnt.size() > 1) {
      std::size_t best = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[learnt[i].var()] > level_[learnt[best].var()])
          best = i;
      std::swap(learnt[1], learnt[best]);
      out.backjumpLevel = level_[learnt[1].var()];
    }
    return out;
  }

  void cancel_until(int target) {
    if (decision_level() <= target)
      return;
    for (std::size_t i = trail_.size(); i-- > trailLim_[target];) {
      const Var v = trail_[i].var();
      polarity_[v] = assigns_[v] == 1;
      assigns_[v] = undef;
      reason_[v] = noReason;
      if (heapIndex_[v] < 0)
        heap_insert(v);
    }
    trail_.resize(trailLim_[target]);
    trailLim_.resize(target);
    qhead_ = trail_.size();
  }

  bool locked(std::uint32_t cref) const {
    const Lit first = clauses_[cref].lits[0];
    return reason_[first.var()] == cref && value(first) == 1;
  }

  void reduce_db() {
    std::vector<std::uint32_t> candidates, keep;
    for (std::uint32_t cref : learnts_) {
      if (clauses_[cref].lits.size() <= keepWidth || locked(cref))
        keep.push_back(cref);
      else
        candidates.push_back(cref);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
      return clauses_[a].lastUsed < clauses_[b].lastUsed;
    });
    const std::size_t drop = candidates.size() / 2;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (i < drop) {
        clauses_[candidates[i]].deleted = true;
        Clause().swap(clauses_[candidates[i]].lits);
      } else {
        keep.push_back(candidates[i]);
      }
    }
    std::sort(keep.begin(), keep.end());
    learnts_ = std::move(keep);
    for (auto& ws : watches_)
      std::erase_if(ws, [&](const Watch& w) { return clauses_[w.cref].deleted; });
  }

  // VSIDS order heap (max-heap on activity, ties to the smaller variable).

  bool heap_less(Var a, Var b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_insert(Var v) {
    heapIndex_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }
  void heap_up(std::size_t i) {
    const Var v = heap_[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent]))
        break;
      heap_[i] = heap_[parent];
      heapIndex_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heapIndex_[v] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    const Var v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size())
        break;
      if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child]))
        ++child;
      if (!heap_less(heap_[child], v))
        break;
      heap_[i] = heap_[child];
      heapIndex_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heapIndex_[v] = static_cast<int>(i);
  }
  Var heap_pop() {
    const Var top = heap_.front();
    heapIndex_[top] = -1;
    const Var last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heapIndex_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(Var v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (Var u = 1; u <= numVars_; ++u)
        activity_[u] *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heapIndex_[v] >= 0)
      heap_up(static_cast<std::size_t>(heapIndex_[v]));
  }

  Var pick_branch_var() {
    while (!heap_.empty()) {
      const Var v = heap_pop();
      if (assigns_[v] == undef)
        return v;
    }
    return 0;
  }

  const Formula* formula_;
  Rng rng_;
  Var numVars_;
  bool unsat_ = false;

  std::vector<StoredClause> clauses_;
  std::vector<std::uint32_t> learnts_;
  std::vector<std::vector<Watch>> watches_;

  std::vector<std::uint8_t> assigns_;
  std::vector<int> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<std::uint8_t> seen_;
  std::vector<bool> polarity_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trailLim_;
  std::size_t qhead_ = 0;
  std::uint32_t lastConflict_ = noReason;

  std::vector<double> activity_;
  std::vector<Var> heap_;
  std::vector<int> heapIndex_;
  double var_inc_ = 1.0;
  double maxLearnts_ = 0;
  std::uint64_t conflicts_ = 0;
};

inline MiningOutcome cdcl_solve_and_mine(const Formula& formula, const MiningBudget& budget, std::uint64_t seed) {
  CdclSolver solver(formula, seed);
  return solver.solve(budget);
}

enum class FilterMode { chronological, random };

/// Width filter first, then either the first countCap in learn order or a
/// uniform random countCap-subset (kept in learn order).
inline std::vector<Clause> filter_learned(const std::vector<LearnedClauseRecord>& records, std::size_t widthLimit,
                                          std::optional<std::size_t> countCap, FilterMode mode, std::uint64_t seed) {
  std::vector<const LearnedClauseRecord*> qualifying;
  for (const auto& r : records)
    if (r.width <= widthLimit)
      qualifying.push_back(&r);
  if (countCap && qualifying.size() > *countCap) {
    if (mode == FilterMode::random) {
      Rng rng(seed);
      rng.shuffle(std::span(qualifying));
      qualifying.resize(*countCap);
      std::sort(qualifying.begin(), qualifying.end(),
                [](auto* a, auto* b) { return a->learnIndex < b->learnIndex; });
    } else {
      qualifying.resize(*countCap);
    }
  }
  std::vector<Clause> out;
  out.reserve(qualifying.size());
  for (const auto* r : qualifying)
    out.push_back(r->clause);
  return out;
}

} // namespace gapsat
