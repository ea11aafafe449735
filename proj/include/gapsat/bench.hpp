#pragma once

// Benchmark harness: run every (instance, solver, seed) trial, aggregate PAR2
// scores and compare solvers pairwise on per-instance mean PAR2.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "gapsat/cnf.hpp"
#include "gapsat/orchestrator.hpp"
#include "gapsat/sls.hpp"
#include "gapsat/stats.hpp"

namespace gapsat {

struct TrialRecord {
  std::string instanceId;
  std::string solverId;
  std::uint64_t seed = 0;
  bool solved = false;
  std::uint64_t flips = 0;
  double seconds = 0;
  std::string note;

  double measured(Currency c) const { return c == Currency::flips ? static_cast<double>(flips) : seconds; }

  auto key() const { return std::tie(instanceId, solverId, seed); }
};

struct BenchBudget {
  Currency currency = Currency::flips;
  double timeout = 1e6;
};

struct SolverConfig {
  enum class Kind { probsat, gapsat };

  std::string id;
  Kind kind = Kind::probsat;
  std::optional<ScoringFunction> scoring; ///< default by maximal clause width
  GapsatConfig gapsat;
};

struct BenchInstance {
  std::string id;
  std::shared_ptr<const Formula> formula;
};

/// Run one trial. Exceptions are recorded as unsolved trials with a note.
inline TrialRecord run_trial(const BenchInstance& instance, const SolverConfig& solver, std::uint64_t seed,
                             const BenchBudget& budget) {
  TrialRecord rec{instance.id, solver.id, seed, false, 0, 0, ""};
  const auto start = std::chrono::steady_clock::now();
  try {
    const Formula& f = *instance.formula;
    if (solver.kind == SolverConfig::Kind::probsat) {
      const ScoringFunction scoring = solver.scoring ? *solver.scoring : default_scoring(f.max_width_or_zero());
      SlsLimits limits;
      if (budget.currency == Currency::flips)
        limits.maxFlips = static_cast<std::uint64_t>(budget.timeout);
      else
        limits.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(budget.timeout));
      const RunResult r = probsat_run(f, limits, seed, scoring);
      rec.solved = r.solved();
      rec.flips = r.flipsUsed;
    } else {
      GapsatConfig cfg = solver.gapsat;
      if (solver.scoring)
        cfg.scoring = solver.scoring;
      double wall = budget.timeout;
      if (budget.currency == Currency::flips) {
        // Flip budgets cover both probSAT phases; the miner is bounded separately.
        const auto total = static_cast<std::uint64_t>(budget.timeout);
        const Strategy s = select_strategy(f);
        const std::uint64_t initial = std::min<std::uint64_t>(cfg.initialFlips.value_or(s.initialFlips), total);
        cfg.initialFlips = initial;
        cfg.finalMaxFlips = s.mines() ? total - initial : total;
        wall = 1e9;
      }
      const SolveResult r = run_gapsat(f, wall, seed, cfg);
      rec.solved = r.status == SolveResult::Status::sat;
      rec.flips = r.total_flips();
      if (r.status == SolveResult::Status::unsat)
        rec.note = "unsat";
    }
  } catch (const std::exception& e) {
    rec.solved = false;
    rec.note = std::string("error: ") + e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget.currency == Currency::seconds && rec.seconds > budget.timeout)
    rec.solved = false;
  return rec;
}

struct SolverSummary {
  std::string solverId;
  std::size_t solvedCount = 0;
  std::size_t trials = 0;
  double score = 0; ///< sum over instances of mean PAR2
  std::map<std::string, double> meanPar2; ///< per instance
};

struct PairwiseStats {
  std::string solverA, solverB;
  std::optional<double> t, tP, wilcoxonW, wilcoxonP, cohensD;
  std::string note;
};

struct BenchmarkSummary {
  BenchBudget budget;
  std::vector<SolverSummary> solvers;
  std::vector<PairwiseStats> pairwise;
};

inline void sort_records(std::vector<TrialRecord>& records) {
  std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) { return a.key() < b.key(); });
}

/// Derive the summary from trial records alone.
inline BenchmarkSummary summarize(const std::vector<TrialRecord>& records, const BenchBudget& budget,
                                  bool welch = false) {
  BenchmarkSummary summary;
  summary.budget = budget;
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> sums;
  std::map<std::string, SolverSummary> bySolver;
  for (const auto& r : records) {
    auto& s = bySolver[r.solverId];
    s.solverId = r.solverId;
    ++s.trials;
    s.solvedCount += r.solved ? 1 : 0;
    auto& acc = sums[r.solverId][r.instanceId];
    acc.first += par2(r.solved, r.measured(budget.currency), budget.timeout);
    ++acc.second;
  }
  for (auto& [id, s] : bySolver) {
    for (const auto& [instance, acc] : sums[id]) {
      const double m = acc.first / static_cast<double>(acc.second);
      s.meanPar2[instance] = m;
      s.score += m;
    }
    summary.solvers.push_back(s);
  }

  for (std::size_t i = 0; i < summary.solvers.size(); ++i) {
    for (std::size_t j = i + 1; j < summary.solvers.size(); ++j) {
      const auto& A = summary.solvers[i];
      const auto& B = summary.solvers[j];
      PairwiseStats ps{A.solverId, B.solverId, {}, {}, {}, {}, {}, ""};
      std::vector<double> a, b;
      for (const auto& [instance, value] : A.meanPar2) {
        auto it = B.meanPar2.find(instance);
        if (it != B.meanPar2.end()) {
          a.push_back(value);
          b.push_back(it->second);
        }
      }
      auto attempt = [&](auto&& fn) {
        try {
          fn();
        } catch (const std::exception& e) {
          ps.note += (ps.note.empty() ? "" : "; ") + std::string(e.what());
        }
      };
      attempt([&] {
        const auto r = welch ? welch_t_test(a, b) : paired_t_test(a, b);
        ps.t = r.t;
        ps.tP = r.p;
      });
      attempt([&] {
        const auto r = wilcoxon_signed_rank(a, b);
        ps.wilcoxonW = r.wPlus;
        ps.wilcoxonP = r.p;
      });
      attempt([&] { ps.cohensD = cohens_d(a, b); });
      summary.pairwise.push_back(ps);
    }
  }
  return summary;
}

struct BenchReport {
  std::vector<TrialRecord> records; ///< sorted by (instanceId, solverId, seed)
  BenchmarkSummary summary;
};

/// Every (instance, solver, run) trial with seed baseSeed + run, on a pool of
/// `workers` threads. Output does not depend on the worker count.
inline BenchReport run_suite(const std::vector<BenchInstance>& instances, const std::vector<SolverConfig>& solvers,
                             std::size_t runsPerInstance, const BenchBudget& budget, std::uint64_t baseSeed,
                             std::size_t workers = 1) {
  if (instances.empty() || solvers.empty())
    throw std::invalid_argument("run_suite needs at least one instance and one solver");
  if (!(budget.timeout > 0))
    throw std::invalid_argument("run_suite needs a positive timeout");
  struct Job {
    std::size_t instance, solver;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (std::size_t s = 0; s < solvers.size(); ++s)
      for (std::size_t r = 0; r < runsPerInstance; ++r)
        jobs.push_back({i, s, baseSeed + r});

  BenchReport report;
  report.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();)
      report.records[k] = run_trial(instances[jobs[k].instance], solvers[jobs[k].solver], jobs[k].seed, budget);
  };
  workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w)
    pool.emplace_back(work);
  work();
  for (auto& t : pool)
    t.join();

  sort_records(report.records);
  report.summary = summarize(report.records, budget);
  return report;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "instanceId,solverId,seed,solved,flips,seconds\n";
  out.precision(9);
  for (const auto& r : records)
    out << r.instanceId << ',' << r.solverId << ',' << r.seed << ',' << (r.solved ? 1 : 0) << ',' << r.flips << ','
        << r.seconds << '\n';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

inline std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("instanceId,solverId,seed,solved,flips,seconds", 0) != 0)
    throw std::runtime_error("trials CSV: unexpected header");
  std::vector<TrialRecord> out;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty())
      continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < 6)
      throw std::runtime_error("trials CSV line " + std::to_string(lineNo) + ": expected 6 columns");
    TrialRecord r;
    r.instanceId = cells[0];
    r.solverId = cells[1];
    r.seed = std::stoull(cells[2]);
    r.solved = cells[3] == "1";
    r.flips = std::stoull(cells[4]);
    r.seconds = std::stod(cells[5]);
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_summary_csv(std::ostream& out, const BenchmarkSummary& summary) {
  out.precision(12);
  out << "solverId,solved,trials,score\n";
  for (const auto& s : summary.solvers)
    out << s.solverId << ',' << s.solvedCount << ',' << s.trials << ',' << s.score << '\n';
}

inline void write_pairwise_csv(std::ostream& out, const BenchmarkSummary& summary) {
  out.precision(12);
  auto opt = [&](const std::optional<double>& v) {
    if (v)
      out << *v;
  };
  out << "solverA,solverB,t,tP,wilcoxonW,wilcoxonP,cohensD,note\n";
  for (const auto& p : summary.pairwise) {
    out << p.solverA << ',' << p.solverB << ',';
    opt(p.t);
    out << ',';
    opt(p.tP);
    out << ',';
    opt(p.wilcoxonW);
    out << ',';
    opt(p.wilcoxonP);
    out << ',';
    opt(p.cohensD);
    std::string note = p.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out << ',' << note << '\n';
  }
}

/// Sorted measured values of solved trials for one solver (cactus plot data).
inline void write_cactus_csv(std::ostream& out, const std::vector<TrialRecord>& records, const std::string& solverId,
                             Currency currency) {
  std::vector<double> values;
  for (const auto& r : records)
    if (r.solverId == solverId && r.solved)
      values.push_back(r.measured(currency));
  std::sort(values.begin(), values.end());
  out.precision(12);
  out << "solved," << to_string(currency) << '\n';
  for (std::size_t i = 0; i < values.size(); ++i)
    out << i + 1 << ',' << values[i] << '\n';
}

} // namespace gapsat
