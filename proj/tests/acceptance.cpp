// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gapsat/gapsat.hpp"
#include "stats_reference.hpp"
#include "support/brute_force.hpp"
#include "support/sls_recount.hpp"

using namespace gapsat;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      if (pass)
        detail << "failed: ";
      else
        detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << x;
  return out.str();
}

std::vector<double> probsat_flips(const Formula& f, int runs, std::uint64_t maxFlips) {
  std::vector<double> flips;
  const ScoringFunction scoring = default_scoring(3);
  for (int r = 0; r < runs; ++r)
    flips.push_back(static_cast<double>(probsat_run(f, maxFlips, static_cast<std::uint64_t>(r), scoring).flipsUsed));
  return flips;
}

GenSpec spec3(Var n, std::size_t m, std::uint64_t seed) {
  GenSpec spec;
  spec.n = n;
  spec.k = 3;
  spec.m = m;
  spec.seed = seed;
  return spec;
}

// 1. General model on a satisfiable uniform random 3-SAT instance with ratio 4.2.
void general_model(Outcome& o) {
  constexpr Var n = 200;
  constexpr std::size_t m = 840;
  for (std::uint64_t seed = 0;; ++seed) {
    const Formula f = gen_uniform(spec3(n, m, seed));
    MiningBudget budget;
    budget.conflictLimit = 2'000'000;
    const auto solved = cdcl_solve_and_mine(f, budget, 0);
    if (solved.status != MiningOutcome::Status::sat)
      continue;
    const Backbone bb = compute_backbone(f, {5'000'000, 600.0, 0});
    if (!bb.complete || bb.literals.empty())
      continue;
    const Formula g = augment(f, gen_general(*solved.model, bb, 200, 1));
    const auto base = probsat_flips(f, 100, 1'000'000'000);
    const auto with = probsat_flips(g, 100, 1'000'000'000);
    const double speedup = mean(base) / mean(with);
    const auto w = wilcoxon_signed_rank(base, with);
    o.detail << "instance seed " << seed << ", n=" << n << " m=" << m << ", backbone " << bb.literals.size()
             << ", mean flips " << fmt(mean(base)) << " -> " << fmt(mean(with)) << " (" << fmt(speedup, 3)
             << "x), Wilcoxon p=" << fmt(w.p, 3) << ". ";
    o.require(speedup >= 10, "speed-up below 10x");
    o.require(w.p < 0.05, "Wilcoxon p >= 0.05");
    return;
  }
}

// 2. Deceptive model on a planted n=100, m=423 instance.
void deceptive_model(Outcome& o) {
  for (std::uint64_t seed = 0;; ++seed) {
    const auto [f, hidden] = gen_planted(spec3(100, 423, seed));
    const Backbone bb = compute_backbone(f);
    if (!bb.complete || bb.literals.size() < 8)
      continue;
    constexpr int runs = 2000;
    const std::vector<double> counts = {0, 10, 20, 40, 80};
    std::vector<double> means;
    for (double t : counts)
      means.push_back(mean(probsat_flips(augment(f, gen_deceptive(bb, static_cast<std::size_t>(t), 1)), runs,
                                         1'000'000'000)));
    const double rho = spearman_rho(counts, means);
    const double factor = means.back() / means.front();
    o.detail << "instance seed " << seed << ", backbone " << bb.literals.size() << ", mean flips over " << runs
             << " runs";
    for (std::size_t i = 0; i < counts.size(); ++i)
      o.detail << ' ' << counts[i] << ':' << fmt(means[i]);
    o.detail << ", 80 vs 0: " << fmt(factor, 3) << "x, Spearman " << fmt(rho, 3) << ". ";
    o.require(factor >= 10, "80 deceptive clauses raise mean flips by less than 10x");
    o.require(rho > 0.9, "trend not monotone (Spearman <= 0.9)");
    return;
  }
}

// 3. Level-2 resolvents have higher quality than level-1 resolvents.
void resolvent_quality(Outcome& o) {
  std::vector<double> q1, q2;
  for (std::uint64_t i = 0; i < 30; ++i) {
    GenSpec spec;
    spec.n = 60;
    spec.k = 3;
    spec.ratio = 4.26;
    spec.seed = 1000 + i;
    const auto [f, hidden] = gen_planted(spec);
    q1.push_back(quality_report(level1_resolvents(f, 4).clauses, hidden).meanQuality);
    q2.push_back(quality_report(level2_resolvents(f, 4).clauses, hidden).meanQuality);
  }
  const auto t = paired_t_test(q2, q1);
  o.detail << "30 planted instances n=60: mean quality level-1 " << fmt(mean(q1)) << ", level-2 " << fmt(mean(q2))
           << ", paired t=" << fmt(t.t) << " p=" << fmt(t.p, 3) << ". ";
  o.require(mean(q2) > mean(q1), "level-2 quality not higher");
  o.require(t.p < 0.05, "p >= 0.05");
}

// 4. Learned clauses are implied and verdicts match enumeration.
void learned_soundness(Outcome& o) {
  std::size_t sat = 0, unsat = 0, clauses = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Var n = static_cast<Var>(10 + i % 11);
    const auto m = static_cast<std::size_t>(std::lround((3.6 + 0.02 * static_cast<double>(i)) * n));
    const Formula f = gen_uniform(spec3(n, m, 500 + i));
    const auto models = gapsat_test::solutions(f);
    MiningBudget budget;
    budget.conflictLimit = 1'000'000;
    const auto out = cdcl_solve_and_mine(f, budget, i);
    const bool expected = !models.empty();
    if (out.status == MiningOutcome::Status::budget_exhausted) {
      o.require(false, "instance " + std::to_string(i) + " undecided");
      continue;
    }
    (expected ? sat : unsat)++;
    o.require((out.status == MiningOutcome::Status::sat) == expected,
              "verdict mismatch on instance " + std::to_string(i));
    if (out.model)
      o.require(f.satisfied_by(*out.model), "unverified model on instance " + std::to_string(i));
    for (const auto& rec : out.learned) {
      ++clauses;
      if (!gapsat_test::implied(models, rec.clause)) {
        o.require(false, "clause " + to_string(rec.clause) + " not implied on instance " + std::to_string(i));
        break;
      }
    }
  }
  o.detail << "100 instances (" << sat << " sat, " << unsat << " unsat), " << clauses
           << " learned clauses checked by enumeration. ";
  o.require(sat > 0 && unsat > 0, "instance mix is not mixed");
}

// 5. Every enrichment path preserves the solution set.
void equivalence(Outcome& o) {
  std::set<std::string> covered;
  for (std::uint64_t i = 0; i < 12; ++i) {
    GenSpec spec;
    spec.n = 15;
    spec.k = 3;
    spec.ratio = 4.0 + 0.1 * static_cast<double>(i);
    spec.seed = 300 + i;
    const auto [f, hidden] = gen_planted(spec);
    const auto expected = gapsat_test::solutions(f);
    auto check = [&](const std::string& path, const std::vector<Clause>& extra) {
      covered.insert(path);
      if (gapsat_test::solutions(augment(f, extra)) != expected)
        o.require(false, path + " changed the solution set on instance " + std::to_string(i));
    };
    check("level-1", sample_pool(level1_resolvents(f, 4), tenth_cap(f), i));
    check("level-1 full", level1_resolvents(f, 100).clauses);
    check("level-2", sample_pool(level2_resolvents(f, 4), tenth_cap(f), i));
    check("level-2 full", level2_resolvents(f, 100).clauses);
    check("ternary", ternary_saturate(f));
    MiningBudget budget;
    budget.conflictLimit = 300;
    std::vector<Clause> mined;
    for (const auto& r : cdcl_solve_and_mine(f, budget, i).learned)
      mined.push_back(r.clause);
    check("cdcl", mined);
    const Backbone bb = compute_backbone(f);
    if (bb.literals.size() >= 3)
      check("deceptive", gen_deceptive(bb, 40, i));
    if (!bb.literals.empty())
      check("general", gen_general(hidden, bb, 40, i));
  }
  o.detail << "12 planted instances n=15, paths:";
  for (const auto& p : covered)
    o.detail << ' ' << p;
  o.detail << ". ";
  o.require(covered.size() == 8, "not every path exercised");
}

// 6. Incremental SLS bookkeeping equals recomputation.
void sls_state(Outcome& o) {
  std::size_t checks = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    GenSpec spec;
    spec.n = 40 + static_cast<Var>(i) * 5;
    spec.k = i % 2 ? 5 : 3;
    spec.ratio = i % 2 ? 20.0 : 4.2;
    spec.seed = 700 + i;
    const Formula f = gen_uniform(spec);
    SlsState s(f, i);
    Rng rng(i + 1);
    for (int flip = 1; flip <= 10'000; ++flip) {
      s.flip(static_cast<Var>(rng.below(f.num_vars())) + 1);
      if (flip % 500 != 0)
        continue;
      ++checks;
      const auto r = gapsat_test::recount(s);
      bool same = true;
      for (Var v = 1; v <= f.num_vars(); ++v)
        same = same && s.break_count(v) == r.breaks[v];
      std::vector<std::uint32_t> registry(s.falsified().begin(), s.falsified().end());
      std::sort(registry.begin(), registry.end());
      same = same && registry == r.falsified;
      if (!same) {
        o.require(false, "mismatch on instance " + std::to_string(i) + " after " + std::to_string(flip) + " flips");
        break;
      }
    }
  }
  o.detail << "20 instances x 10^4 flips, " << checks << " full recomputations compared. ";
}

// 7. flip_distribution against direct f-ratios.
void distribution(Outcome& o) {
  std::size_t states = 0;
  double worstSum = 0, worstRel = 0;
  Rng rng(99);
  for (int kind = 0; kind < 2; ++kind) {
    const ScoringFunction scoring = kind == 0 ? ScoringFunction::poly(0.9, 2.06) : ScoringFunction::exp(3.7);
    for (int i = 0; i < 500; ++i) {
      GenSpec spec;
      spec.n = 30 + static_cast<Var>(rng.below(50));
      spec.k = 3 + 2 * rng.below(2);
      spec.ratio = spec.k == 3 ? 4.3 : 21.0;
      spec.seed = rng.next();
      const Formula f = gen_uniform(spec);
      SlsState s(f, rng.next());
      const auto walk = rng.below(200);
      for (std::uint64_t j = 0; j < walk; ++j)
        s.flip(static_cast<Var>(rng.below(f.num_vars())) + 1);
      if (s.falsified().empty())
        continue;
      const std::size_t c = s.falsified()[rng.below(s.falsified().size())];
      const auto p = flip_distribution(s, c, scoring);
      const auto r = gapsat_test::recount(s);
      std::vector<double> direct;
      double total = 0, sum = 0;
      for (Lit l : f.clause(c)) {
        const double b = r.breaks[l.var()];
        direct.push_back(scoring.kind == ScoringFunction::Kind::poly ? std::pow(scoring.epsilon + b, -scoring.cb)
                                                                     : std::pow(scoring.cb, -b));
        total += direct.back();
      }
      for (std::size_t k = 0; k < p.size(); ++k) {
        sum += p[k];
        worstRel = std::max(worstRel, std::abs(p[k] - direct[k] / total) / (direct[k] / total));
        o.require(p[k] >= 0, "negative probability");
      }
      worstSum = std::max(worstSum, std::abs(sum - 1));
      ++states;
    }
  }
  o.detail << states << " states (poly and exp), max |sum-1|=" << fmt(worstSum, 3)
           << ", max relative error=" << fmt(worstRel, 3) << ". ";
  o.require(states >= 1000, "fewer than 1000 states");
  o.require(worstSum <= 1e-9, "probabilities do not sum to 1");
  o.require(worstRel <= 1e-9, "relative error above 1e-9");
}

// 8. Dispatch table at the boundaries.
void dispatch(Outcome& o) {
  std::size_t rows = 0;
  for (Var n : {8999u, 9000u, 9001u}) {
    for (std::size_t w = 3; w <= 8; ++w) {
      Clause c;
      for (Var v = 1; v <= w; ++v)
        c.emplace_back(v, false);
      const Strategy s = select_strategy(Formula(n, {c}));
      Strategy e;
      if (n > 9000) {
        e.track = Track::plain_sls;
      } else if (w == 3) {
        e = {Track::k3, 35'000'000, 300.0, 4, std::nullopt, false};
      } else if (w == 5) {
        e = {Track::k5, 15'000'000, 300.0, 8, 5.0, true};
      } else if (w == 7) {
        e = {Track::k7, 6'000'000, 300.0, 9, 1.0, true};
      } else {
        e.track = Track::fallback;
      }
      ++rows;
      const bool same = s.track == e.track &&
                        (!e.mines() || (s.initialFlips == e.initialFlips && s.minerSeconds == e.minerSeconds &&
                                        s.widthLimit == e.widthLimit && s.countCapPercent == e.countCapPercent &&
                                        s.earlyStop == e.earlyStop));
      o.require(same, "n=" + std::to_string(n) + " width " + std::to_string(w) + " got " + to_string(s.track));
    }
  }
  o.detail << rows << " (n, width) rows checked. ";
}

// 9. PAR2 arithmetic.
void par2_fixtures(Outcome& o) {
  o.require(par2(true, 12345, 1e9) == 12345, "solved@12345");
  o.require(par2(false, 777, 1e9) == 2e9, "unsolved with timeout 1e9");
  o.require(default_flip_timeout(3) == 1'000'000'000u, "k=3 timeout");
  o.require(default_flip_timeout(5) == 500'000'000u, "k=5 timeout");
  o.require(default_flip_timeout(7) == 250'000'000u, "k=7 timeout");
  const std::vector<TrialRecord> recs = {{"a", "s", 0, true, 12345, 0, ""}, {"b", "s", 0, false, 5, 0, ""}};
  const double score = summarize(recs, {Currency::flips, 1e9}).solvers.at(0).score;
  o.require(score == 12345 + 2e9, "score is not the PAR2 sum");
  o.detail << "PAR2 fixtures, score " << fmt(score, 12) << ", timeouts 1e9/5e8/2.5e8. ";
}

// 10. Statistics against the scipy reference.
void statistics(Outcome& o) {
  const auto& cases = gapsat_test::stats_reference();
  double worstT = 0, worstD = 0, worstW = 0;
  for (const auto& c : cases) {
    const auto t = paired_t_test(c.a, c.b);
    worstT = std::max({worstT, std::abs(t.t - c.t), std::abs(t.p - c.tP)});
    worstD = std::max(worstD, std::abs(cohens_d(c.a, c.b) - c.cohensD));
    const auto w = wilcoxon_signed_rank(c.a, c.b);
    worstW = std::max(worstW, std::abs(w.p - c.wilcoxonP));
    o.require(w.wPlus == c.wPlus, "W+ mismatch");
  }
  o.require(cases.size() >= 10, "fewer than 10 reference vectors");
  o.require(worstT <= 1e-6, "t-test deviates");
  o.require(worstD <= 1e-6, "Cohen's d deviates");
  o.require(worstW <= 1e-4, "Wilcoxon p deviates");

  const std::vector<double> a = {1, 2, 3, 4};
  const auto same = paired_t_test(a, a);
  o.require(same.t == 0 && same.p == 1, "a=b t-test");
  o.require(cohens_d(a, a) == 0, "a=b Cohen's d");
  bool threw = false;
  try {
    wilcoxon_signed_rank(a, a);
  } catch (const std::domain_error&) {
    threw = true;
  }
  o.require(threw, "a=b Wilcoxon should be rejected");
  const std::vector<double> one = {1}, two = {2};
  const auto w = wilcoxon_signed_rank(one, two);
  o.require(w.wPlus == 0 && w.p == 1, "single-pair Wilcoxon");
  o.detail << cases.size() << " reference vectors, max error t/p " << fmt(worstT, 3) << ", d " << fmt(worstD, 3)
           << ", Wilcoxon p " << fmt(worstW, 3) << "; degenerate cases checked. ";
}

// 11. Deterministic pipeline and harness.
void determinism(Outcome& o) {
  std::size_t runs = 0;
  for (std::size_t k : {3u, 5u, 7u}) {
    GenSpec spec;
    spec.n = k == 3 ? 150 : 60;
    spec.k = k;
    spec.seed = 21;
    const Formula f = gen_uniform(spec);
    GapsatConfig cfg;
    cfg.initialFlips = 2000;
    cfg.minerConflicts = 500;
    cfg.finalMaxFlips = 50'000;
    for (std::uint64_t seed : {1u, 2u}) {
      const auto a = run_gapsat(f, 600.0, seed, cfg);
      const auto b = run_gapsat(f, 600.0, seed, cfg);
      ++runs;
      o.require(a.fingerprint() == b.fingerprint(), "gapsat k=" + std::to_string(k) + " differs between runs");
    }
  }

  std::vector<BenchInstance> instances;
  for (std::uint64_t i = 0; i < 3; ++i) {
    GenSpec spec;
    spec.n = 80;
    spec.seed = 40 + i;
    instances.push_back({"i" + std::to_string(i), std::make_shared<const Formula>(gen_planted(spec).first)});
  }
  SolverConfig sls{"probsat", SolverConfig::Kind::probsat, std::nullopt, {}};
  SolverConfig gap{"gapsat", SolverConfig::Kind::gapsat, std::nullopt, {}};
  gap.gapsat.initialFlips = 100;
  gap.gapsat.minerConflicts = 200;
  const BenchBudget budget{Currency::flips, 20'000};
  auto table = [](const BenchReport& r) {
    std::ostringstream out;
    for (const auto& t : r.records)
      out << t.instanceId << ',' << t.solverId << ',' << t.seed << ',' << t.solved << ',' << t.flips << ';';
    return out.str();
  };
  const auto one = run_suite(instances, {sls, gap}, 4, budget, 5, 1);
  const auto three = run_suite(instances, {sls, gap}, 4, budget, 5, 3);
  o.require(table(one) == table(three), "bench records depend on the worker count");
  o.detail << runs << " pipeline runs repeated, " << one.records.size()
           << " bench trials compared across 1 and 3 workers. ";
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"general-model clauses speed up probSAT", general_model},
      {"deceptive-model clauses slow down probSAT", deceptive_model},
      {"level-2 resolvents beat level-1 in quality", resolvent_quality},
      {"learned clauses are sound", learned_soundness},
      {"enrichment preserves the solution set", equivalence},
      {"incremental SLS state matches recomputation", sls_state},
      {"flip distribution matches f-ratios", distribution},
      {"dispatch table at the boundaries", dispatch},
      {"PAR2 and score arithmetic", par2_fixtures},
      {"statistics match the reference oracle", statistics},
      {"determinism of pipeline and harness", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " | "
              << o.detail.str() << "(" << fmt(secs, 3) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
