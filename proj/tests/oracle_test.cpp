#include <gtest/gtest.h>

#include "gapsat/generator.hpp"
#include "gapsat/oracle.hpp"
#include "gapsat/orchestrator.hpp"
#include "support/brute_force.hpp"

using namespace gapsat;

namespace {

Clause C(std::initializer_list<long> lits) { return clause_from_dimacs(lits); }

std::vector<long> dimacs(const std::vector<Lit>& lits) {
  std::vector<long> out;
  for (Lit l : lits)
    out.push_back(l.to_dimacs());
  std::sort(out.begin(), out.end(), [](long a, long b) { return std::labs(a) < std::labs(b); });
  return out;
}

std::pair<Formula, Assignment> planted(Var n, double ratio, std::uint64_t seed) {
  GenSpec spec;
  spec.n = n;
  spec.k = 3;
  spec.ratio = ratio;
  spec.seed = seed;
  return gen_planted(spec);
}

} // namespace

TEST(Backbone, UnitFormula) {
  const auto bb = compute_backbone(Formula(1, {C({1})}));
  EXPECT_TRUE(bb.complete);
  EXPECT_EQ(dimacs(bb.literals), std::vector<long>{1});
}

TEST(Backbone, NoBackboneForBinaryClause) {
  const auto bb = compute_backbone(Formula(2, {C({1, 2})}));
  EXPECT_TRUE(bb.literals.empty());
}

TEST(Backbone, UnsatisfiableThrows) {
  EXPECT_THROW(compute_backbone(Formula(1, {C({1}), C({-1})})), UnsatisfiableError);
}

TEST(Backbone, MatchesEnumerationOnPlantedInstances) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto [f, hidden] = planted(15, 4.0 + 0.1 * static_cast<double>(seed), seed);
    const auto bb = compute_backbone(f, {100000, 10.0, seed});
    ASSERT_TRUE(bb.complete);
    EXPECT_EQ(dimacs(bb.literals), gapsat_test::backbone(f)) << "seed " << seed;
    for (Lit l : bb.literals)
      EXPECT_TRUE(hidden.satisfies(l));
  }
}

TEST(Backbone, BudgetExhaustionFlagsPartialResult) {
  GenSpec spec;
  spec.n = 300;
  spec.k = 3;
  spec.ratio = 4.26;
  spec.seed = 1;
  const Formula f = gen_uniform(spec);
  const auto bb = compute_backbone(f, {1, 10.0, 0});
  EXPECT_FALSE(bb.complete);
}

TEST(Deceptive, Construction) {
  Backbone bb;
  bb.literals = {Lit::from_dimacs(1), Lit::from_dimacs(-2), Lit::from_dimacs(3)};
  const auto clauses = gen_deceptive(bb, 50, 7);
  ASSERT_EQ(clauses.size(), 50u);
  Assignment solution(3);
  solution.set(1, true);
  solution.set(3, true);
  for (const auto& c : clauses) {
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(count_satisfied_literals(c, solution), 1u) << to_string(c);
  }
  // (x1 v x2 v -x3) keeps x1 and negates -x2 and x3.
  EXPECT_NE(std::find(clauses.begin(), clauses.end(), C({1, 2, -3})), clauses.end());
  EXPECT_TRUE(gen_deceptive(bb, 0, 1).empty());
  EXPECT_EQ(gen_deceptive(bb, 20, 3), gen_deceptive(bb, 20, 3));
}

TEST(Deceptive, BackboneTooSmall) {
  Backbone bb;
  bb.literals = {Lit::from_dimacs(1), Lit::from_dimacs(2)};
  EXPECT_THROW(gen_deceptive(bb, 1, 0), std::invalid_argument);
}

TEST(General, EveryClauseHasACorrectLiteral) {
  const auto [f, hidden] = planted(15, 4.5, 3);
  const auto bb = compute_backbone(f);
  ASSERT_FALSE(bb.literals.empty());
  const auto clauses = gen_general(hidden, bb, 300, 5);
  ASSERT_EQ(clauses.size(), 300u);
  for (const auto& c : clauses) {
    EXPECT_EQ(c.size(), 3u);
    EXPECT_FALSE(is_tautology(c));
    EXPECT_GE(count_satisfied_literals(c, hidden), 1u);
  }
  EXPECT_TRUE(gen_general(hidden, bb, 0, 1).empty());
}

TEST(General, MeanCorrectLiteralsNearTwo) {
  Assignment solution(200);
  Rng rng(1);
  for (Var v = 1; v <= 200; ++v)
    solution.set(v, rng.coin());
  Backbone bb;
  for (Var v = 1; v <= 50; ++v)
    bb.literals.push_back(solution.true_literal(v));
  const auto report = quality_report(gen_general(solution, bb, 10000, 9), solution);
  EXPECT_NEAR(report.meanCorrectLiterals, 2.0, 0.05);
}

TEST(General, Preconditions) {
  Assignment solution(5, true);
  Backbone empty;
  EXPECT_THROW(gen_general(solution, empty, 1, 0), std::invalid_argument);
  Backbone wrong;
  wrong.literals = {Lit::from_dimacs(-1)};
  EXPECT_THROW(gen_general(solution, wrong, 1, 0), std::invalid_argument);
}

TEST(InjectedModels, PreserveSolutionSet) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto [f, hidden] = planted(15, 4.6, 40 + seed);
    const auto bb = compute_backbone(f);
    const auto expected = gapsat_test::solutions(f);
    if (bb.literals.size() >= 3) {
      EXPECT_EQ(gapsat_test::solutions(augment(f, gen_deceptive(bb, 30, seed))), expected);
    }
    if (!bb.literals.empty()) {
      EXPECT_EQ(gapsat_test::solutions(augment(f, gen_general(hidden, bb, 30, seed))), expected);
    }
  }
}

TEST(QualityReport, Examples) {
  const auto r = quality_report({C({1, 2, 3})}, Assignment(3, true));
  EXPECT_DOUBLE_EQ(r.meanQuality, 1.0);
  EXPECT_DOUBLE_EQ(r.meanCorrectLiterals, 3.0);

  Backbone bb;
  Assignment solution(6);
  for (Var v = 1; v <= 6; ++v)
    solution.set(v, v % 2 == 0);
  for (Var v = 1; v <= 6; ++v)
    bb.literals.push_back(solution.true_literal(v));
  const auto deceptive = quality_report(gen_deceptive(bb, 100, 2), solution);
  EXPECT_DOUBLE_EQ(deceptive.meanCorrectLiterals, 1.0);
}

TEST(QualityReport, AggregatesMatchRows) {
  const std::vector<Clause> clauses = {C({1, -2}), C({-1, -2, 3, 4}), C({2})};
  Assignment a(4);
  a.set(1, true);
  a.set(4, true);
  const auto r = quality_report(clauses, a);
  ASSERT_EQ(r.perClause.size(), 3u);
  double q = 0, k = 0;
  for (const auto& row : r.perClause) {
    EXPECT_GE(row.quality, 0.0);
    EXPECT_LE(row.quality, 1.0);
    q += row.quality;
    k += static_cast<double>(row.correct);
  }
  EXPECT_DOUBLE_EQ(r.meanQuality, q / 3);
  EXPECT_DOUBLE_EQ(r.meanCorrectLiterals, k / 3);
  EXPECT_EQ(r.perClause[1].correct, 2u);
  EXPECT_DOUBLE_EQ(r.perClause[1].quality, 0.5);
}

TEST(QualityReport, IncompleteSolution) {
  EXPECT_THROW(quality_report({C({1, 5})}, Assignment(3)), std::invalid_argument);
}
