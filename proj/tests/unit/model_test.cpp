#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace tlp;
using namespace tlp::testing;

TEST(Validate, TriggerStartMissing) {
  auto rule = single_statement_rule({weak(end_of("a0"), end_of("a1"))});
  auto report = validate_problem(two_variable_problem(rule));
  EXPECT_TRUE(report.has("trigger-start-missing"));
  EXPECT_FALSE(report.has("trigger-end-missing"));
}

TEST(Validate, EmptyRuleSetIsValid) {
  PlanningProblem p;
  p.variables = {self_loop_variable("x", "v")};
  EXPECT_TRUE(validate_problem(p).ok());
}

TEST(Validate, UnusedQuantifier) {
  auto rule = eager_rule();
  rule.statements[0].quantifiers.push_back({"a2", "x1", "v1"});
  auto report = validate_problem(two_variable_problem(rule));
  ASSERT_EQ(report.violations.size(), 1U);
  EXPECT_EQ(report.violations[0].code, "unused-quantifier");
  EXPECT_EQ(report.violations[0].rule, "r1");
  EXPECT_EQ(report.violations[0].statement, 0U);
}

TEST(Validate, EagerExampleIsValid) { EXPECT_TRUE(validate_problem(eager_problem()).ok()); }

// Each mutation breaks one invariant and is reported under its code.
TEST(Validate, SingleInvariantMutations) {
  struct Case {
    const char *code;
    void (*mutate)(PlanningProblem &);
  };
  const Case cases[] = {
      {"duplicate-variable", [](PlanningProblem &p) { p.variables.push_back(p.variables[0]); }},
      {"empty-domain", [](PlanningProblem &p) { p.variables.push_back({"y", {}, {}}); }},
      {"transition-target-unknown", [](PlanningProblem &p) { p.variables[0].transitions["v0"].insert("zz"); }},
      {"transition-source-unknown", [](PlanningProblem &p) { p.variables[0].transitions["zz"] = {"v0"}; }},
      {"unknown-variable", [](PlanningProblem &p) { p.rules[0].trigger->variable = "nope"; }},
      {"unknown-value", [](PlanningProblem &p) { p.rules[0].statements[0].quantifiers[0].value = "v0"; }},
      {"duplicate-rule-id", [](PlanningProblem &p) { p.rules.push_back(p.rules[0]); }},
      {"empty-rule", [](PlanningProblem &p) { p.rules[0].statements.clear(); }},
      {"trigger-end-missing",
       [](PlanningProblem &p) { p.rules[0].statements[0].clause.erase(weak(end_of("a0"), end_of("a1"))); }},
      {"unknown-token",
       [](PlanningProblem &p) { p.rules[0].statements[0].clause.insert(weak(end_of("zz"), end_of("a1"))); }},
      {"self-atom",
       [](PlanningProblem &p) { p.rules[0].statements[0].clause.insert(strict(start_of("a1"), end_of("a1"))); }},
      {"trigger-name-clash",
       [](PlanningProblem &p) { p.rules[0].statements[0].quantifiers.push_back({"a0", "x0", "v0"}); }},
      {"bad-identifier", [](PlanningProblem &p) { p.variables[0].name = "x-0"; }},
  };
  for (const auto &c : cases) {
    auto p = eager_problem();
    c.mutate(p);
    EXPECT_TRUE(validate_problem(p).has(c.code)) << c.code;
  }
}

TEST(Validate, GeneratedProblemsAreValidAfterNormalization) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    auto p = normalize_problem(random_problem(rng));
    auto report = validate_problem(p);
    // Dropping self atoms may leave a quantifier or trigger endpoint unused.
    for (const auto &v : report.violations)
      EXPECT_TRUE(v.code == "unused-quantifier" || v.code == "trigger-start-missing" ||
                  v.code == "trigger-end-missing")
          << v.code;
  }
}

TEST(Normalize, DropsSelfAtoms) {
  auto rule = single_statement_rule({strict(start_of("a1"), end_of("a1")),
                                     weak(start_of("a0"), end_of("a1")),
                                     weak(end_of("a1"), start_of("a0"))});
  auto n = normalize_rule(rule);
  EXPECT_EQ(n.statements[0].clause,
            (Clause{weak(start_of("a0"), end_of("a1")), weak(end_of("a1"), start_of("a0"))}));
}

TEST(Normalize, FixpointWithoutSelfAtoms) {
  EXPECT_EQ(normalize_rule(eager_rule()), eager_rule());
}

TEST(Normalize, ReversedSelfAtomIsKept) {
  auto rule = single_statement_rule({strict(end_of("a1"), start_of("a1"))});
  EXPECT_EQ(normalize_rule(rule), rule);
  EXPECT_FALSE(is_consistent(close_clause(rule.statements[0].clause)));
}

TEST(Normalize, Idempotent) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto p = random_problem(rng);
    for (const auto &r : p.rules)
      EXPECT_EQ(normalize_rule(normalize_rule(r)), normalize_rule(r));
  }
}

// start(a0) < end(a0) names both trigger endpoints even though
// normalization drops it.
TEST(Prepare, SelfAtomCountsAsOccurrence) {
  auto rule = single_statement_rule({strict(start_of("a0"), end_of("a0")), weak(end_of("a1"), end_of("a0"))});
  auto raw = two_variable_problem(rule);
  auto prepared = prepare_problem(raw);
  EXPECT_TRUE(prepared.report.ok());
  EXPECT_EQ(prepared.problem, normalize_problem(raw));
  EXPECT_TRUE(validate_problem(prepared.problem).has("trigger-start-missing"));

  auto missing = two_variable_problem(single_statement_rule({weak(end_of("a1"), end_of("a0"))}));
  EXPECT_TRUE(prepare_problem(missing).report.has("trigger-start-missing"));
}

TEST(Prepare, OtherViolationsUnchanged) {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    auto p = random_problem(rng);
    auto prepared = prepare_problem(p);
    auto n = validate_problem(prepared.problem);
    for (const auto &v : prepared.report.violations)
      EXPECT_NE(std::find(n.violations.begin(), n.violations.end(), v), n.violations.end());
    for (const auto &v : n.violations) {
      if (v.code != "unused-quantifier" && v.code != "trigger-start-missing" && v.code != "trigger-end-missing") {
        EXPECT_TRUE(prepared.report.has(v.code));
      }
    }
    EXPECT_FALSE(prepared.report.has("self-atom"));
  }
}

TEST(Horizon, Sums) {
  EXPECT_EQ(horizon(make_plan({{"x", {{"v", 2}, {"w", 3}}}})), 5);
  Plan empty;
  empty.timelines["x"] = {"x", {}};
  EXPECT_EQ(horizon(empty), 0);
  EXPECT_EQ(horizon(Plan{}), 0);
}

TEST(Horizon, MismatchThrows) {
  EXPECT_THROW(horizon(make_plan({{"x", {{"v", 1}}}, {"y", {{"u", 2}}}})), MalformedPlan);
}

TEST(Plan, TokenTimesIncrease) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto vars = random_total_variables(rng, 3, 3);
    auto plan = random_plan(rng, vars, uniform(rng, 1, 8));
    for (const auto &[name, tl] : plan.timelines)
      for (std::size_t k = 0; k < tl.tokens.size(); ++k) {
        EXPECT_GE(tl.start_time(k), 0);
        EXPECT_LT(tl.start_time(k), tl.end_time(k));
        if (k) {
          EXPECT_EQ(tl.start_time(k), tl.end_time(k - 1));
        }
      }
  }
}

TEST(Plan, DefectsDetectIllegalTransition) {
  PlanningProblem p;
  p.variables = {{"x", {"v", "w"}, {{"v", {"w"}}}}};
  EXPECT_TRUE(plan_defects(make_plan({{"x", {{"v", 1}, {"w", 1}}}}), p).empty());
  EXPECT_FALSE(plan_defects(make_plan({{"x", {{"w", 1}, {"v", 1}}}}), p).empty());
  EXPECT_FALSE(plan_defects(make_plan({{"x", {{"u", 1}}}}), p).empty());
}
