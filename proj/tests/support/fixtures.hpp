#pragma once

#include <string>

#include "tlp/tlp.hpp"

namespace tlp::testing {

inline StateVariable self_loop_variable(const std::string &name, const std::string &value) {
  return {name, {value}, {{value, {value}}}};
}

inline PlanningProblem two_variable_problem(SynchronizationRule rule) {
  PlanningProblem p;
  p.variables = {self_loop_variable("x0", "v0"), self_loop_variable("x1", "v1")};
  p.rules.push_back(std::move(rule));
  return p;
}

inline SynchronizationRule single_statement_rule(Clause clause) {
  SynchronizationRule r;
  r.id = "r1";
  r.trigger = TokenBinding{"a0", "x0", "v0"};
  r.statements.push_back({{{"a1", "x1", "v1"}}, std::move(clause)});
  return r;
}

// start(a0) = start(a1) & end(a0) <= end(a1)
inline SynchronizationRule eager_rule() {
  return single_statement_rule({weak(start_of("a0"), start_of("a1")),
                                weak(start_of("a1"), start_of("a0")),
                                weak(end_of("a0"), end_of("a1"))});
}

// start(a0) = start(a1) & end(a0) < end(a1)
inline SynchronizationRule strict_rule() {
  return single_statement_rule({weak(start_of("a0"), start_of("a1")),
                                weak(start_of("a1"), start_of("a0")),
                                strict(end_of("a0"), end_of("a1"))});
}

// start(a0) <= start(a1) & end(a0) <= end(a1)
inline SynchronizationRule weak_start_rule() {
  return single_statement_rule(
      {weak(start_of("a0"), start_of("a1")), weak(end_of("a0"), end_of("a1"))});
}

// start(a1) < end(a1) & start(a0) = end(a1), with the trigger's own
// endpoints joined by start(a0) < end(a0).
inline SynchronizationRule rewriting_rule() {
  return single_statement_rule({strict(start_of("a1"), end_of("a1")),
                                weak(start_of("a0"), end_of("a1")),
                                weak(end_of("a1"), start_of("a0")),
                                strict(start_of("a0"), end_of("a0"))});
}

inline PlanningProblem eager_problem() { return two_variable_problem(eager_rule()); }
inline PlanningProblem strict_problem() { return two_variable_problem(strict_rule()); }

inline Plan make_plan(std::initializer_list<std::pair<std::string, std::vector<std::pair<std::string, std::int64_t>>>> tls) {
  Plan plan;
  for (const auto &[var, toks] : tls) {
    Timeline tl{var, {}};
    for (const auto &[v, d] : toks)
      tl.tokens.push_back({var, v, d});
    plan.timelines[var] = std::move(tl);
  }
  return plan;
}

} // namespace tlp::testing
