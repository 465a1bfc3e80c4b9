#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tlp/errors.hpp"

namespace tlp {

enum class Endpoint : std::uint8_t { start, end };

inline const char *to_string(Endpoint e) { return e == Endpoint::start ? "start" : "end"; }

// start(a) or end(a) for a token name a.
struct Term {
  Endpoint endpoint = Endpoint::start;
  std::string token;

  auto operator<=>(const Term &) const = default;
  bool operator==(const Term &) const = default;
};

inline Term start_of(std::string token) { return {Endpoint::start, std::move(token)}; }
inline Term end_of(std::string token) { return {Endpoint::end, std::move(token)}; }

inline std::string to_string(const Term &t) {
  return std::string(to_string(t.endpoint)) + "(" + t.token + ")";
}

// lhs <= rhs when !strict, lhs strictly before rhs when strict.
struct Atom {
  Term lhs;
  Term rhs;
  bool strict = false;

  auto operator<=>(const Atom &) const = default;
  bool operator==(const Atom &) const = default;
};

inline Atom weak(Term l, Term r) { return {std::move(l), std::move(r), false}; }
inline Atom strict(Term l, Term r) { return {std::move(l), std::move(r), true}; }

inline std::string to_string(const Atom &a) {
  return to_string(a.lhs) + (a.strict ? " < " : " <= ") + to_string(a.rhs);
}

// A clause is a conjunction of atoms, kept as a set.
using Clause = std::set<Atom>;

// name[variable = value], used both for quantifiers and triggers.
struct TokenBinding {
  std::string token;
  std::string variable;
  std::string value;

  auto operator<=>(const TokenBinding &) const = default;
  bool operator==(const TokenBinding &) const = default;
};

struct ExistentialStatement {
  std::vector<TokenBinding> quantifiers;
  Clause clause;

  bool operator==(const ExistentialStatement &) const = default;

  const TokenBinding *find_quantifier(const std::string &token) const {
    for (const auto &q : quantifiers)
      if (q.token == token)
        return &q;
    return nullptr;
  }
};

struct SynchronizationRule {
  std::string id;
  std::optional<TokenBinding> trigger; // empty: triggerless rule
  std::vector<ExistentialStatement> statements;

  bool operator==(const SynchronizationRule &) const = default;

  bool triggerless() const { return !trigger.has_value(); }
  bool is_trigger(const std::string &token) const { return trigger && trigger->token == token; }
};

struct StateVariable {
  std::string name;
  std::set<std::string> values;
  std::map<std::string, std::set<std::string>> transitions;

  bool operator==(const StateVariable &) const = default;

  bool has_value(const std::string &v) const { return values.count(v) != 0; }

  // Values allowed right after v; empty for values without a transition entry.
  const std::set<std::string> &successors(const std::string &v) const {
    static const std::set<std::string> none;
    auto it = transitions.find(v);
    return it == transitions.end() ? none : it->second;
  }
};

struct PlanningProblem {
  std::vector<StateVariable> variables;
  std::vector<SynchronizationRule> rules;

  bool operator==(const PlanningProblem &) const = default;

  const StateVariable *find_variable(const std::string &name) const {
    for (const auto &v : variables)
      if (v.name == name)
        return &v;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Plans

struct Token {
  std::string variable;
  std::string value;
  std::int64_t duration = 1;

  bool operator==(const Token &) const = default;
};

struct Timeline {
  std::string variable;
  std::vector<Token> tokens;

  bool operator==(const Timeline &) const = default;

  std::int64_t horizon() const {
    std::int64_t h = 0;
    for (const auto &t : tokens)
      h += t.duration;
    return h;
  }
  std::int64_t start_time(std::size_t i) const {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < i; ++j)
      s += tokens[j].duration;
    return s;
  }
  std::int64_t end_time(std::size_t i) const { return start_time(i) + tokens[i].duration; }
};

struct Plan {
  std::map<std::string, Timeline> timelines;

  bool operator==(const Plan &) const = default;
};

// Common horizon of all timelines. Throws MalformedPlan when they differ.
inline std::int64_t horizon(const Plan &plan) {
  std::optional<std::int64_t> h;
  for (const auto &[name, tl] : plan.timelines) {
    auto th = tl.horizon();
    if (h && *h != th)
      throw MalformedPlan("timeline '" + name + "' has horizon " + std::to_string(th) +
                          ", expected " + std::to_string(*h));
    h = th;
  }
  return h.value_or(0);
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;
  std::string rule;                     // empty for variable-level violations
  std::optional<std::size_t> statement; // statement index inside the rule
  std::string detail;

  bool operator==(const Violation &) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(const std::string &code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation &v) { return v.code == code; });
  }
};

inline bool is_identifier(const std::string &s) {
  if (s.empty())
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

// start(a) <= end(a) or start(a) < end(a): holds tacitly for every token.
inline bool is_self_atom(const Atom &a) {
  return a.lhs.token == a.rhs.token && a.lhs.endpoint == Endpoint::start &&
         a.rhs.endpoint == Endpoint::end;
}

namespace detail {

inline void check_binding(const PlanningProblem &p, const TokenBinding &b, const std::string &rule,
                          std::optional<std::size_t> stmt, ValidationReport &out) {
  if (!is_identifier(b.token))
    out.violations.push_back({"bad-identifier", rule, stmt, b.token});
  const auto *var = p.find_variable(b.variable);
  if (!var) {
    out.violations.push_back({"unknown-variable", rule, stmt, b.variable});
    return;
  }
  if (!var->has_value(b.value))
    out.violations.push_back({"unknown-value", rule, stmt, b.variable + "=" + b.value});
}

} // namespace detail

// Every violated structural invariant of the problem; empty when valid.
inline ValidationReport validate_problem(const PlanningProblem &p) {
  ValidationReport out;
  std::set<std::string> names;
  for (const auto &var : p.variables) {
    if (!is_identifier(var.name))
      out.violations.push_back({"bad-identifier", "", {}, var.name});
    if (!names.insert(var.name).second)
      out.violations.push_back({"duplicate-variable", "", {}, var.name});
    if (var.values.empty())
      out.violations.push_back({"empty-domain", "", {}, var.name});
    for (const auto &v : var.values)
      if (!is_identifier(v))
        out.violations.push_back({"bad-identifier", "", {}, var.name + "." + v});
    for (const auto &[src, dsts] : var.transitions) {
      if (!var.has_value(src))
        out.violations.push_back({"transition-source-unknown", "", {}, var.name + "." + src});
      for (const auto &d : dsts)
        if (!var.has_value(d))
          out.violations.push_back({"transition-target-unknown", "", {}, var.name + "." + d});
    }
  }

  std::set<std::string> rule_ids;
  for (const auto &rule : p.rules) {
    if (!rule_ids.insert(rule.id).second)
      out.violations.push_back({"duplicate-rule-id", rule.id, {}, rule.id});
    if (rule.trigger)
      detail::check_binding(p, *rule.trigger, rule.id, {}, out);
    if (rule.statements.empty())
      out.violations.push_back({"empty-rule", rule.id, {}, "rule has no existential statement"});

    for (std::size_t si = 0; si < rule.statements.size(); ++si) {
      const auto &st = rule.statements[si];
      std::set<std::string> bound;
      for (const auto &q : st.quantifiers) {
        detail::check_binding(p, q, rule.id, si, out);
        if (rule.is_trigger(q.token))
          out.violations.push_back({"trigger-name-clash", rule.id, si, q.token});
        else if (!bound.insert(q.token).second)
          out.violations.push_back({"duplicate-token-name", rule.id, si, q.token});
      }

      std::set<Term> occurring;
      for (const auto &atom : st.clause) {
        for (const auto *t : {&atom.lhs, &atom.rhs}) {
          occurring.insert(*t);
          if (!bound.count(t->token) && !rule.is_trigger(t->token))
            out.violations.push_back({"unknown-token", rule.id, si, t->token});
        }
        if (is_self_atom(atom))
          out.violations.push_back({"self-atom", rule.id, si, to_string(atom)});
      }
      for (const auto &q : st.quantifiers)
        if (!occurring.count(start_of(q.token)) && !occurring.count(end_of(q.token)))
          out.violations.push_back({"unused-quantifier", rule.id, si, q.token});
      if (rule.trigger) {
        if (!occurring.count(start_of(rule.trigger->token)))
          out.violations.push_back({"trigger-start-missing", rule.id, si, rule.trigger->token});
        if (!occurring.count(end_of(rule.trigger->token)))
          out.violations.push_back({"trigger-end-missing", rule.id, si, rule.trigger->token});
      }
    }
  }
  return out;
}

// Drops every start(a) <= end(a) / start(a) < end(a) atom from each clause.
inline SynchronizationRule normalize_rule(SynchronizationRule rule) {
  for (auto &st : rule.statements)
    std::erase_if(st.clause, is_self_atom);
  return rule;
}

inline PlanningProblem normalize_problem(PlanningProblem p) {
  for (auto &r : p.rules)
    r = normalize_rule(std::move(r));
  return p;
}

struct PreparedProblem {
  PlanningProblem problem; // normalized
  ValidationReport report;
};

// Normalizes, then validates. Occurrence checks (trigger endpoints, unused
// quantifiers) are judged on the rule as written: start(a0) < end(a0) is
// the usual way to mention both endpoints, and normalization removes it.
inline PreparedProblem prepare_problem(const PlanningProblem &raw) {
  PreparedProblem out{normalize_problem(raw), {}};
  const auto before = validate_problem(raw);
  for (auto &v : validate_problem(out.problem).violations) {
    const bool occurrence = v.code == "unused-quantifier" || v.code == "trigger-start-missing" ||
                            v.code == "trigger-end-missing";
    if (!occurrence ||
        std::find(before.violations.begin(), before.violations.end(), v) != before.violations.end())
      out.report.violations.push_back(std::move(v));
  }
  return out;
}

// Checks per-timeline well-formedness against the problem's variables:
// one timeline per variable, values in domain, transitions respected,
// positive durations, common horizon.
inline std::vector<std::string> plan_defects(const Plan &plan, const PlanningProblem &p) {
  std::vector<std::string> out;
  for (const auto &var : p.variables)
    if (!plan.timelines.count(var.name))
      out.push_back("missing timeline for '" + var.name + "'");
  for (const auto &[name, tl] : plan.timelines) {
    const auto *var = p.find_variable(name);
    if (!var) {
      out.push_back("timeline for unknown variable '" + name + "'");
      continue;
    }
    for (std::size_t i = 0; i < tl.tokens.size(); ++i) {
      const auto &tok = tl.tokens[i];
      if (tok.variable != name)
        out.push_back("token " + std::to_string(i) + " of '" + name + "' names variable '" +
                      tok.variable + "'");
      if (tok.duration < 1)
        out.push_back("token " + std::to_string(i) + " of '" + name + "' has duration " +
                      std::to_string(tok.duration));
      if (!var->has_value(tok.value))
        out.push_back("value '" + tok.value + "' not in domain of '" + name + "'");
      if (i > 0 && !var->successors(tl.tokens[i - 1].value).count(tok.value))
        out.push_back("transition " + tl.tokens[i - 1].value + " -> " + tok.value +
                      " not allowed for '" + name + "'");
    }
  }
  try {
    horizon(plan);
  } catch (const MalformedPlan &e) {
    out.push_back(e.what());
  }
  return out;
}

} // namespace tlp
