#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlp/model.hpp"

// Automaton-free semantics of rules over concrete plans, plus exhaustive plan
// enumeration. Ground truth for the automata.
namespace tlp::oracle {

// A concrete token: position `index` in the timeline of `variable`.
struct TokenRef {
  std::string variable;
  std::size_t index = 0;

  auto operator<=>(const TokenRef &) const = default;
  bool operator==(const TokenRef &) const = default;
};

using MatchAssignment = std::map<std::string, TokenRef>;

inline std::int64_t time_of(const Term &t, const MatchAssignment &m, const Plan &plan) {
  const auto &ref = m.at(t.token);
  const auto &tl = plan.timelines.at(ref.variable);
  return t.endpoint == Endpoint::start ? tl.start_time(ref.index) : tl.end_time(ref.index);
}

inline bool atom_holds(const Atom &a, const MatchAssignment &m, const Plan &plan) {
  auto l = time_of(a.lhs, m, plan), r = time_of(a.rhs, m, plan);
  return a.strict ? l < r : l <= r;
}

// Some choice of tokens for the quantifiers (tokens need not be distinct)
// satisfies every atom of the clause.
inline bool statement_satisfied(const ExistentialStatement &st,
                                const std::optional<std::pair<std::string, TokenRef>> &trigger,
                                const Plan &plan) {
  MatchAssignment m;
  if (trigger)
    m[trigger->first] = trigger->second;

  // atoms_at[i]: atoms fully determined once quantifier i is assigned
  const std::size_t n = st.quantifiers.size();
  std::vector<std::vector<const Atom *>> atoms_at(n + 1);
  {
    std::map<std::string, std::size_t> depth;
    if (trigger)
      depth[trigger->first] = 0;
    for (std::size_t i = 0; i < n; ++i)
      depth[st.quantifiers[i].token] = i + 1;
    for (const auto &a : st.clause) {
      auto dl = depth.find(a.lhs.token), dr = depth.find(a.rhs.token);
      if (dl == depth.end() || dr == depth.end())
        return false; // mentions a token bound nowhere
      atoms_at[std::max(dl->second, dr->second)].push_back(&a);
    }
  }
  for (const auto *a : atoms_at[0])
    if (!atom_holds(*a, m, plan))
      return false;

  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == n)
      return true;
    const auto &q = st.quantifiers[i];
    auto it = plan.timelines.find(q.variable);
    if (it == plan.timelines.end())
      return false;
    const auto &tokens = it->second.tokens;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (tokens[k].value != q.value)
        continue;
      m[q.token] = {q.variable, k};
      bool ok = true;
      for (const auto *a : atoms_at[i + 1])
        if (!atom_holds(*a, m, plan)) {
          ok = false;
          break;
        }
      if (ok && search(i + 1))
        return true;
    }
    m.erase(q.token);
    return false;
  };
  return search(0);
}

struct RuleFailure {
  std::string rule;
  std::optional<TokenRef> trigger; // empty for triggerless rules

  bool operator==(const RuleFailure &) const = default;
};

struct VerifyReport {
  std::vector<RuleFailure> failures;

  bool ok() const { return failures.empty(); }
};

inline bool rule_satisfied_by(const SynchronizationRule &rule,
                              const std::optional<std::pair<std::string, TokenRef>> &trig,
                              const Plan &plan) {
  for (const auto &st : rule.statements)
    if (statement_satisfied(st, trig, plan))
      return true;
  return false;
}

// Throws MalformedPlan when the plan's variables differ from the problem's.
inline VerifyReport verify_plan(const Plan &plan, const PlanningProblem &p) {
  if (plan.timelines.size() != p.variables.size())
    throw MalformedPlan("plan has " + std::to_string(plan.timelines.size()) +
                        " timelines, problem has " + std::to_string(p.variables.size()) +
                        " variables");
  for (const auto &var : p.variables)
    if (!plan.timelines.count(var.name))
      throw MalformedPlan("plan has no timeline for '" + var.name + "'");

  VerifyReport report;
  for (const auto &rule : p.rules) {
    if (rule.triggerless()) {
      if (!rule_satisfied_by(rule, std::nullopt, plan))
        report.failures.push_back({rule.id, std::nullopt});
      continue;
    }
    const auto &tg = *rule.trigger;
    const auto &tokens = plan.timelines.at(tg.variable).tokens;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (tokens[k].value != tg.value)
        continue;
      TokenRef ref{tg.variable, k};
      if (!rule_satisfied_by(rule, std::pair(tg.token, ref), plan))
        report.failures.push_back({rule.id, ref});
    }
  }
  return report;
}

// All timelines of `var` with the given horizon, in enumeration order:
// values ascending, durations ascending, token by token.
inline std::vector<Timeline> timelines_of(const StateVariable &var, std::int64_t h) {
  std::vector<Timeline> out;
  Timeline cur{var.name, {}};
  std::function<void(std::int64_t, const std::string *)> rec = [&](std::int64_t left,
                                                                   const std::string *prev) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    const auto &choices = prev ? var.successors(*prev) : var.values;
    for (const auto &v : choices) {
      if (!var.has_value(v))
        continue;
      for (std::int64_t d = 1; d <= left; ++d) {
        cur.tokens.push_back({var.name, v, d});
        rec(left - d, &cur.tokens.back().value);
        cur.tokens.pop_back();
      }
    }
  };
  rec(h, nullptr);
  return out;
}

// Every plan of horizon h, first variable (by name) most significant.
// The visitor returns true to stop.
inline bool for_each_plan(const PlanningProblem &p, std::int64_t h,
                          const std::function<bool(const Plan &)> &visit) {
  std::vector<const StateVariable *> vars;
  for (const auto &v : p.variables)
    vars.push_back(&v);
  std::sort(vars.begin(), vars.end(),
            [](const StateVariable *a, const StateVariable *b) { return a->name < b->name; });
  std::vector<std::vector<Timeline>> per_var;
  for (const auto *v : vars) {
    per_var.push_back(timelines_of(*v, h));
    if (per_var.back().empty())
      return false;
  }
  Plan plan;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == vars.size())
      return visit(plan);
    for (const auto &tl : per_var[i]) {
      plan.timelines[vars[i]->name] = tl;
      if (rec(i + 1))
        return true;
    }
    return false;
  };
  return rec(0);
}

namespace detail {

// Index-based copy of the rules, used by the exhaustive search: the same
// matching semantics as verify_plan without string lookups.
class IndexedChecker {
public:
  struct Tok {
    int value;
    std::int64_t start, end;
  };
  using Line = std::vector<Tok>;

  IndexedChecker(const PlanningProblem &p, const std::vector<const StateVariable *> &vars) {
    std::map<std::string, int> var_id;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      var_id[vars[i]->name] = static_cast<int>(i);
      int k = 0;
      for (const auto &v : vars[i]->values)
        value_ids_.push_back({vars[i]->name + "\n" + v, k++});
    }
    std::sort(value_ids_.begin(), value_ids_.end());
    auto bind = [&](const TokenBinding &b) {
      auto it = var_id.find(b.variable);
      if (it == var_id.end())
        return Slot{-1, -1};
      return Slot{it->second, value_id(b.variable, b.value)};
    };
    for (const auto &rule : p.rules) {
      Rule cr;
      cr.triggerless = rule.triggerless();
      if (rule.trigger) {
        cr.trigger = bind(*rule.trigger);
        cr.last_var = std::max(cr.last_var, cr.trigger.var);
      }
      for (const auto &st : rule.statements) {
        Stmt cs;
        std::map<std::string, int> slot;
        if (rule.trigger)
          slot[rule.trigger->token] = 0;
        for (std::size_t i = 0; i < st.quantifiers.size(); ++i) {
          cs.slots.push_back(bind(st.quantifiers[i]));
          cr.last_var = std::max(cr.last_var, cs.slots.back().var);
          slot[st.quantifiers[i].token] = static_cast<int>(i) + 1;
        }
        cs.atoms_at.resize(st.quantifiers.size() + 1);
        for (const auto &a : st.clause) {
          auto l = slot.find(a.lhs.token), r = slot.find(a.rhs.token);
          if (l == slot.end() || r == slot.end()) {
            cs.dead = true;
            continue;
          }
          cs.atoms_at[std::max(l->second, r->second)].push_back(
              {l->second, a.lhs.endpoint == Endpoint::end, r->second,
               a.rhs.endpoint == Endpoint::end, a.strict});
        }
        cr.stmts.push_back(std::move(cs));
      }
      if (cr.last_var < 0)
        cr.last_var = 0;
      rules_.push_back(std::move(cr));
    }
  }

  int value_id(const std::string &var, const std::string &val) const {
    auto it = std::lower_bound(value_ids_.begin(), value_ids_.end(),
                               std::pair<std::string, int>(var + "\n" + val, -1));
    if (it == value_ids_.end() || it->first != var + "\n" + val)
      return -1;
    return it->second;
  }

  // Rules whose variables all lie among lines[0..upto] hold.
  bool holds_upto(const std::vector<const Line *> &lines, int upto, int from) const {
    for (const auto &r : rules_) {
      if (r.last_var > upto || r.last_var < from)
        continue;
      if (!rule_holds(r, lines))
        return false;
    }
    return true;
  }

private:
  struct Slot {
    int var, value;
  };
  struct CAtom {
    int ls;
    bool lend;
    int rs;
    bool rend;
    bool strict;
  };
  struct Stmt {
    std::vector<Slot> slots; // quantifiers; slot 0 is the trigger
    std::vector<std::vector<CAtom>> atoms_at;
    bool dead = false;
  };
  struct Rule {
    bool triggerless = true;
    Slot trigger{-1, -1};
    std::vector<Stmt> stmts;
    int last_var = -1;
  };

  static bool atoms_ok(const std::vector<CAtom> &atoms, const Tok *const *bound) {
    for (const auto &a : atoms) {
      auto l = a.lend ? bound[a.ls]->end : bound[a.ls]->start;
      auto r = a.rend ? bound[a.rs]->end : bound[a.rs]->start;
      if (a.strict ? !(l < r) : !(l <= r))
        return false;
    }
    return true;
  }

  static bool match(const Stmt &st, const std::vector<const Line *> &lines, const Tok **bound,
                    std::size_t i) {
    if (i == st.slots.size())
      return true;
    const auto &q = st.slots[i];
    if (q.var < 0 || q.value < 0)
      return false;
    for (const auto &t : *lines[q.var]) {
      if (t.value != q.value)
        continue;
      bound[i + 1] = &t;
      if (atoms_ok(st.atoms_at[i + 1], bound) && match(st, lines, bound, i + 1))
        return true;
    }
    return false;
  }

  static bool some_statement(const Rule &r, const std::vector<const Line *> &lines, const Tok *trig) {
    const Tok *bound[16];
    for (const auto &st : r.stmts) {
      if (st.dead || st.slots.size() + 1 > 16)
        continue;
      bound[0] = trig;
      if (trig ? !atoms_ok(st.atoms_at[0], bound) : !st.atoms_at[0].empty())
        continue;
      if (match(st, lines, bound, 0))
        return true;
    }
    return false;
  }

  static bool rule_holds(const Rule &r, const std::vector<const Line *> &lines) {
    if (r.triggerless)
      return some_statement(r, lines, nullptr);
    if (r.trigger.var < 0 || r.trigger.value < 0)
      return true;
    for (const auto &t : *lines[r.trigger.var])
      if (t.value == r.trigger.value && !some_statement(r, lines, &t))
        return false;
    return true;
  }

  std::vector<std::pair<std::string, int>> value_ids_;
  std::vector<Rule> rules_;
};

} // namespace detail

// Smallest-horizon, first-in-enumeration-order solution plan with horizon
// in [1, max_horizon], if any. Same order and answer as filtering
// for_each_plan through verify_plan.
inline std::optional<Plan> brute_force_exists(const PlanningProblem &p, std::int64_t max_horizon) {
  std::vector<const StateVariable *> vars;
  for (const auto &v : p.variables)
    vars.push_back(&v);
  std::sort(vars.begin(), vars.end(),
            [](const StateVariable *a, const StateVariable *b) { return a->name < b->name; });
  detail::IndexedChecker checker(p, vars);
  using Line = detail::IndexedChecker::Line;

  for (std::int64_t h = 1; h <= max_horizon; ++h) {
    std::vector<std::vector<Timeline>> per_var;
    std::vector<std::vector<Line>> lines;
    for (const auto *v : vars) {
      per_var.push_back(timelines_of(*v, h));
      auto &ls = lines.emplace_back();
      for (const auto &tl : per_var.back()) {
        Line l;
        for (std::size_t i = 0; i < tl.tokens.size(); ++i)
          l.push_back({checker.value_id(v->name, tl.tokens[i].value), tl.start_time(i), tl.end_time(i)});
        ls.push_back(std::move(l));
      }
    }
    const int n = static_cast<int>(vars.size());
    std::vector<const Line *> cur(vars.size(), nullptr);
    std::vector<std::size_t> pick(vars.size(), 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
      if (i == n)
        return true;
      for (std::size_t k = 0; k < lines[i].size(); ++k) {
        cur[i] = &lines[i][k];
        pick[i] = k;
        if (checker.holds_upto(cur, i, i) && rec(i + 1))
          return true;
      }
      return false;
    };
    bool found = n == 0 ? checker.holds_upto(cur, 0, 0) : rec(0);
    if (found) {
      Plan plan;
      for (int i = 0; i < n; ++i)
        plan.timelines[vars[i]->name] = per_var[i][pick[i]];
      return plan;
    }
  }
  return std::nullopt;
}

} // namespace tlp::oracle
