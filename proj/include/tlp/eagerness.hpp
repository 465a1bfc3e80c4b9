#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tlp/model.hpp"

namespace tlp {

// Closure of a clause under reflexivity, start-before-end of tokens whose
// both endpoints occur, strict-implies-weak and mixed transitivity.
// Pairs are stored as two dense relations over `terms` (sorted).
class ClosedClause {
public:
  ClosedClause() = default;

  const std::vector<Term> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  std::optional<std::size_t> index_of(const Term &t) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
    if (it == terms_.end() || *it != t)
      return std::nullopt;
    return static_cast<std::size_t>(it - terms_.begin());
  }
  bool contains(const Term &t) const { return index_of(t).has_value(); }

  bool weak(std::size_t i, std::size_t j) const { return weak_[i * n() + j]; }
  bool strict(std::size_t i, std::size_t j) const { return strict_[i * n() + j]; }

  // False when either term does not occur in the clause.
  bool weak(const Term &a, const Term &b) const {
    auto i = index_of(a), j = index_of(b);
    return i && j && weak(*i, *j);
  }
  bool strict(const Term &a, const Term &b) const {
    auto i = index_of(a), j = index_of(b);
    return i && j && strict(*i, *j);
  }

  std::set<std::pair<Term, Term>> weak_pairs() const { return pairs(weak_); }
  std::set<std::pair<Term, Term>> strict_pairs() const { return pairs(strict_); }

  // The closure as an atom set (strict pairs as strict atoms, the rest weak).
  Clause as_clause() const {
    Clause c;
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j < n(); ++j) {
        if (strict(i, j))
          c.insert({terms_[i], terms_[j], true});
        if (weak(i, j))
          c.insert({terms_[i], terms_[j], false});
      }
    return c;
  }

  friend ClosedClause close_clause(const Clause &clause, const std::optional<std::string> &trigger);

private:
  std::size_t n() const { return terms_.size(); }

  std::set<std::pair<Term, Term>> pairs(const std::vector<char> &rel) const {
    std::set<std::pair<Term, Term>> out;
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j < n(); ++j)
        if (rel[i * n() + j])
          out.emplace(terms_[i], terms_[j]);
    return out;
  }

  std::vector<Term> terms_;
  std::vector<char> weak_;
  std::vector<char> strict_;
};

// Least fixpoint of the six closure rules. The trigger name does not change
// the result; it is accepted so callers can keep the clause/trigger pair together.
inline ClosedClause close_clause(const Clause &clause,
                                 [[maybe_unused]] const std::optional<std::string> &trigger = {}) {
  ClosedClause c;
  std::set<Term> terms;
  for (const auto &a : clause) {
    terms.insert(a.lhs);
    terms.insert(a.rhs);
  }
  c.terms_.assign(terms.begin(), terms.end());
  const std::size_t n = c.terms_.size();
  c.weak_.assign(n * n, 0);
  c.strict_.assign(n * n, 0);
  auto W = [&](std::size_t i, std::size_t j) -> char & { return c.weak_[i * n + j]; };
  auto S = [&](std::size_t i, std::size_t j) -> char & { return c.strict_[i * n + j]; };

  for (const auto &a : clause) {
    auto i = *c.index_of(a.lhs), j = *c.index_of(a.rhs);
    (a.strict ? S(i, j) : W(i, j)) = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    W(i, i) = 1; // (i)
    const Term &t = c.terms_[i];
    if (t.endpoint == Endpoint::start)
      if (auto j = c.index_of(end_of(t.token)))
        S(i, *j) = 1; // (ii)
  }

  bool changed = true;
  while (changed) {
    changed = false;
    auto set = [&](char &cell) {
      if (!cell) {
        cell = 1;
        changed = true;
      }
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (S(i, j))
          set(W(i, j)); // (iii)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (W(i, k) && W(k, j))
            set(W(i, j)); // (iv)
          if ((S(i, k) && W(k, j)) || (W(i, k) && S(k, j)))
            set(S(i, j)); // (v), (vi)
        }
  }
  return c;
}

inline bool is_consistent(const ClosedClause &c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.strict(i, i))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Eager fragment

struct EagerViolation {
  std::string rule;
  std::size_t statement = 0;
  int condition = 0; // 1, 2 or 3
  std::string first;  // a1
  std::string second; // a2

  bool operator==(const EagerViolation &) const = default;
};

struct EagerReport {
  bool eager = true;
  std::vector<EagerViolation> violations;

  std::set<int> conditions() const {
    std::set<int> out;
    for (const auto &v : violations)
      out.insert(v.condition);
    return out;
  }
};

namespace detail {

inline std::vector<std::string> tokens_of(const ClosedClause &c) {
  std::set<std::string> names;
  for (const auto &t : c.terms())
    names.insert(t.token);
  return {names.begin(), names.end()};
}

inline void check_eager_clause(const ClosedClause &c, const SynchronizationRule &rule,
                               std::size_t si, std::vector<EagerViolation> &out) {
  const auto tokens = tokens_of(c);
  for (const auto &a1 : tokens)
    for (const auto &a2 : tokens) {
      if (a1 == a2)
        continue;
      const bool t1 = rule.is_trigger(a1), t2 = rule.is_trigger(a2);
      const Term s1 = start_of(a1), e1 = end_of(a1), s2 = start_of(a2), e2 = end_of(a2);
      // a1 ends during a2: it must end exactly when a2 starts
      if (!t1 && !t2 && c.weak(s2, e1) && c.weak(e1, e2) && !c.weak(e1, s2))
        out.push_back({rule.id, si, 1, a1, a2});
      // a1 starts during a2: both start together
      if (!t2 && c.weak(s2, s1) && c.weak(s1, e2) && !c.weak(s1, s2))
        out.push_back({rule.id, si, 2, a1, a2});
      // a2 starts during the trigger a1 and outlives it: both start together
      if (t1 && !t2 && c.weak(s1, s2) && c.weak(e1, e2) && !c.weak(s2, s1))
        out.push_back({rule.id, si, 3, a1, a2});
    }
}

} // namespace detail

// Throws InconsistentClause when some clause closure is inconsistent.
inline EagerReport check_eager_rule(const SynchronizationRule &rule) {
  EagerReport report;
  std::optional<std::string> trig;
  if (rule.trigger)
    trig = rule.trigger->token;
  for (std::size_t si = 0; si < rule.statements.size(); ++si) {
    auto closed = close_clause(rule.statements[si].clause, trig);
    if (!is_consistent(closed))
      throw InconsistentClause(rule.id, si);
    detail::check_eager_clause(closed, rule, si, report.violations);
  }
  report.eager = report.violations.empty();
  return report;
}

inline EagerReport check_eager_problem(const PlanningProblem &p) {
  EagerReport report;
  for (const auto &r : p.rules) {
    auto rr = check_eager_rule(r);
    report.violations.insert(report.violations.end(), rr.violations.begin(), rr.violations.end());
  }
  report.eager = report.violations.empty();
  return report;
}

} // namespace tlp
