#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlp/blueprint.hpp"
#include "tlp/eagerness.hpp"
#include "tlp/structure_automaton.hpp"

namespace tlp {

// What happens when a viewpoint that carries an obligation (it is enabled)
// evolves into one that no longer does, e.g. because all its snapshots died.
//  literal: keep the evolved viewpoint; it is simply not enabled any more.
//  sink:    the run is rejected (transition to the sink state).
enum class EmptyViewpointMode : std::uint8_t { literal, sink };

inline const char *to_string(EmptyViewpointMode m) {
  return m == EmptyViewpointMode::literal ? "literal" : "sink";
}

// Snapshots (progress sets over the statement's blueprint) per existential
// statement of a rule. A statement may hold several alternative snapshots
// when the matching so far can be continued in incomparable ways; none of
// them subsumes another. No alternative at all: the statement is dropped.
struct Viewpoint {
  using Alternatives = std::vector<VertexSet>;

  std::size_t rule = 0;
  std::vector<Alternatives> snapshots; // indexed by statement

  bool empty() const {
    return std::all_of(snapshots.begin(), snapshots.end(), [](const auto &s) { return s.empty(); });
  }
  std::size_t domain_size() const {
    return static_cast<std::size_t>(
        std::count_if(snapshots.begin(), snapshots.end(), [](const auto &s) { return !s.empty(); }));
  }
  bool defined(std::size_t s) const { return !snapshots[s].empty(); }

  auto operator<=>(const Viewpoint &) const = default;
  bool operator==(const Viewpoint &) const = default;
};

struct APState {
  bool sink = false;
  std::vector<std::vector<Viewpoint>> rules; // per rule, ascending chain

  static APState make_sink() { return {true, {}}; }

  std::size_t num_viewpoints() const {
    std::size_t n = 0;
    for (const auto &r : rules)
      n += r.size();
    return n;
  }

  auto operator<=>(const APState &) const = default;
  bool operator==(const APState &) const = default;
};

// The automaton checking that an encoded plan satisfies every rule.
class RuleAutomaton {
public:
  // `problem` must be validated, normalized and eager.
  RuleAutomaton(const PlanningProblem &problem, const Signature &sig,
                EmptyViewpointMode mode = EmptyViewpointMode::sink)
      : sig_(&sig), mode_(mode) {
    for (const auto &rule : problem.rules) {
      CompiledRule cr;
      cr.id = rule.id;
      if (rule.trigger) {
        auto x = sig.variable_id(rule.trigger->variable);
        auto v = sig.value_id(rule.trigger->value);
        if (x && v)
          cr.trigger_start = Event::start(*x, *v);
      }
      std::optional<std::string> trig;
      if (rule.trigger)
        trig = rule.trigger->token;
      for (std::size_t si = 0; si < rule.statements.size(); ++si) {
        const auto &st = rule.statements[si];
        // Both endpoints of every token get a vertex, mentioned or not.
        Clause full = st.clause;
        if (rule.trigger)
          full.insert(strict(start_of(rule.trigger->token), end_of(rule.trigger->token)));
        for (const auto &q : st.quantifiers)
          full.insert(strict(start_of(q.token), end_of(q.token)));
        cr.blueprints.push_back(
            Blueprint::build(st, rule.trigger, close_clause(full, trig), sig, rule.id, si));
        cr.vertex_total += cr.blueprints.back().num_vertices();
      }
      cr.triggerless = rule.triggerless();
      rules_.push_back(std::move(cr));
    }
  }

  const Signature &signature() const { return *sig_; }
  EmptyViewpointMode mode() const { return mode_; }
  std::size_t num_rules() const { return rules_.size(); }
  const std::string &rule_id(std::size_t r) const { return rules_[r].id; }
  bool triggerless(std::size_t r) const { return rules_[r].triggerless; }
  const std::vector<Blueprint> &blueprints(std::size_t r) const { return rules_[r].blueprints; }
  // 1 + total blueprint vertices of the rule: bound on its viewpoints per state.
  std::size_t viewpoint_bound(std::size_t r) const { return 1 + rules_[r].vertex_total; }

  // ---- viewpoints --------------------------------------------------------

  Viewpoint initial_viewpoint(std::size_t r) const {
    return {r, std::vector<Viewpoint::Alternatives>(rules_[r].blueprints.size(), {VertexSet{}})};
  }

  // Some snapshot has collected its whole blueprint.
  bool is_final(const Viewpoint &vp) const {
    const auto &bps = rules_[vp.rule].blueprints;
    for (std::size_t s = 0; s < vp.snapshots.size(); ++s)
      for (auto k : vp.snapshots[s])
        if (k == bps[s].all_vertices())
          return true;
    return false;
  }

  // Triggerless, or some snapshot holds the trigger's start.
  bool is_enabled(const Viewpoint &vp) const {
    const auto &cr = rules_[vp.rule];
    if (cr.triggerless)
      return true;
    for (std::size_t s = 0; s < vp.snapshots.size(); ++s) {
      auto tv = cr.blueprints[s].trigger_start_vertex();
      if (!tv)
        continue;
      for (auto k : vp.snapshots[s])
        if (k.contains(*tv))
          return true;
    }
    return false;
  }

  // Greedy evolution: every snapshot jumps to next(K, evs); incompatible
  // snapshots are dropped.
  Viewpoint evolve(const Viewpoint &vp, const EventSet &evs) const {
    Viewpoint out{vp.rule, std::vector<Viewpoint::Alternatives>(vp.snapshots.size())};
    const auto &bps = rules_[vp.rule].blueprints;
    for (std::size_t s = 0; s < vp.snapshots.size(); ++s) {
      for (auto k : vp.snapshots[s])
        if (auto e = bps[s].evolve(k, evs))
          out.snapshots[s].push_back(*e);
      bps[s].prune(out.snapshots[s]);
    }
    return out;
  }

  // Which moves of a snapshot to keep with respect to the trigger's start.
  enum class TriggerStart : std::uint8_t { any, collect, avoid };

  // Exact evolution: every legal move of every snapshot, pruned to the
  // alternatives not subsumed by another.
  Viewpoint advance(const Viewpoint &vp, const EventSet &evs, TriggerStart ts = TriggerStart::any) const {
    Viewpoint out{vp.rule, std::vector<Viewpoint::Alternatives>(vp.snapshots.size())};
    const auto &bps = rules_[vp.rule].blueprints;
    for (std::size_t s = 0; s < vp.snapshots.size(); ++s) {
      const auto &bp = bps[s];
      auto tv = bp.trigger_start_vertex();
      VertexSet forbid;
      if (tv && ts == TriggerStart::avoid)
        forbid.insert(*tv);
      auto &alts = out.snapshots[s];
      for (auto k : vp.snapshots[s])
        for (auto k2 : bp.moves(k, evs, forbid))
          if (ts != TriggerStart::collect || (tv && k2.contains(*tv) && !k.contains(*tv)))
            alts.push_back(k2);
      bp.prune(alts);
    }
    return out;
  }

  // v1 has matched no further than v2: v2 drops no fewer statements, and
  // each snapshot of v2 extends some snapshot of v1 on the same statement.
  // Throws UsageError across rules.
  bool leq(const Viewpoint &v1, const Viewpoint &v2) const {
    if (v1.rule != v2.rule)
      throw UsageError("comparing viewpoints of different rules");
    for (std::size_t s = 0; s < v2.snapshots.size(); ++s)
      for (auto k2 : v2.snapshots[s])
        if (std::none_of(v1.snapshots[s].begin(), v1.snapshots[s].end(),
                         [&](VertexSet k1) { return k1.subset_of(k2); }))
          return false;
    return true;
  }

  // Some snapshot would collect the trigger's start vertex on these events.
  // Throws UsageError for triggerless rules.
  bool enables(const Viewpoint &vp, const EventSet &evs) const {
    const auto &cr = rules_[vp.rule];
    if (cr.triggerless)
      throw UsageError("enabling is undefined for triggerless rule '" + cr.id + "'");
    for (std::size_t s = 0; s < vp.snapshots.size(); ++s) {
      auto tv = cr.blueprints[s].trigger_start_vertex();
      if (!tv)
        continue;
      for (auto k : vp.snapshots[s])
        if (cr.blueprints[s].next(k, evs).contains(*tv))
          return true;
    }
    return false;
  }

  // ---- states ------------------------------------------------------------

  APState initial() const {
    APState q;
    for (std::size_t r = 0; r < rules_.size(); ++r)
      q.rules.push_back({initial_viewpoint(r)});
    return q;
  }

  // Every trigger starting now can be bound by some viewpoint not yet bound
  // to an earlier trigger.
  bool compatible(const APState &q, const EventSet &evs) const {
    if (q.sink)
      return false;
    for (std::size_t r = 0; r < rules_.size(); ++r)
      if (trigger_starts(r, evs) &&
          std::none_of(q.rules[r].begin(), q.rules[r].end(), [&](const Viewpoint &v) {
            return !is_enabled(v) && !advance(v, evs, TriggerStart::collect).empty();
          }))
        return false;
    return true;
  }

  APState step(const APState &q, const Symbol &sym) const { return step(q, events(sym)); }

  // Per rule, viewpoints not yet bound to a trigger wait for one: they never
  // collect the trigger's start, and when it occurs a copy collecting it is
  // bound to the new trigger. Bound viewpoints (and those of triggerless
  // rules) carry an obligation; one that is met is dropped, except for
  // triggerless rules. Throws LinearityViolation when the successor's
  // viewpoints of some rule are not totally ordered.
  APState step(const APState &q, const EventSet &evs) const {
    if (q.sink)
      return APState::make_sink();
    if (!compatible(q, evs))
      return APState::make_sink();
    APState out;
    out.rules.resize(rules_.size());
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      auto &dst = out.rules[r];
      const bool starts = trigger_starts(r, evs);
      for (const auto &vp : q.rules[r]) {
        if (is_enabled(vp)) {
          Viewpoint next = advance(vp, evs);
          if (next.empty() && mode_ == EmptyViewpointMode::sink)
            return APState::make_sink();
          if (rules_[r].triggerless || !is_final(next))
            dst.push_back(std::move(next));
          continue;
        }
        if (starts) {
          Viewpoint bound = advance(vp, evs, TriggerStart::collect);
          if (!bound.empty() && !is_final(bound))
            dst.push_back(std::move(bound));
        }
        dst.push_back(advance(vp, evs, TriggerStart::avoid));
      }
      canonicalize(dst);
    }
    return out;
  }

  // Acceptance: close every open token (`last_values`, the current value per
  // variable) with virtual end events, then every enabled viewpoint must be final.
  bool is_final(const APState &q, const std::map<VarId, ValueId> &last_values) const {
    if (q.sink)
      return false;
    APState closed = step(q, terminal_events(last_values));
    if (closed.sink)
      return false;
    for (const auto &vps : closed.rules)
      for (const auto &vp : vps)
        if (is_enabled(vp) && !is_final(vp))
          return false;
    return true;
  }

  // Runs the automaton alone on a word; T_SV's last values feed acceptance.
  bool accepts(const Word &w) const {
    APState q = initial();
    for (const auto &s : w)
      q = step(q, s);
    std::map<VarId, ValueId> last;
    if (!w.empty())
      for (VarId x = 0; x < sig_->num_variables(); ++x)
        for (const auto &s : w)
          if (x < s.letters.size() && s.letters[x].kind != LetterKind::hold)
            last[x] = s.letters[x].to;
    return is_final(q, last);
  }

  // Removes duplicates and sorts a rule's viewpoints into ascending order;
  // throws LinearityViolation if two of them are incomparable.
  void canonicalize(std::vector<Viewpoint> &vps) const {
    std::sort(vps.begin(), vps.end());
    vps.erase(std::unique(vps.begin(), vps.end()), vps.end());
    for (std::size_t i = 0; i < vps.size(); ++i)
      for (std::size_t j = i + 1; j < vps.size(); ++j)
        if (!leq(vps[i], vps[j]) && !leq(vps[j], vps[i]))
          throw LinearityViolation("viewpoints of rule '" + rules_[vps[i].rule].id +
                                   "' are not linearly ordered");
    std::sort(vps.begin(), vps.end(), [&](const Viewpoint &a, const Viewpoint &b) {
      const bool ab = leq(a, b), ba = leq(b, a);
      if (ab != ba)
        return ab;
      return a < b;
    });
  }

  // The rule's viewpoints form a chain under leq.
  bool is_chain(const std::vector<Viewpoint> &vps) const {
    for (std::size_t i = 1; i < vps.size(); ++i)
      if (!leq(vps[i - 1], vps[i]))
        return false;
    return true;
  }

private:
  bool trigger_starts(std::size_t r, const EventSet &evs) const {
    const auto &cr = rules_[r];
    return !cr.triggerless && cr.trigger_start && evs.contains(*cr.trigger_start);
  }

  struct CompiledRule {
    std::string id;
    bool triggerless = true;
    std::optional<Event> trigger_start;
    std::vector<Blueprint> blueprints;
    std::size_t vertex_total = 0;
  };

  const Signature *sig_;
  EmptyViewpointMode mode_;
  std::vector<CompiledRule> rules_;
};

} // namespace tlp
