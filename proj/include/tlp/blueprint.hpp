#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlp/eagerness.hpp"
#include "tlp/word.hpp"

namespace tlp {

// Set of blueprint vertices, as a bitmask. Blueprints have at most
// 2 * (quantifiers + 1) vertices, far below the 64 supported here.
class VertexSet {
public:
  static constexpr std::size_t capacity = 64;

  constexpr VertexSet() = default;
  constexpr explicit VertexSet(std::uint64_t bits) : bits_(bits) {}

  static VertexSet all(std::size_t n) {
    return VertexSet(n >= capacity ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  bool contains(std::size_t v) const { return (bits_ >> v) & 1U; }
  void insert(std::size_t v) { bits_ |= std::uint64_t{1} << v; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  std::uint64_t bits() const { return bits_; }

  bool subset_of(VertexSet o) const { return (bits_ & ~o.bits_) == 0; }
  VertexSet operator|(VertexSet o) const { return VertexSet(bits_ | o.bits_); }
  VertexSet operator&(VertexSet o) const { return VertexSet(bits_ & o.bits_); }
  VertexSet operator-(VertexSet o) const { return VertexSet(bits_ & ~o.bits_); }

  auto operator<=>(const VertexSet &) const = default;
  bool operator==(const VertexSet &) const = default;

  template <typename F> void for_each(F &&f) const {
    for (std::uint64_t b = bits_; b; b &= b - 1)
      f(static_cast<std::size_t>(std::countr_zero(b)));
  }

private:
  std::uint64_t bits_ = 0;
};

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  bool strict = false;

  bool operator==(const Arc &) const = default;
};

// DAG of the term equivalence classes of one existential statement, with the
// covering relation as arcs and the events each vertex stands for.
class Blueprint {
public:
  Blueprint() = default;

  // Throws InconsistentClause when the closure is inconsistent.
  static Blueprint build(const ExistentialStatement &st, const std::optional<TokenBinding> &trigger,
                         const ClosedClause &closure, const Signature &sig,
                         std::string rule_id = {}, std::size_t statement_index = 0) {
    if (!is_consistent(closure))
      throw InconsistentClause(rule_id, statement_index);
    Blueprint bp;
    bp.rule_id_ = std::move(rule_id);
    bp.statement_ = statement_index;

    const auto &terms = closure.terms();
    const std::size_t n = terms.size();
    std::vector<int> cls(n, -1);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (cls[i] >= 0)
        continue;
      cls[i] = static_cast<int>(members.size());
      members.push_back({i});
      for (std::size_t j = i + 1; j < n; ++j)
        if (cls[j] < 0 && closure.weak(i, j) && closure.weak(j, i)) {
          cls[j] = cls[i];
          members.back().push_back(j);
        }
    }
    if (members.size() > VertexSet::capacity)
      throw UsageError("blueprint with more than 64 vertices");

    // Vertices in a topological order: by number of classes strictly below.
    const std::size_t m = members.size();
    auto below = [&](std::size_t a, std::size_t b) { // class a strictly precedes class b
      auto x = members[a][0], y = members[b][0];
      return closure.weak(x, y) && !closure.weak(y, x);
    };
    std::vector<std::size_t> order(m);
    std::vector<std::size_t> rank(m, 0);
    for (std::size_t a = 0; a < m; ++a) {
      order[a] = a;
      for (std::size_t b = 0; b < m; ++b)
        if (below(b, a))
          ++rank[a];
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
    std::vector<std::size_t> pos(m);
    for (std::size_t i = 0; i < m; ++i)
      pos[order[i]] = i;

    bp.vertices_.resize(m);
    for (std::size_t a = 0; a < m; ++a)
      for (auto t : members[a])
        bp.vertices_[pos[a]].push_back(terms[t]);

    bp.preds_.assign(m, {});
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        if (!below(a, b))
          continue;
        bool covered = false;
        for (std::size_t w = 0; w < m && !covered; ++w)
          covered = below(a, w) && below(w, b);
        if (covered)
          continue;
        bool is_strict = false;
        for (auto x : members[a])
          for (auto y : members[b])
            is_strict = is_strict || closure.strict(x, y);
        Arc arc{pos[a], pos[b], is_strict};
        bp.arcs_.push_back(arc);
        bp.preds_[arc.to].push_back(arc);
      }
    std::sort(bp.arcs_.begin(), bp.arcs_.end(), [](const Arc &l, const Arc &r) {
      return std::pair(l.from, l.to) < std::pair(r.from, r.to);
    });

    bp.events_.assign(m, {});
    for (std::size_t v = 0; v < m; ++v)
      for (const auto &term : bp.vertices_[v]) {
        const TokenBinding *b = st.find_quantifier(term.token);
        if (!b && trigger && trigger->token == term.token)
          b = &*trigger;
        if (!b)
          continue;
        auto x = sig.variable_id(b->variable);
        auto val = sig.value_id(b->value);
        if (!x || !val)
          continue;
        bp.events_[v].insert(term.endpoint == Endpoint::start ? Event::start(*x, *val)
                                                              : Event::end(*x, *val));
      }

    bp.strict_below_.assign(m, {});
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (auto x : members[a])
          for (auto y : members[b])
            if (closure.strict(x, y))
              bp.strict_below_[pos[b]].insert(pos[a]);

    auto add_token = [&](const TokenBinding &b) {
      auto x = sig.variable_id(b.variable);
      auto val = sig.value_id(b.value);
      auto sv = bp.vertex_of(start_of(b.token)), ev = bp.vertex_of(end_of(b.token));
      if (x && val && sv && ev)
        bp.tokens_.push_back({Event::end(*x, *val), *sv, *ev});
    };
    if (trigger)
      add_token(*trigger);
    for (const auto &q : st.quantifiers)
      add_token(q);

    if (trigger) {
      bp.trigger_start_ = bp.vertex_of(start_of(trigger->token));
      bp.trigger_end_ = bp.vertex_of(end_of(trigger->token));
    }
    return bp;
  }

  const std::string &rule_id() const { return rule_id_; }
  std::size_t statement_index() const { return statement_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  const std::vector<Term> &vertex(std::size_t v) const { return vertices_[v]; }
  const std::vector<Arc> &arcs() const { return arcs_; }
  const std::vector<Arc> &predecessors(std::size_t v) const { return preds_[v]; }
  const EventSet &vertex_events(std::size_t v) const { return events_[v]; }
  std::optional<std::size_t> trigger_start_vertex() const { return trigger_start_; }
  std::optional<std::size_t> trigger_end_vertex() const { return trigger_end_; }
  VertexSet all_vertices() const { return VertexSet::all(num_vertices()); }

  std::optional<std::size_t> vertex_of(const Term &t) const {
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      for (const auto &u : vertices_[v])
        if (u == t)
          return v;
    return std::nullopt;
  }

  EventSet events_of(VertexSet k) const {
    EventSet out;
    k.for_each([&](std::size_t v) { out.insert(events_[v]); });
    return out;
  }

  bool downward_closed(VertexSet k) const {
    bool ok = true;
    k.for_each([&](std::size_t v) {
      for (const auto &a : preds_[v])
        ok = ok && k.contains(a.from);
    });
    return ok;
  }

  // Vertices u with some x in u, y in v and x strictly before y.
  VertexSet strictly_below(std::size_t v) const { return strict_below_[v]; }

  // Largest downward-closed K' such that no two vertices of K' \ K are
  // strictly ordered. Greedy saturation: a vertex enters when all its
  // predecessors are in and everything strictly below it was already in K.
  VertexSet next(VertexSet k) const { return saturate(k, nullptr); }

  // As next(K), restricted further so that every added vertex has all its
  // events in `evs`.
  VertexSet next(VertexSet k, const EventSet &evs) const { return saturate(k, &evs); }

  // As next(K, evs), never adding a vertex of `forbidden`.
  VertexSet next(VertexSet k, const EventSet &evs, VertexSet forbidden) const {
    return saturate(k, &evs, forbidden);
  }

  // No token ending may be overlooked: a token of the statement whose start
  // is collected and whose end is not must have its end collected when its
  // variable's value ends.
  bool compatible(VertexSet k, const EventSet &evs, VertexSet forbidden = {}) const {
    std::optional<VertexSet> nk;
    for (const auto &t : tokens_) {
      if (!k.contains(t.start) || k.contains(t.end) || !evs.contains(t.end_event))
        continue;
      if (!nk)
        nk = next(k, evs, forbidden);
      if (!nk->contains(t.end))
        return false;
    }
    return true;
  }

  // Every legal move from K on these events: a downward-closed K' with
  // K <= K' <= next(K, evs), avoiding `forbidden`, that collects the end of
  // each collected token ending now. Ascending by bit pattern.
  std::vector<VertexSet> moves(VertexSet k, const EventSet &evs, VertexSet forbidden = {}) const {
    std::vector<VertexSet> out;
    if (!compatible(k, evs, forbidden))
      return out;
    const VertexSet top = next(k, evs, forbidden);
    std::vector<std::size_t> free;
    (top - k).for_each([&](std::size_t v) { free.push_back(v); });
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
      VertexSet cand = k;
      for (std::size_t i = 0; i < free.size(); ++i)
        if ((m >> i) & 1U)
          cand.insert(free[i]);
      if (downward_closed(cand) && closes_ending_tokens(k, evs, cand))
        out.push_back(cand);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Tokens whose start is collected and whose end is not.
  std::vector<std::size_t> open_tokens(VertexSet k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tokens_.size(); ++i)
      if (k.contains(tokens_[i].start) && !k.contains(tokens_[i].end))
        out.push_back(i);
    return out;
  }

  // `big` contains `small` and leaves open no token that `small` has not
  // already started: whatever can be matched from `small` can be matched
  // from `big`.
  bool subsumes(VertexSet big, VertexSet small) const {
    if (!small.subset_of(big))
      return false;
    for (const auto &t : tokens_)
      if (big.contains(t.start) && !big.contains(t.end) && !small.contains(t.start))
        return false;
    return true;
  }

  // Drops every set subsumed by another one; sorts the rest.
  void prune(std::vector<VertexSet> &ks) const {
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::vector<VertexSet> kept;
    for (auto k : ks)
      if (std::none_of(ks.begin(), ks.end(), [&](VertexSet o) { return o != k && subsumes(o, k); }))
        kept.push_back(k);
    ks = std::move(kept);
  }

  // The same clause read over events only: for every end(x,v) read that some
  // uncollected vertex expects, if start(x,v) was already collected, some
  // vertex carrying end(x,v) is collected now. Weaker than compatible(): it
  // cannot tell apart two tokens with the same variable and value.
  bool compatible_by_event(VertexSet k, const EventSet &evs) const {
    if (k.empty())
      return true;
    const EventSet started = events_of(k);
    const EventSet pending = events_of(all_vertices() - k);
    std::optional<EventSet> collected;
    for (const auto &e : evs) {
      if (e.kind != EventKind::end || !pending.contains(e))
        continue;
      if (!started.contains(Event::start(e.variable, e.value)))
        continue;
      if (!collected)
        collected = events_of(next(k, evs));
      if (!collected->contains(e))
        return false;
    }
    return true;
  }

  std::optional<VertexSet> evolve(VertexSet k, const EventSet &evs, VertexSet forbidden = {}) const {
    if (!compatible(k, evs, forbidden))
      return std::nullopt;
    return next(k, evs, forbidden);
  }

private:
  bool closes_ending_tokens(VertexSet k, const EventSet &evs, VertexSet k2) const {
    for (const auto &t : tokens_)
      if (k.contains(t.start) && !k.contains(t.end) && evs.contains(t.end_event) &&
          !k2.contains(t.end))
        return false;
    return true;
  }

  VertexSet saturate(VertexSet k, const EventSet *evs, VertexSet forbidden = {}) const {
    VertexSet out = k;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (out.contains(v) || forbidden.contains(v))
          continue;
        bool ok = true;
        if (!strict_below_[v].subset_of(k))
          continue;
        for (const auto &a : preds_[v])
          if (!out.contains(a.from)) {
            ok = false;
            break;
          }
        if (ok && evs && !evs->includes(events_[v]))
          ok = false;
        if (ok) {
          out.insert(v);
          grew = true;
        }
      }
    }
    return out;
  }

  struct TokenVertices {
    Event end_event;
    std::size_t start, end;
  };

  std::string rule_id_;
  std::size_t statement_ = 0;
  std::vector<std::vector<Term>> vertices_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Arc>> preds_;
  std::vector<EventSet> events_;
  std::vector<VertexSet> strict_below_;
  std::vector<TokenVertices> tokens_;
  std::optional<std::size_t> trigger_start_;
  std::optional<std::size_t> trigger_end_;
};

} // namespace tlp
