#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace tlp;
using namespace tlp::testing;

namespace {

VertexSet vs(std::initializer_list<std::size_t> vs) {
  VertexSet k;
  for (auto v : vs)
    k.insert(v);
  return k;
}

// The eager rule and its strict variant over x0:{v0}, x1:{v1}. Vertices A, B, C in order.
struct Fig {
  PlanningProblem p = eager_problem();
  Signature sig{p};
  Blueprint top = blueprint_of(eager_rule(), sig);
  Blueprint bottom = blueprint_of(strict_rule(), sig);
  static constexpr std::size_t A = 0, B = 1, C = 2;
  const Event s0 = Event::start(0, 0), s1 = Event::start(1, 1), e0 = Event::end(0, 0),
              e1 = Event::end(1, 1);
};

} // namespace

TEST(Blueprint, EagerExampleShape) {
  Fig f;
  ASSERT_EQ(f.top.num_vertices(), 3U);
  EXPECT_EQ(f.top.vertex(Fig::A), (std::vector<Term>{start_of("a0"), start_of("a1")}));
  EXPECT_EQ(f.top.vertex(Fig::B), (std::vector<Term>{end_of("a0")}));
  EXPECT_EQ(f.top.vertex(Fig::C), (std::vector<Term>{end_of("a1")}));
  EXPECT_EQ(f.top.arcs(), (std::vector<Arc>{{Fig::A, Fig::B, true}, {Fig::B, Fig::C, false}}));
  EXPECT_EQ(f.top.vertex_events(Fig::A), (EventSet{f.s0, f.s1}));
  EXPECT_EQ(f.top.vertex_events(Fig::B), (EventSet{f.e0}));
  EXPECT_EQ(f.top.vertex_events(Fig::C), (EventSet{f.e1}));
  EXPECT_EQ(f.top.trigger_start_vertex(), Fig::A);
  EXPECT_EQ(f.top.trigger_end_vertex(), Fig::B);
}

TEST(Blueprint, StrictVariantShape) {
  Fig f;
  ASSERT_EQ(f.bottom.num_vertices(), 3U);
  EXPECT_EQ(f.bottom.arcs(), (std::vector<Arc>{{Fig::A, Fig::B, true}, {Fig::B, Fig::C, true}}));
  EXPECT_EQ(f.bottom.strictly_below(Fig::C), vs({Fig::A, Fig::B}));
}

TEST(Blueprint, TwoVertexExample) {
  Fig f;
  auto bp = blueprint_of(single_statement_rule({weak(start_of("a1"), end_of("a0"))}), f.sig);
  ASSERT_EQ(bp.num_vertices(), 2U);
  EXPECT_EQ(bp.arcs(), (std::vector<Arc>{{0, 1, false}}));
  EXPECT_EQ(bp.vertex_events(0), (EventSet{f.s1}));
  EXPECT_EQ(bp.vertex_events(1), (EventSet{f.e0}));
  EXPECT_FALSE(bp.trigger_start_vertex());
}

TEST(Blueprint, InconsistentThrows) {
  Fig f;
  EXPECT_THROW(blueprint_of(single_statement_rule({strict(end_of("a1"), start_of("a1")),
                                                   weak(start_of("a0"), end_of("a0"))}),
                            f.sig),
               InconsistentClause);
}

TEST(Snapshot, NextExamples) {
  Fig f;
  EXPECT_EQ(f.top.next({}), vs({Fig::A}));
  EXPECT_EQ(f.top.next(vs({Fig::A})), vs({Fig::A, Fig::B, Fig::C}));
  EXPECT_EQ(f.bottom.next(vs({Fig::A})), vs({Fig::A, Fig::B}));
}

TEST(Snapshot, NextSigmaExamples) {
  Fig f;
  EXPECT_EQ(f.top.next({}, {f.s0, f.s1}), vs({Fig::A}));
  EXPECT_EQ(f.top.next(vs({Fig::A}), {f.e0, f.e1}), vs({Fig::A, Fig::B, Fig::C}));
  EXPECT_EQ(f.top.next(vs({Fig::A}), EventSet{}), vs({Fig::A}));
}

TEST(Snapshot, CompatibleExamples) {
  Fig f;
  EXPECT_TRUE(f.top.compatible(vs({Fig::A}), {f.e0, f.e1}));
  EXPECT_FALSE(f.top.compatible(vs({Fig::A}), {f.e1}));
  EXPECT_FALSE(f.top.compatible_by_event(vs({Fig::A}), {f.e1}));
  EXPECT_TRUE(f.top.compatible({}, {f.e0, f.e1, f.s0}));
  EXPECT_TRUE(f.top.compatible_by_event({}, {f.e1}));
}

TEST(Snapshot, EvolveExamples) {
  Fig f;
  EXPECT_EQ(f.top.evolve(vs({Fig::A}), {f.e0, f.e1}), vs({Fig::A, Fig::B, Fig::C}));
  EXPECT_FALSE(f.top.evolve(vs({Fig::A}), {f.e1}));
  EXPECT_EQ(f.top.evolve({}, EventSet{}), VertexSet{});
}

// start(a0) <= start(a1) <= end(a0): the strict pair start(a0) < end(a0)
// is not an arc, yet the two may not enter in the same wave.
TEST(Snapshot, NonCoveringStrictPair) {
  Fig f;
  auto bp = blueprint_of(
      single_statement_rule({weak(start_of("a0"), start_of("a1")), weak(start_of("a1"), end_of("a0"))}),
      f.sig);
  auto ve = bp.vertex_of(end_of("a0"));
  auto vs0 = bp.vertex_of(start_of("a0"));
  ASSERT_TRUE(ve && vs0);
  EXPECT_TRUE(bp.strictly_below(*ve).contains(*vs0));
  for (const auto &a : bp.arcs())
    EXPECT_FALSE(a.from == *vs0 && a.to == *ve);
  EXPECT_FALSE(bp.next({}).contains(*ve));
  EXPECT_FALSE(bp.next({}, {f.s0, f.s1, f.e0, f.e1}).contains(*ve));
}

TEST(Snapshot, NextMatchesExhaustiveMaximum) {
  int checked = 0;
  const int seen = for_random_blueprints(41, 300, 6, [&](const Blueprint &bp, Rng &rng) {
    for (auto k : downward_closed_sets(bp)) {
      EXPECT_EQ(bp.next(k), brute_next(bp, k, nullptr));
      const auto evs = random_events(rng, bp);
      const auto n = bp.next(k, evs);
      EXPECT_EQ(n, brute_next(bp, k, &evs));
      EXPECT_TRUE(bp.downward_closed(n));
      EXPECT_EQ(bp.next(n, EventSet{}), n);
      ++checked;
    }
  });
  EXPECT_EQ(seen, 300);
  EXPECT_GT(checked, 300);
}

TEST(Blueprint, StructuralInvariants) {
  for_random_blueprints(5, 300, 64, [&](const Blueprint &bp, Rng &) {
    const auto n = bp.num_vertices();
    // Vertices are topologically ordered, so arcs point forward.
    for (const auto &a : bp.arcs())
      EXPECT_LT(a.from, a.to);
    for (std::size_t v = 0; v < n; ++v) {
      EXPECT_FALSE(bp.strictly_below(v).contains(v));
      bp.strictly_below(v).for_each([&](std::size_t u) { EXPECT_LT(u, v); });
    }
    for (const auto &a : bp.arcs())
      EXPECT_EQ(a.strict, bp.strictly_below(a.to).contains(a.from));
    EXPECT_TRUE(bp.downward_closed({}));
    EXPECT_TRUE(bp.downward_closed(bp.all_vertices()));
  });
}

TEST(Moves, Properties) {
  for_random_blueprints(77, 300, 8, [&](const Blueprint &bp, Rng &rng) {
    for (auto k : downward_closed_sets(bp)) {
      const auto evs = random_events(rng, bp);
      const auto ms = bp.moves(k, evs);
      EXPECT_EQ(ms.empty(), !bp.compatible(k, evs));
      if (ms.empty())
        continue;
      const auto top = bp.next(k, evs);
      EXPECT_NE(std::find(ms.begin(), ms.end(), top), ms.end());
      EXPECT_TRUE(std::is_sorted(ms.begin(), ms.end()));
      for (auto m : ms) {
        EXPECT_TRUE(k.subset_of(m));
        EXPECT_TRUE(m.subset_of(top));
        EXPECT_TRUE(bp.downward_closed(m));
      }
      bool ends = false;
      for (const auto &e : evs)
        ends = ends || e.kind == EventKind::end;
      // With nothing ending, staying put is always legal.
      if (!ends) {
        EXPECT_NE(std::find(ms.begin(), ms.end(), k), ms.end());
      }
    }
    const auto quiet = bp.moves(bp.all_vertices(), EventSet{});
    EXPECT_EQ(quiet, (std::vector<VertexSet>{bp.all_vertices()}));
  });
}

TEST(Moves, ForbiddenVertexNeverEntered) {
  Fig f;
  auto ms = f.top.moves({}, {f.s0, f.s1}, vs({Fig::A}));
  EXPECT_EQ(ms, (std::vector<VertexSet>{VertexSet{}}));
  ms = f.top.moves({}, {f.s0, f.s1});
  EXPECT_EQ(ms, (std::vector<VertexSet>{VertexSet{}, vs({Fig::A})}));
  // a1 ends while a0 does not: no move.
  EXPECT_TRUE(f.top.moves(vs({Fig::A}), {f.e1}).empty());
}

TEST(Prune, KeepsOnlyUnsubsumed) {
  for_random_blueprints(3, 200, 8, [&](const Blueprint &bp, Rng &rng) {
    auto all = downward_closed_sets(bp);
    std::vector<VertexSet> pick_some;
    for (auto k : all)
      if (coin(rng, 0.4))
        pick_some.push_back(k);
    auto kept = pick_some;
    bp.prune(kept);
    for (auto k : pick_some)
      EXPECT_TRUE(std::any_of(kept.begin(), kept.end(), [&](VertexSet o) { return bp.subsumes(o, k); }));
    for (auto a : kept)
      for (auto b : kept)
        if (a != b) {
          EXPECT_FALSE(bp.subsumes(a, b));
        }
  });
}

TEST(Subsumes, OpenTokensMatter) {
  Fig f;
  EXPECT_TRUE(f.top.subsumes(vs({Fig::A}), vs({Fig::A})));
  // {A} opens a0 and a1, which the empty set has not started.
  EXPECT_FALSE(f.top.subsumes(vs({Fig::A}), {}));
  EXPECT_TRUE(f.top.subsumes(f.top.all_vertices(), {}));
  EXPECT_TRUE(f.top.subsumes(vs({Fig::A, Fig::B}), vs({Fig::A})));
}
