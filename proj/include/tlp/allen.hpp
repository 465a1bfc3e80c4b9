#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "tlp/eagerness.hpp"

namespace tlp {

enum class AllenRelation : std::uint8_t {
  before,
  after,
  meets,
  met_by,
  starts,
  started_by,
  ends,
  ended_by,
  overlaps,
  overlapped_by,
  during,
  contains,
  equals,
};

inline constexpr std::array<AllenRelation, 13> all_allen_relations = {
    AllenRelation::before,   AllenRelation::after,         AllenRelation::meets,
    AllenRelation::met_by,   AllenRelation::starts,        AllenRelation::started_by,
    AllenRelation::ends,     AllenRelation::ended_by,      AllenRelation::overlaps,
    AllenRelation::overlapped_by, AllenRelation::during,   AllenRelation::contains,
    AllenRelation::equals,
};

inline constexpr std::string_view to_string(AllenRelation r) {
  constexpr std::array<std::string_view, 13> names = {
      "before", "after",    "meets",         "met-by", "starts",   "started-by", "ends",
      "ended-by", "overlaps", "overlapped-by", "during", "contains", "equals"};
  return names[static_cast<std::size_t>(r)];
}

inline std::optional<AllenRelation> parse_allen(std::string_view name) {
  for (auto r : all_allen_relations)
    if (to_string(r) == name)
      return r;
  return std::nullopt;
}

inline AllenRelation inverse(AllenRelation r) {
  switch (r) {
  case AllenRelation::before: return AllenRelation::after;
  case AllenRelation::after: return AllenRelation::before;
  case AllenRelation::meets: return AllenRelation::met_by;
  case AllenRelation::met_by: return AllenRelation::meets;
  case AllenRelation::starts: return AllenRelation::started_by;
  case AllenRelation::started_by: return AllenRelation::starts;
  case AllenRelation::ends: return AllenRelation::ended_by;
  case AllenRelation::ended_by: return AllenRelation::ends;
  case AllenRelation::overlaps: return AllenRelation::overlapped_by;
  case AllenRelation::overlapped_by: return AllenRelation::overlaps;
  case AllenRelation::during: return AllenRelation::contains;
  case AllenRelation::contains: return AllenRelation::during;
  case AllenRelation::equals: return AllenRelation::equals;
  }
  return r;
}

// Endpoint encoding of `a rel b`; inverse relations swap the operands.
// Throws UsageError when a == b.
inline Clause encode(AllenRelation rel, const std::string &a, const std::string &b) {
  if (a == b)
    throw UsageError("Allen relation between token '" + a + "' and itself");
  auto eq = [](Clause &c, const Term &l, const Term &r) {
    c.insert(weak(l, r));
    c.insert(weak(r, l));
  };
  const Term sa = start_of(a), ea = end_of(a), sb = start_of(b), eb = end_of(b);
  Clause c;
  switch (rel) {
  case AllenRelation::before:
    c.insert(strict(ea, sb));
    break;
  case AllenRelation::meets:
    eq(c, ea, sb);
    break;
  case AllenRelation::ends:
    c.insert(strict(sb, sa));
    eq(c, ea, eb);
    break;
  case AllenRelation::starts:
    eq(c, sa, sb);
    c.insert(strict(ea, eb));
    break;
  case AllenRelation::overlaps:
    c.insert(strict(sa, sb));
    c.insert(strict(sb, ea));
    c.insert(strict(ea, eb));
    break;
  case AllenRelation::during:
    c.insert(strict(sb, sa));
    c.insert(strict(ea, eb));
    break;
  case AllenRelation::equals:
    eq(c, sa, sb);
    eq(c, ea, eb);
    break;
  case AllenRelation::after:
  case AllenRelation::met_by:
  case AllenRelation::started_by:
  case AllenRelation::ended_by:
  case AllenRelation::overlapped_by:
  case AllenRelation::contains:
    return encode(inverse(rel), b, a);
  }
  return c;
}

enum class AllenContext : std::uint8_t {
  trigger_first,  // a is the trigger token
  trigger_second, // b is the trigger token
  no_trigger,
};

inline std::string_view to_string(AllenContext c) {
  switch (c) {
  case AllenContext::trigger_first: return "trigger";
  case AllenContext::trigger_second: return "trigger-second";
  case AllenContext::no_trigger: return "no-trigger";
  }
  return "?";
}

struct AllenClass {
  bool eager = true;
  std::set<int> violated; // conditions
};

// Wraps `a rel b` into a single-statement rule and runs the eagerness check.
inline AllenClass classify(AllenRelation rel, AllenContext ctx) {
  SynchronizationRule rule;
  rule.id = std::string(to_string(rel));
  ExistentialStatement st;
  st.clause = encode(rel, "a", "b");
  switch (ctx) {
  case AllenContext::trigger_first:
    rule.trigger = TokenBinding{"a", "x", "v"};
    st.quantifiers = {{"b", "y", "w"}};
    break;
  case AllenContext::trigger_second:
    rule.trigger = TokenBinding{"b", "y", "w"};
    st.quantifiers = {{"a", "x", "v"}};
    break;
  case AllenContext::no_trigger:
    st.quantifiers = {{"a", "x", "v"}, {"b", "y", "w"}};
    break;
  }
  rule.statements.push_back(std::move(st));
  auto report = check_eager_rule(rule);
  return {report.eager, report.conditions()};
}

} // namespace tlp
