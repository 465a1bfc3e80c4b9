#pragma once

#include <string>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "tlp/solver.hpp"

namespace tlp {

using json = nlohmann::json;

// Every report written by the command-line tools carries this version.
inline constexpr int report_schema = 1;

// A plan document that does not follow the plan schema.
class PlanFormatError : public Error {
public:
  using Error::Error;
};

// {"horizon": h, "timelines": {"<var>": [{"value": "<v>", "duration": d}, ...]}}
inline json plan_to_json(const Plan &plan) {
  json tls = json::object();
  for (const auto &[name, tl] : plan.timelines) {
    json arr = json::array();
    for (const auto &t : tl.tokens)
      arr.push_back({{"value", t.value}, {"duration", t.duration}});
    tls[name] = std::move(arr);
  }
  return {{"horizon", horizon(plan)}, {"timelines", std::move(tls)}};
}

// Throws PlanFormatError on any deviation from the schema, including a
// "horizon" that disagrees with the timelines. A "schema" member, if
// present, must be 1.
inline Plan plan_from_json(const json &j) {
  auto fail = [](const std::string &what) { throw PlanFormatError("plan: " + what); };
  if (!j.is_object())
    fail("document is not an object");
  if (j.contains("schema") && j["schema"] != report_schema)
    fail("unsupported schema " + j["schema"].dump());
  if (!j.contains("timelines") || !j["timelines"].is_object())
    fail("missing object 'timelines'");
  if (!j.contains("horizon") || !j["horizon"].is_number_integer())
    fail("missing integer 'horizon'");
  Plan plan;
  for (const auto &[name, arr] : j["timelines"].items()) {
    if (!arr.is_array())
      fail("timeline '" + name + "' is not an array");
    Timeline tl{name, {}};
    for (const auto &tok : arr) {
      if (!tok.is_object() || !tok.contains("value") || !tok["value"].is_string() ||
          !tok.contains("duration") || !tok["duration"].is_number_integer())
        fail("timeline '" + name + "' has a token without string 'value' and integer 'duration'");
      auto d = tok["duration"].get<std::int64_t>();
      if (d < 1)
        fail("timeline '" + name + "' has a token of duration " + std::to_string(d));
      tl.tokens.push_back({name, tok["value"].get<std::string>(), d});
    }
    plan.timelines.emplace(name, std::move(tl));
  }
  std::int64_t h = 0;
  try {
    h = horizon(plan);
  } catch (const MalformedPlan &e) {
    fail(e.what());
  }
  if (h != j["horizon"].get<std::int64_t>())
    fail("'horizon' is " + j["horizon"].dump() + " but the timelines span " + std::to_string(h));
  return plan;
}

inline json to_json(const ValidationReport &r) {
  json vs = json::array();
  for (const auto &v : r.violations) {
    json e = {{"code", v.code}, {"detail", v.detail}};
    if (!v.rule.empty())
      e["rule"] = v.rule;
    if (v.statement)
      e["statement"] = *v.statement;
    vs.push_back(std::move(e));
  }
  return {{"valid", r.ok()}, {"violations", std::move(vs)}};
}

inline json to_json(const EagerReport &r) {
  json vs = json::array();
  for (const auto &v : r.violations)
    vs.push_back({{"rule", v.rule},
                  {"statement", v.statement},
                  {"condition", v.condition},
                  {"pair", {v.first, v.second}}});
  return {{"eager", r.eager}, {"violations", std::move(vs)}};
}

inline json to_json(const oracle::VerifyReport &r) {
  json fs = json::array();
  for (const auto &f : r.failures) {
    json e = {{"rule", f.rule}};
    if (f.trigger)
      e["trigger"] = {{"variable", f.trigger->variable}, {"index", f.trigger->index}};
    fs.push_back(std::move(e));
  }
  return {{"ok", r.ok()}, {"failures", std::move(fs)}};
}

inline json word_to_json(const Word &w, const Signature &sig) {
  json arr = json::array();
  for (const auto &s : w) {
    json o = json::object();
    for (VarId x = 0; x < s.letters.size(); ++x)
      o[sig.variable(x)] = to_string(s.letters[x], sig);
    arr.push_back(std::move(o));
  }
  return arr;
}

inline json to_json(const SolveResult &r, const Signature &sig) {
  json j = {{"status", to_string(r.status)},
            {"explored", r.explored},
            {"depth", r.depth},
            {"t_states", r.t_states},
            {"ap_states", r.ap_states}};
  if (r.word)
    j["word"] = word_to_json(*r.word, sig);
  if (r.plan)
    j["plan"] = plan_to_json(*r.plan);
  return j;
}

inline json vertex_set_to_json(VertexSet k, const Blueprint &bp) {
  json arr = json::array();
  k.for_each([&](std::size_t v) {
    json terms = json::array();
    for (const auto &t : bp.vertex(v))
      terms.push_back(to_string(t));
    arr.push_back({{"vertex", v}, {"terms", std::move(terms)}});
  });
  return arr;
}

// Viewpoints with their progress sets, per rule.
inline json to_json(const APState &q, const RuleAutomaton &ap) {
  if (q.sink)
    return {{"sink", true}};
  json rules = json::object();
  for (std::size_t r = 0; r < q.rules.size(); ++r) {
    json vps = json::array();
    for (const auto &vp : q.rules[r]) {
      json stmts = json::object();
      for (std::size_t s = 0; s < vp.snapshots.size(); ++s) {
        if (!vp.defined(s))
          continue;
        json alts = json::array();
        for (auto k : vp.snapshots[s])
          alts.push_back(vertex_set_to_json(k, ap.blueprints(r)[s]));
        stmts[std::to_string(s)] = std::move(alts);
      }
      vps.push_back({{"enabled", ap.is_enabled(vp)}, {"final", ap.is_final(vp)}, {"snapshots", stmts}});
    }
    rules[ap.rule_id(r)] = std::move(vps);
  }
  return {{"sink", false}, {"rules", std::move(rules)}};
}

// Stamps the schema version on a report object.
inline json versioned(json j) {
  j["schema"] = report_schema;
  return j;
}

} // namespace tlp
