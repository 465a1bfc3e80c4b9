#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "tlp/solver.hpp"

namespace tlp {

enum class DotTarget : std::uint8_t { tsv, ap, product, blueprints };

inline std::optional<DotTarget> parse_dot_target(std::string_view s) {
  if (s == "tsv")
    return DotTarget::tsv;
  if (s == "ap")
    return DotTarget::ap;
  if (s == "product")
    return DotTarget::product;
  if (s == "blueprints")
    return DotTarget::blueprints;
  return std::nullopt;
}

namespace detail {

inline std::string dot_escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out;
}

inline std::string label_of(const TState &t, const Signature &sig) {
  if (t.tag == TState::Tag::initial)
    return "init";
  if (t.is_sink())
    return "sink";
  std::string out;
  for (VarId x = 0; x < t.assignment.size(); ++x) {
    if (x)
      out += "\\n";
    out += sig.variable(x) + ":" + to_string(t.assignment[x], sig);
  }
  return out.empty() ? "live" : out;
}

inline std::string label_of(const APState &q, const RuleAutomaton &ap) {
  if (q.sink)
    return "sink";
  std::string out;
  for (std::size_t r = 0; r < q.rules.size(); ++r) {
    if (r)
      out += "\\n";
    out += ap.rule_id(r) + ":";
    for (const auto &vp : q.rules[r]) {
      out += " [";
      for (std::size_t s = 0; s < vp.snapshots.size(); ++s) {
        if (s)
          out += "|";
        if (!vp.defined(s)) {
          out += "-";
          continue;
        }
        for (std::size_t i = 0; i < vp.snapshots[s].size(); ++i) {
          if (i)
            out += "/";
          out += "{";
          bool first = true;
          vp.snapshots[s][i].for_each([&](std::size_t v) {
            out += (first ? "" : ",") + std::to_string(v);
            first = false;
          });
          out += "}";
        }
      }
      out += "]";
      if (ap.is_enabled(vp))
        out += "*";
    }
  }
  return out;
}

} // namespace detail

// Blueprints of every statement, one cluster per statement. Strict arcs get
// a double arrowhead.
inline std::string blueprints_to_dot(const RuleAutomaton &ap) {
  std::ostringstream os;
  os << "digraph blueprints {\n  node [shape=box];\n";
  for (std::size_t r = 0; r < ap.num_rules(); ++r) {
    const auto &bps = ap.blueprints(r);
    for (std::size_t s = 0; s < bps.size(); ++s) {
      const auto &bp = bps[s];
      const std::string prefix = "r" + std::to_string(r) + "s" + std::to_string(s) + "v";
      os << "  subgraph cluster_" << r << "_" << s << " {\n    label=\""
         << detail::dot_escape(ap.rule_id(r)) << " / " << s << "\";\n";
      for (std::size_t v = 0; v < bp.num_vertices(); ++v) {
        std::string label;
        for (const auto &t : bp.vertex(v))
          label += (label.empty() ? "" : "\\n") + to_string(t);
        os << "    " << prefix << v << " [label=\"" << detail::dot_escape(label) << "\"];\n";
      }
      for (const auto &a : bp.arcs())
        os << "    " << prefix << a.from << " -> " << prefix << a.to
           << (a.strict ? " [arrowhead=normalnormal]" : "") << ";\n";
      os << "  }\n";
    }
  }
  os << "}\n";
  return os.str();
}

// Reachable fragment of the structure automaton along enumerated symbols.
inline std::string tsv_to_dot(const Compilation &c) {
  const auto &tsv = c.structure();
  const auto &sig = c.signature();
  std::map<TState, std::size_t> ids;
  std::vector<TState> states{tsv.initial()};
  ids.emplace(states[0], 0);
  std::set<std::tuple<std::size_t, std::size_t, std::string>> edges;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const TState q = states[i];
    for (const auto &sym : tsv.successor_symbols(q)) {
      TState n = tsv.step(q, sym);
      auto [it, fresh] = ids.emplace(n, states.size());
      if (fresh)
        states.push_back(n);
      edges.emplace(i, it->second, to_string(sym, sig));
    }
  }
  std::ostringstream os;
  os << "digraph tsv {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < states.size(); ++i)
    os << "  q" << i << " [shape=" << (tsv.is_final(states[i]) ? "doublecircle" : "circle")
       << ", label=\"" << detail::dot_escape(detail::label_of(states[i], sig)) << "\"];\n";
  for (const auto &[from, to, label] : edges)
    os << "  q" << from << " -> q" << to << " [label=\"" << detail::dot_escape(label) << "\"];\n";
  os << "}\n";
  return os.str();
}

// `res` must come from a search with record_edges set.
inline std::string product_to_dot(const Compilation &c, const SolveResult &res) {
  const auto &sig = c.signature();
  std::ostringstream os;
  os << "digraph product {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < res.states.size(); ++i) {
    const auto &q = res.states[i];
    const std::string label =
        detail::label_of(q.t, sig) + "\\n" + detail::label_of(q.a, c.rules());
    os << "  q" << i << " [shape=" << (i > 0 && c.is_final(q) ? "doublecircle" : "circle")
       << ", label=\"" << detail::dot_escape(label) << "\"];\n";
  }
  os << "  q" << res.states.size() << " [shape=circle, label=\"sink\"];\n";
  for (const auto &e : res.edges)
    os << "  q" << e.from << " -> q" << e.to << " [label=\""
       << detail::dot_escape(to_string(e.symbol, sig)) << "\"];\n";
  os << "}\n";
  return os.str();
}

// Rule-automaton components of the explored product, with the projected
// transitions. `res` must come from a search with record_edges set.
inline std::string ap_to_dot(const Compilation &c, const SolveResult &res) {
  const auto &sig = c.signature();
  std::map<APState, std::size_t> ids;
  std::vector<const APState *> states;
  std::vector<std::size_t> proj(res.states.size());
  for (std::size_t i = 0; i < res.states.size(); ++i) {
    auto [it, fresh] = ids.emplace(res.states[i].a, states.size());
    if (fresh)
      states.push_back(&it->first);
    proj[i] = it->second;
  }
  const std::size_t sink = states.size();
  std::set<std::tuple<std::size_t, std::size_t, std::string>> edges;
  for (const auto &e : res.edges)
    edges.emplace(proj[e.from], e.to < proj.size() ? proj[e.to] : sink, to_string(e.symbol, sig));
  std::ostringstream os;
  os << "digraph ap {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < states.size(); ++i)
    os << "  q" << i << " [shape=circle, label=\""
       << detail::dot_escape(detail::label_of(*states[i], c.rules())) << "\"];\n";
  os << "  q" << sink << " [shape=circle, label=\"sink\"];\n";
  for (const auto &[from, to, label] : edges)
    os << "  q" << from << " -> q" << to << " [label=\"" << detail::dot_escape(label) << "\"];\n";
  os << "}\n";
  return os.str();
}

// Explores the bounded product fragment and renders the requested view.
inline std::string export_dot(const Compilation &c, DotTarget target, std::size_t max_len = 64) {
  switch (target) {
  case DotTarget::blueprints:
    return blueprints_to_dot(c.rules());
  case DotTarget::tsv:
    return tsv_to_dot(c);
  case DotTarget::ap:
  case DotTarget::product:
    break;
  }
  SolveOptions opt;
  opt.max_len = max_len;
  opt.stop_at_first = false;
  opt.record_edges = true;
  auto res = search(c, opt);
  return target == DotTarget::ap ? ap_to_dot(c, res) : product_to_dot(c, res);
}

} // namespace tlp
