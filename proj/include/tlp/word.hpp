#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tlp/model.hpp"

namespace tlp {

using VarId = std::uint16_t;
using ValueId = std::uint16_t;

// Index space shared by words, events and automata: variables sorted by name,
// values are the sorted union V of all domains.
class Signature {
public:
  Signature() = default;

  explicit Signature(const PlanningProblem &p) {
    for (const auto &var : p.variables)
      variables_.push_back(var.name);
    std::sort(variables_.begin(), variables_.end());
    std::set<std::string> all;
    for (const auto &var : p.variables)
      all.insert(var.values.begin(), var.values.end());
    values_.assign(all.begin(), all.end());

    domain_.assign(variables_.size(), {});
    next_.assign(variables_.size(), {});
    for (VarId x = 0; x < variables_.size(); ++x) {
      const auto &var = *p.find_variable(variables_[x]);
      for (const auto &v : var.values)
        domain_[x].push_back(*value_id(v));
      next_[x].assign(values_.size(), {});
      for (const auto &v : var.values)
        for (const auto &w : var.successors(v))
          if (var.has_value(w))
            next_[x][*value_id(v)].push_back(*value_id(w));
    }
  }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_values() const { return values_.size(); }
  const std::string &variable(VarId x) const { return variables_[x]; }
  const std::string &value(ValueId v) const { return values_[v]; }
  const std::vector<std::string> &variables() const { return variables_; }
  const std::vector<std::string> &values() const { return values_; }

  std::optional<VarId> variable_id(const std::string &name) const {
    auto it = std::lower_bound(variables_.begin(), variables_.end(), name);
    if (it == variables_.end() || *it != name)
      return std::nullopt;
    return static_cast<VarId>(it - variables_.begin());
  }
  std::optional<ValueId> value_id(const std::string &name) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), name);
    if (it == values_.end() || *it != name)
      return std::nullopt;
    return static_cast<ValueId>(it - values_.begin());
  }

  // V_x, sorted.
  const std::vector<ValueId> &domain(VarId x) const { return domain_[x]; }
  bool in_domain(VarId x, ValueId v) const {
    return std::binary_search(domain_[x].begin(), domain_[x].end(), v);
  }
  // T_x(v) restricted to V_x, sorted.
  const std::vector<ValueId> &successors(VarId x, ValueId v) const { return next_[x][v]; }
  bool allows(VarId x, ValueId from, ValueId to) const {
    const auto &s = next_[x][from];
    return std::binary_search(s.begin(), s.end(), to);
  }

private:
  std::vector<std::string> variables_;
  std::vector<std::string> values_;
  std::vector<std::vector<ValueId>> domain_;
  std::vector<std::vector<std::vector<ValueId>>> next_;
};

// |V|^|SV| + (|V|^2 + 1)^|SV|
inline std::uint64_t alphabet_size(std::uint64_t num_values, std::uint64_t num_variables) {
  std::uint64_t init = 1, non_init = 1;
  for (std::uint64_t i = 0; i < num_variables; ++i) {
    init *= num_values;
    non_init *= num_values * num_values + 1;
  }
  return init + non_init;
}

// ---------------------------------------------------------------------------
// Letters, symbols, words

enum class LetterKind : std::uint8_t { start, change, hold };

// One component of a symbol: (-, v'), (v, v') or the no-change marker.
struct Letter {
  LetterKind kind = LetterKind::hold;
  ValueId from = 0; // meaningful for change only
  ValueId to = 0;   // meaningful for start and change

  static Letter start(ValueId v) { return {LetterKind::start, 0, v}; }
  static Letter change(ValueId v, ValueId w) { return {LetterKind::change, v, w}; }
  static Letter hold() { return {}; }

  auto operator<=>(const Letter &) const = default;
  bool operator==(const Letter &) const = default;
};

// A function from variables (by VarId) to letters. `initial` distinguishes
// the two alphabets, which matters only when there are no variables.
struct Symbol {
  bool initial = false;
  std::vector<Letter> letters;

  auto operator<=>(const Symbol &) const = default;
  bool operator==(const Symbol &) const = default;

  // Initial symbols carry only start letters, others never do.
  bool well_shaped() const {
    return std::all_of(letters.begin(), letters.end(), [&](const Letter &l) {
      return initial == (l.kind == LetterKind::start);
    });
  }
};

using Word = std::vector<Symbol>;

enum class EventKind : std::uint8_t { start, end };

struct Event {
  EventKind kind = EventKind::start;
  VarId variable = 0;
  ValueId value = 0;

  static Event start(VarId x, ValueId v) { return {EventKind::start, x, v}; }
  static Event end(VarId x, ValueId v) { return {EventKind::end, x, v}; }

  auto operator<=>(const Event &) const = default;
  bool operator==(const Event &) const = default;
};

// Sorted, duplicate-free list of events.
class EventSet {
public:
  EventSet() = default;
  EventSet(std::initializer_list<Event> es) : events_(es) { normalize(); }
  explicit EventSet(std::vector<Event> es) : events_(std::move(es)) { normalize(); }

  void insert(const Event &e) {
    auto it = std::lower_bound(events_.begin(), events_.end(), e);
    if (it == events_.end() || *it != e)
      events_.insert(it, e);
  }
  void insert(const EventSet &other) {
    for (const auto &e : other)
      insert(e);
  }
  bool contains(const Event &e) const {
    return std::binary_search(events_.begin(), events_.end(), e);
  }
  bool includes(const EventSet &sub) const {
    return std::includes(events_.begin(), events_.end(), sub.begin(), sub.end());
  }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }
  std::vector<Event>::const_iterator begin() const { return events_.begin(); }
  std::vector<Event>::const_iterator end() const { return events_.end(); }

  bool operator==(const EventSet &) const = default;

private:
  void normalize() {
    std::sort(events_.begin(), events_.end());
    events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
  }
  std::vector<Event> events_;
};

inline EventSet events(const Symbol &sym) {
  std::vector<Event> out;
  for (VarId x = 0; x < sym.letters.size(); ++x) {
    const auto &l = sym.letters[x];
    switch (l.kind) {
    case LetterKind::start:
      out.push_back(Event::start(x, l.to));
      break;
    case LetterKind::change:
      out.push_back(Event::end(x, l.from));
      out.push_back(Event::start(x, l.to));
      break;
    case LetterKind::hold:
      break;
    }
  }
  return EventSet(std::move(out));
}

// Virtual events closing every token still open at the horizon.
inline EventSet terminal_events(const std::map<VarId, ValueId> &last_values) {
  std::vector<Event> out;
  for (const auto &[x, v] : last_values)
    out.push_back(Event::end(x, v));
  return EventSet(std::move(out));
}

inline std::string to_string(const Event &e, const Signature &sig) {
  return std::string(e.kind == EventKind::start ? "start" : "end") + "(" + sig.variable(e.variable) +
         "," + sig.value(e.value) + ")";
}

inline std::string to_string(const Letter &l, const Signature &sig) {
  switch (l.kind) {
  case LetterKind::start:
    return "(-," + sig.value(l.to) + ")";
  case LetterKind::change:
    return "(" + sig.value(l.from) + "," + sig.value(l.to) + ")";
  case LetterKind::hold:
    break;
  }
  return "hold";
}

inline std::string to_string(const Symbol &s, const Signature &sig) {
  std::string out = "{";
  for (VarId x = 0; x < s.letters.size(); ++x) {
    if (x)
      out += ", ";
    out += sig.variable(x) + ":" + to_string(s.letters[x], sig);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Word <-> plan

// Decodes a word of shape initial · non-initial*. Throws EncodingError when a
// change's end value differs from the value started at the previous change,
// or when the word is not of that shape.
inline Plan word_to_plan(const Word &word, const Signature &sig) {
  Plan plan;
  for (VarId x = 0; x < sig.num_variables(); ++x)
    plan.timelines[sig.variable(x)].variable = sig.variable(x);
  if (word.empty())
    return plan;

  for (std::size_t i = 0; i < word.size(); ++i) {
    const auto &sym = word[i];
    if (sym.letters.size() != sig.num_variables())
      throw EncodingError("", i, "symbol arity differs from the number of variables");
    if (sym.initial != (i == 0) || !sym.well_shaped())
      throw EncodingError("", i, i == 0 ? "word must begin with an initial symbol"
                                        : "initial symbol after position 0");
  }

  const auto h = static_cast<std::int64_t>(word.size());
  for (VarId x = 0; x < sig.num_variables(); ++x) {
    const auto &name = sig.variable(x);
    auto &tokens = plan.timelines[name].tokens;
    std::int64_t last_change = 0;
    ValueId current = word[0].letters[x].to;
    for (std::size_t i = 1; i < word.size(); ++i) {
      const auto &l = word[i].letters[x];
      if (l.kind == LetterKind::hold)
        continue;
      if (l.from != current)
        throw EncodingError(name, i,
                            "variable '" + name + "' at position " + std::to_string(i) +
                                " ends value '" + sig.value(l.from) + "' but '" +
                                sig.value(current) + "' was started");
      tokens.push_back({name, sig.value(current), static_cast<std::int64_t>(i) - last_change});
      last_change = static_cast<std::int64_t>(i);
      current = l.to;
    }
    tokens.push_back({name, sig.value(current), h - last_change});
  }
  return plan;
}

// Inverse of word_to_plan. Throws MalformedPlan on horizon mismatch or names
// outside the signature.
inline Word plan_to_word(const Plan &plan, const Signature &sig) {
  const auto h = horizon(plan);
  if (h == 0)
    return {};
  Word word(static_cast<std::size_t>(h));
  for (std::size_t i = 0; i < word.size(); ++i) {
    word[i].initial = (i == 0);
    word[i].letters.assign(sig.num_variables(), Letter::hold());
  }
  for (VarId x = 0; x < sig.num_variables(); ++x) {
    auto it = plan.timelines.find(sig.variable(x));
    if (it == plan.timelines.end() || it->second.tokens.empty())
      throw MalformedPlan("no tokens for variable '" + sig.variable(x) + "'");
    std::int64_t t = 0;
    std::optional<ValueId> prev;
    for (const auto &tok : it->second.tokens) {
      auto v = sig.value_id(tok.value);
      if (tok.duration < 1)
        throw MalformedPlan("token of '" + sig.variable(x) + "' with non-positive duration");
      if (!v)
        throw MalformedPlan("unknown value '" + tok.value + "'");
      auto &slot = word[static_cast<std::size_t>(t)].letters[x];
      slot = prev ? Letter::change(*prev, *v) : Letter::start(*v);
      prev = v;
      t += tok.duration;
    }
  }
  return word;
}

} // namespace tlp
