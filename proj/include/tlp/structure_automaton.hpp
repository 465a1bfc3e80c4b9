#pragma once

#include <map>
#include <vector>

#include "tlp/word.hpp"

namespace tlp {

// State of the DFA accepting exactly the words that encode plans. A live state
// is a hold-free symbol: the last letter read for every variable.
struct TState {
  enum class Tag : std::uint8_t { initial, sink, live };

  Tag tag = Tag::initial;
  std::vector<Letter> assignment; // live only

  static TState initial() { return {}; }
  static TState sink() { return {Tag::sink, {}}; }

  bool is_sink() const { return tag == Tag::sink; }
  bool is_live() const { return tag == Tag::live; }

  // Current value per variable; empty unless live.
  std::map<VarId, ValueId> last_values() const {
    std::map<VarId, ValueId> out;
    for (VarId x = 0; x < assignment.size(); ++x)
      out[x] = assignment[x].to;
    return out;
  }

  auto operator<=>(const TState &) const = default;
  bool operator==(const TState &) const = default;
};

class StructureAutomaton {
public:
  explicit StructureAutomaton(const Signature &sig) : sig_(&sig) {}

  const Signature &signature() const { return *sig_; }

  TState initial() const { return TState::initial(); }

  bool compatible(const TState &q, const Symbol &sym) const {
    const auto n = sig_->num_variables();
    if (sym.letters.size() != n || !sym.well_shaped())
      return false;
    switch (q.tag) {
    case TState::Tag::sink:
      return false;
    case TState::Tag::initial:
      if (!sym.initial)
        return false;
      for (VarId x = 0; x < n; ++x)
        if (!sig_->in_domain(x, sym.letters[x].to))
          return false;
      return true;
    case TState::Tag::live:
      if (sym.initial)
        return false;
      for (VarId x = 0; x < n; ++x) {
        const auto &l = sym.letters[x];
        if (l.kind == LetterKind::hold)
          continue;
        const ValueId cur = q.assignment[x].to;
        if (l.from != cur || !sig_->in_domain(x, l.to) || !sig_->allows(x, cur, l.to))
          return false;
      }
      return true;
    }
    return false;
  }

  TState step(const TState &q, const Symbol &sym) const {
    if (!compatible(q, sym))
      return TState::sink();
    if (q.tag == TState::Tag::initial)
      return {TState::Tag::live, sym.letters};
    TState next = q;
    for (VarId x = 0; x < sym.letters.size(); ++x)
      if (sym.letters[x].kind != LetterKind::hold)
        next.assignment[x] = sym.letters[x];
    return next;
  }

  bool is_final(const TState &q) const { return !q.is_sink(); }

  bool accepts(const Word &w) const {
    TState q = initial();
    for (const auto &s : w)
      q = step(q, s);
    return is_final(q);
  }

  // Exactly the symbols compatible with q, in a fixed order: values ascending
  // per variable (first variable most significant), hold before changes.
  std::vector<Symbol> successor_symbols(const TState &q) const {
    std::vector<Symbol> out;
    if (q.is_sink())
      return out;
    const auto n = sig_->num_variables();
    std::vector<std::vector<Letter>> choices(n);
    const bool init = q.tag == TState::Tag::initial;
    for (VarId x = 0; x < n; ++x) {
      if (init) {
        for (auto v : sig_->domain(x))
          choices[x].push_back(Letter::start(v));
      } else {
        choices[x].push_back(Letter::hold());
        const ValueId cur = q.assignment[x].to;
        for (auto w : sig_->successors(x, cur))
          choices[x].push_back(Letter::change(cur, w));
      }
      if (choices[x].empty())
        return out;
    }
    Symbol sym{init, std::vector<Letter>(n)};
    auto rec = [&](auto &&self, std::size_t x) -> void {
      if (x == n) {
        out.push_back(sym);
        return;
      }
      for (const auto &l : choices[x]) {
        sym.letters[x] = l;
        self(self, x + 1);
      }
    };
    rec(rec, 0);
    return out;
  }

private:
  const Signature *sig_;
};

} // namespace tlp
