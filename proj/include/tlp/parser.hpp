#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tlp/allen.hpp"
#include "tlp/model.hpp"

// Text format (.tbp) for planning problems.
//
//   problem   ::= { variable | rule }
//   variable  ::= "var" ID "{" "values" [ ID { "," ID } ] ";"
//                 { "trans" ID "->" "{" [ ID { "," ID } ] "}" ";" } "}"
//   rule      ::= "rule" ID ":" head "=>" body ";"
//   head      ::= "true" | ID "[" ID "=" ID "]"
//   body      ::= statement | "(" statement ")" { "|" "(" statement ")" }
//   statement ::= [ "exists" { ID "[" ID "=" ID "]" [","] } "." ] clause
//   clause    ::= "true" | item { "&" item }
//   item      ::= term ( "<=" | "<" | "=" ) term | ID ALLEN ID
//   term      ::= ( "start" | "end" ) "(" ID ")"
//
// "#" starts a comment running to the end of the line.
namespace tlp {

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 1;

  bool operator==(const SourceSpan &) const = default;
};

enum class Severity { error, warning };

struct ParseDiagnostic {
  SourceSpan span;
  std::string message;
  Severity severity = Severity::error;
};

inline std::string format(const ParseDiagnostic &d, std::string_view file = "<input>") {
  std::ostringstream os;
  os << file << ":" << d.span.line << ":" << d.span.column << ": "
     << (d.severity == Severity::error ? "error" : "warning") << ": " << d.message;
  return os.str();
}

struct ParseResult {
  std::optional<PlanningProblem> problem; // empty when any error was reported
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return problem.has_value(); }
};

namespace detail {

enum class Tok { ident, punct, eof, bad };

struct Lexeme {
  Tok kind = Tok::eof;
  std::string text;
  SourceSpan span;
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<Lexeme> lex(std::string_view src) {
  std::vector<Lexeme> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    SourceSpan sp{line, col, 1};
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j]))
        ++j;
      // hyphenated words such as met-by; "->" is never part of a word
      while (j + 1 < src.size() && src[j] == '-' && ident_char(src[j + 1])) {
        ++j;
        while (j < src.size() && ident_char(src[j]))
          ++j;
      }
      sp.length = j - i;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), sp});
      advance(j - i);
      continue;
    }
    static constexpr std::string_view two[] = {"->", "=>", "<="};
    bool matched = false;
    for (auto p : two)
      if (src.substr(i, 2) == p) {
        sp.length = 2;
        out.push_back({Tok::punct, std::string(p), sp});
        advance(2);
        matched = true;
        break;
      }
    if (matched)
      continue;
    if (std::string_view("{}[]();:,.=&|<").find(c) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, c), sp});
      advance(1);
      continue;
    }
    // one bad lexeme per UTF-8 sequence
    std::size_t len = 1;
    auto uc = static_cast<unsigned char>(c);
    if (uc >= 0xC0)
      len = uc >= 0xF0 ? 4 : uc >= 0xE0 ? 3 : 2;
    len = std::min(len, src.size() - i);
    out.push_back({Tok::bad, std::string(src.substr(i, len)), sp});
    advance(len);
  }
  out.push_back({Tok::eof, "", {line, col, 1}});
  return out;
}

struct SyntaxError {};

struct PendingBinding {
  TokenBinding binding;
  SourceSpan var_span;
  SourceSpan value_span;
};

struct PendingTerm {
  Term term;
  SourceSpan span;
};

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  ParseResult run() {
    while (!at_eof()) {
      try {
        if (peek_word("var"))
          variable();
        else if (peek_word("rule"))
          rule();
        else
          fail(cur(), "expected 'var' or 'rule', found " + describe(cur()));
      } catch (const SyntaxError &) {
        recover();
      }
    }
    resolve();
    ParseResult res;
    res.diagnostics = std::move(diags_);
    bool errors = false;
    for (const auto &d : res.diagnostics)
      errors = errors || d.severity == Severity::error;
    if (!errors)
      res.problem = std::move(problem_);
    return res;
  }

private:
  // ---- token helpers ----

  const Lexeme &cur() const { return toks_[pos_]; }
  bool at_eof() const { return cur().kind == Tok::eof; }
  bool peek_punct(std::string_view p) const { return cur().kind == Tok::punct && cur().text == p; }
  bool peek_word(std::string_view w) const { return cur().kind == Tok::ident && cur().text == w; }

  static std::string describe(const Lexeme &l) {
    switch (l.kind) {
    case Tok::eof:
      return "end of input";
    case Tok::bad:
      return "invalid character '" + l.text + "'";
    default:
      return "'" + l.text + "'";
    }
  }

  [[noreturn]] void fail(const Lexeme &at, std::string msg) {
    diags_.push_back({at.span, std::move(msg), Severity::error});
    throw SyntaxError{};
  }

  void error(SourceSpan sp, std::string msg) { diags_.push_back({sp, std::move(msg), Severity::error}); }

  const Lexeme &expect_punct(std::string_view p) {
    if (!peek_punct(p))
      fail(cur(), "expected '" + std::string(p) + "', found " + describe(cur()));
    return toks_[pos_++];
  }

  void expect_word(std::string_view w) {
    if (!peek_word(w))
      fail(cur(), "expected '" + std::string(w) + "', found " + describe(cur()));
    ++pos_;
  }

  const Lexeme &identifier(std::string_view what) {
    if (cur().kind != Tok::ident)
      fail(cur(), "expected " + std::string(what) + ", found " + describe(cur()));
    if (cur().text.find('-') != std::string::npos)
      fail(cur(), "'" + cur().text + "' is not a valid " + std::string(what));
    return toks_[pos_++];
  }

  // skip to just past the next ';' that ends a declaration, or to a keyword
  void recover() {
    int depth = 0;
    while (!at_eof()) {
      if (peek_punct("{"))
        ++depth;
      if (peek_punct("}") && --depth <= 0) {
        ++pos_;
        if (depth == 0)
          return;
        depth = 0;
        continue;
      }
      if (depth <= 0 && peek_punct(";")) {
        ++pos_;
        return;
      }
      if (depth <= 0 && (peek_word("var") || peek_word("rule")))
        return;
      ++pos_;
    }
  }

  // ---- declarations ----

  void variable() {
    expect_word("var");
    const auto &name = identifier("variable name");
    StateVariable var;
    var.name = name.text;
    expect_punct("{");
    expect_word("values");
    std::map<std::string, SourceSpan> seen;
    if (!peek_punct(";")) {
      do {
        const auto &v = identifier("value name");
        if (!var.values.insert(v.text).second)
          diags_.push_back({v.span, "duplicate value '" + v.text + "'", Severity::warning});
        seen.emplace(v.text, v.span);
      } while (peek_punct(",") && (++pos_, true));
    }
    expect_punct(";");
    while (peek_word("trans")) {
      ++pos_;
      const auto &src = identifier("value name");
      if (!var.has_value(src.text))
        error(src.span, "unknown value '" + src.text + "' of variable '" + var.name + "'");
      expect_punct("->");
      expect_punct("{");
      auto &dst = var.transitions[src.text];
      if (!peek_punct("}")) {
        do {
          const auto &t = identifier("value name");
          if (!var.has_value(t.text))
            error(t.span, "unknown value '" + t.text + "' of variable '" + var.name + "'");
          dst.insert(t.text);
        } while (peek_punct(",") && (++pos_, true));
      }
      expect_punct("}");
      expect_punct(";");
    }
    expect_punct("}");
    if (problem_.find_variable(var.name))
      error(name.span, "duplicate variable '" + var.name + "'");
    else
      problem_.variables.push_back(std::move(var));
  }

  PendingBinding binding(const Lexeme &token) {
    PendingBinding b;
    b.binding.token = token.text;
    expect_punct("[");
    const auto &var = identifier("variable name");
    expect_punct("=");
    const auto &val = identifier("value name");
    expect_punct("]");
    b.binding.variable = var.text;
    b.binding.value = val.text;
    b.var_span = var.span;
    b.value_span = val.span;
    return b;
  }

  PendingTerm term() {
    const auto &kw = cur();
    Endpoint ep;
    if (peek_word("start"))
      ep = Endpoint::start;
    else if (peek_word("end"))
      ep = Endpoint::end;
    else
      fail(kw, "expected 'start(...)' or 'end(...)', found " + describe(kw));
    ++pos_;
    expect_punct("(");
    const auto &tok = identifier("token name");
    expect_punct(")");
    return {{ep, tok.text}, tok.span};
  }

  void clause_item(Clause &clause, std::vector<PendingTerm> &uses) {
    if (peek_word("start") || peek_word("end")) {
      auto lhs = term();
      std::string op;
      if (peek_punct("<=") || peek_punct("<") || peek_punct("="))
        op = toks_[pos_++].text;
      else
        fail(cur(), "expected '<=', '<' or '=', found " + describe(cur()));
      auto rhs = term();
      uses.push_back(lhs);
      uses.push_back(rhs);
      if (op == "=") {
        clause.insert(weak(lhs.term, rhs.term));
        clause.insert(weak(rhs.term, lhs.term));
      } else {
        clause.insert({lhs.term, rhs.term, op == "<"});
      }
      return;
    }
    const auto &a = identifier("token name or term");
    if (cur().kind != Tok::ident)
      fail(cur(), "expected an Allen relation, found " + describe(cur()));
    auto rel = parse_allen(cur().text);
    if (!rel)
      fail(cur(), "unknown Allen relation '" + cur().text + "'");
    ++pos_;
    const auto &b = identifier("token name");
    if (a.text == b.text) {
      error(b.span, "Allen relation between token '" + a.text + "' and itself");
      return;
    }
    for (const auto &atom : encode(*rel, a.text, b.text))
      clause.insert(atom);
    uses.push_back({start_of(a.text), a.span});
    uses.push_back({start_of(b.text), b.span});
  }

  void statement(std::vector<PendingBinding> &pending, std::vector<PendingTerm> &uses,
                 ExistentialStatement &st) {
    if (peek_word("exists")) {
      ++pos_;
      while (!peek_punct(".")) {
        const auto &tok = identifier("token name");
        auto b = binding(tok);
        st.quantifiers.push_back(b.binding);
        pending.push_back(std::move(b));
        if (peek_punct(","))
          ++pos_;
      }
      expect_punct(".");
    }
    if (peek_word("true")) {
      ++pos_;
      return;
    }
    clause_item(st.clause, uses);
    while (peek_punct("&")) {
      ++pos_;
      clause_item(st.clause, uses);
    }
  }

  void rule() {
    expect_word("rule");
    const auto &id = identifier("rule name");
    expect_punct(":");
    RawRule raw;
    raw.rule.id = id.text;
    raw.id_span = id.span;
    if (peek_word("true")) {
      ++pos_;
    } else {
      const auto &tok = identifier("trigger token name");
      auto b = binding(tok);
      raw.rule.trigger = b.binding;
      raw.trigger = std::move(b);
    }
    expect_punct("=>");
    auto one = [&] {
      raw.rule.statements.emplace_back();
      raw.bindings.emplace_back();
      raw.uses.emplace_back();
      statement(raw.bindings.back(), raw.uses.back(), raw.rule.statements.back());
    };
    if (peek_punct("(")) {
      do {
        expect_punct("(");
        one();
        expect_punct(")");
      } while (peek_punct("|") && (++pos_, true));
    } else {
      one();
    }
    expect_punct(";");
    rules_.push_back(std::move(raw));
  }

  // ---- name resolution ----

  void check_binding(const PendingBinding &b) {
    const auto *var = problem_.find_variable(b.binding.variable);
    if (!var) {
      error(b.var_span, "unknown variable '" + b.binding.variable + "'");
      return;
    }
    if (!var->has_value(b.binding.value))
      error(b.value_span,
            "unknown value '" + b.binding.value + "' of variable '" + b.binding.variable + "'");
  }

  void resolve() {
    std::set<std::string> ids;
    for (auto &raw : rules_) {
      if (!ids.insert(raw.rule.id).second)
        error(raw.id_span, "duplicate rule '" + raw.rule.id + "'");
      if (raw.trigger)
        check_binding(*raw.trigger);
      for (std::size_t si = 0; si < raw.rule.statements.size(); ++si) {
        std::set<std::string> scope;
        if (raw.rule.trigger)
          scope.insert(raw.rule.trigger->token);
        for (const auto &b : raw.bindings[si]) {
          check_binding(b);
          scope.insert(b.binding.token);
        }
        for (const auto &u : raw.uses[si])
          if (!scope.count(u.term.token))
            error(u.span, "unknown token name " + u.term.token);
      }
      problem_.rules.push_back(std::move(raw.rule));
    }
  }

  struct RawRule {
    SynchronizationRule rule;
    SourceSpan id_span;
    std::optional<PendingBinding> trigger;
    std::vector<std::vector<PendingBinding>> bindings; // per statement
    std::vector<std::vector<PendingTerm>> uses;        // per statement
  };

  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
  PlanningProblem problem_;
  std::vector<RawRule> rules_;
  std::vector<ParseDiagnostic> diags_;
};

} // namespace detail

inline ParseResult parse_problem(std::string_view source) { return detail::Parser(source).run(); }

// ---------------------------------------------------------------------------
// Printing

inline std::string print_clause(const Clause &clause) {
  if (clause.empty())
    return "true";
  std::vector<std::string> parts;
  for (const auto &a : clause) {
    if (!a.strict && a.lhs != a.rhs && clause.count(weak(a.rhs, a.lhs))) {
      if (a.lhs < a.rhs)
        parts.push_back(to_string(a.lhs) + " = " + to_string(a.rhs));
      continue;
    }
    parts.push_back(to_string(a));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i)
    out += (i ? " & " : "") + parts[i];
  return out;
}

inline std::string print_binding(const TokenBinding &b) {
  return b.token + "[" + b.variable + "=" + b.value + "]";
}

inline std::string print_statement(const ExistentialStatement &st) {
  std::string out = "exists";
  for (const auto &q : st.quantifiers)
    out += " " + print_binding(q);
  return out + ". " + print_clause(st.clause);
}

inline std::string print_problem(const PlanningProblem &p) {
  std::ostringstream os;
  auto list = [&](const std::set<std::string> &s) {
    bool first = true;
    for (const auto &v : s) {
      os << (first ? "" : ", ") << v;
      first = false;
    }
  };
  for (const auto &var : p.variables) {
    os << "var " << var.name << " {\n  values ";
    list(var.values);
    os << ";\n";
    for (const auto &[src, dst] : var.transitions) {
      os << "  trans " << src << " -> {";
      list(dst);
      os << "};\n";
    }
    os << "}\n\n";
  }
  for (const auto &rule : p.rules) {
    os << "rule " << rule.id << ": " << (rule.trigger ? print_binding(*rule.trigger) : "true")
       << " =>";
    if (rule.statements.size() == 1) {
      os << " " << print_statement(rule.statements[0]) << ";\n";
      continue;
    }
    for (std::size_t i = 0; i < rule.statements.size(); ++i)
      os << "\n  " << (i ? "| " : "  ") << "(" << print_statement(rule.statements[i]) << ")";
    os << ";\n";
  }
  return os.str();
}

} // namespace tlp
