#pragma once

#include <exception>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tlp/eagerness.hpp"
#include "tlp/oracle.hpp"
#include "tlp/rules_automaton.hpp"
#include "tlp/structure_automaton.hpp"

namespace tlp {

class InvalidProblem : public Error {
public:
  explicit InvalidProblem(ValidationReport r)
      : Error("problem violates " + std::to_string(r.violations.size()) + " structural invariant(s)"),
        report(std::move(r)) {}
  ValidationReport report;
};

class NonEagerProblem : public Error {
public:
  explicit NonEagerProblem(EagerReport r)
      : Error("problem is not in the eager fragment"), report(std::move(r)) {}
  EagerReport report;
};

// An accepted word whose plan fails direct verification.
class SoundnessError : public Error {
public:
  SoundnessError(Word w, Plan p, oracle::VerifyReport r, const std::string &what)
      : Error(what), word(std::move(w)), plan(std::move(p)), report(std::move(r)) {}
  Word word;
  Plan plan;
  oracle::VerifyReport report;
};

struct ProductState {
  TState t;
  APState a;

  bool is_sink() const { return t.is_sink() || a.sink; }

  auto operator<=>(const ProductState &) const = default;
  bool operator==(const ProductState &) const = default;
};

// Problem compiled into the two automata. Pins its signature in place, so
// it is neither copyable nor movable.
class Compilation {
public:
  // Validates, normalizes and eager-checks; throws InvalidProblem,
  // NonEagerProblem or InconsistentClause.
  explicit Compilation(const PlanningProblem &problem,
                       EmptyViewpointMode mode = EmptyViewpointMode::sink)
      : problem_(checked(problem)), sig_(problem_), tsv_(sig_), ap_(problem_, sig_, mode) {}

  Compilation(const Compilation &) = delete;
  Compilation &operator=(const Compilation &) = delete;

  const PlanningProblem &problem() const { return problem_; }
  const Signature &signature() const { return sig_; }
  const StructureAutomaton &structure() const { return tsv_; }
  const RuleAutomaton &rules() const { return ap_; }

  ProductState initial() const { return {tsv_.initial(), ap_.initial()}; }

  ProductState step(const ProductState &q, const Symbol &sym) const {
    TState t = tsv_.step(q.t, sym);
    APState a = q.a.sink ? APState::make_sink() : ap_.step(q.a, sym);
    return {std::move(t), std::move(a)};
  }

  bool is_final(const ProductState &q) const {
    return tsv_.is_final(q.t) && ap_.is_final(q.a, q.t.last_values());
  }

  bool accepts(const Word &w) const {
    ProductState q = initial();
    for (const auto &s : w)
      q = step(q, s);
    return is_final(q);
  }

private:
  static PlanningProblem checked(const PlanningProblem &p) {
    auto [n, report] = prepare_problem(p);
    if (!report.ok())
      throw InvalidProblem(std::move(report));
    auto eager = check_eager_problem(n);
    if (!eager.eager)
      throw NonEagerProblem(std::move(eager));
    return n;
  }

  PlanningProblem problem_;
  Signature sig_;
  StructureAutomaton tsv_;
  RuleAutomaton ap_;
};

// Hooks called from the (serial) merge phase of the search.
class SearchObserver {
public:
  virtual ~SearchObserver() = default;
  virtual void on_state(const ProductState &, std::size_t /*depth*/) {}
  virtual void on_transition(const ProductState & /*from*/, const Symbol &, const ProductState & /*to*/) {}
};

enum class SolveStatus { sat, unsat_bounded, unsat_proved };

inline const char *to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::sat:
    return "sat";
  case SolveStatus::unsat_bounded:
    return "unsat-bounded";
  case SolveStatus::unsat_proved:
    return "unsat-proved";
  }
  return "?";
}

struct SolveOptions {
  std::size_t max_len = 64;
  EmptyViewpointMode mode = EmptyViewpointMode::sink;
  unsigned jobs = 1;
  SearchObserver *observer = nullptr;
  bool stop_at_first = true; // false: explore the whole bounded fragment
  bool record_edges = false;
};

struct SearchEdge {
  std::size_t from = 0;
  std::size_t to = 0; // == states.size() for the sink
  Symbol symbol;
};

struct SolveResult {
  SolveStatus status = SolveStatus::unsat_proved;
  std::optional<Word> word;
  std::optional<Plan> plan;
  std::size_t explored = 0;  // distinct non-sink product states discovered
  std::size_t depth = 0;     // word-length bound used
  std::size_t t_states = 0;  // distinct structure components among them
  std::size_t ap_states = 0; // distinct rule-automaton components among them
  std::vector<ProductState> states;
  std::vector<SearchEdge> edges;
};

namespace detail {

struct SearchNode {
  ProductState state;
  std::size_t parent = 0;
  Symbol via;
  std::size_t depth = 0;
};

template <typename F> void parallel_for(std::size_t n, unsigned jobs, F &&f) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i)
      f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(jobs);
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      try {
        for (std::size_t i = j; i < n; i += jobs)
          f(i);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    });
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace detail

// Breadth-first search of the product automaton for the shortest non-empty
// accepted word. Layers are expanded in parallel when jobs > 1 and merged in
// a fixed order, so results do not depend on scheduling.
inline SolveResult search(const Compilation &c, const SolveOptions &opt) {
  SolveResult res;
  res.depth = opt.max_len;
  std::vector<detail::SearchNode> nodes;
  std::map<ProductState, std::size_t> index;
  nodes.push_back({c.initial(), 0, {}, 0});
  index.emplace(nodes[0].state, 0);
  if (opt.observer)
    opt.observer->on_state(nodes[0].state, 0);

  std::optional<std::size_t> accepted;
  bool cut = false;
  std::vector<std::size_t> layer{0};
  std::vector<SearchEdge> edges;

  for (std::size_t depth = 0; !layer.empty() && !(accepted && opt.stop_at_first); ++depth) {
    std::vector<std::vector<std::pair<Symbol, ProductState>>> succ(layer.size());
    detail::parallel_for(layer.size(), opt.jobs, [&](std::size_t i) {
      const auto &q = nodes[layer[i]].state;
      for (auto &sym : c.structure().successor_symbols(q.t))
        succ[i].emplace_back(sym, c.step(q, sym));
    });

    std::vector<std::size_t> next_layer;
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const std::size_t from = layer[i];
      for (auto &[sym, q] : succ[i]) {
        if (opt.observer)
          opt.observer->on_transition(nodes[from].state, sym, q);
        if (q.is_sink()) {
          if (opt.record_edges && depth < opt.max_len)
            edges.push_back({from, SIZE_MAX, sym});
          continue;
        }
        auto it = index.find(q);
        if (depth >= opt.max_len) {
          if (it == index.end())
            cut = true;
          continue;
        }
        if (it == index.end()) {
          const std::size_t id = nodes.size();
          nodes.push_back({q, from, sym, depth + 1});
          it = index.emplace(q, id).first;
          next_layer.push_back(id);
          if (opt.observer)
            opt.observer->on_state(q, depth + 1);
          if (!accepted && c.is_final(q))
            accepted = id;
        }
        if (opt.record_edges)
          edges.push_back({from, it->second, sym});
      }
      if (accepted && opt.stop_at_first)
        break;
    }
    layer = std::move(next_layer);
  }

  res.explored = nodes.size();
  std::set<TState> ts;
  std::set<APState> as;
  for (const auto &n : nodes) {
    ts.insert(n.state.t);
    as.insert(n.state.a);
  }
  res.t_states = ts.size();
  res.ap_states = as.size();
  if (opt.record_edges) {
    for (auto &e : edges)
      if (e.to == SIZE_MAX)
        e.to = nodes.size();
    res.edges = std::move(edges);
    for (const auto &n : nodes)
      res.states.push_back(n.state);
  }

  if (accepted) {
    res.status = SolveStatus::sat;
    Word w;
    for (std::size_t id = *accepted; id != 0; id = nodes[id].parent)
      w.push_back(nodes[id].via);
    std::reverse(w.begin(), w.end());
    res.word = std::move(w);
  } else {
    res.status = cut ? SolveStatus::unsat_bounded : SolveStatus::unsat_proved;
  }
  return res;
}

// Decides plan existence for words of length 1..max_len. A found witness is
// decoded and checked directly against the rules; a failing check throws
// SoundnessError. Throws InvalidProblem / NonEagerProblem up front.
inline SolveResult solve(const PlanningProblem &problem, const SolveOptions &opt = {}) {
  Compilation c(problem, opt.mode);
  SolveResult res = search(c, opt);
  if (res.word) {
    Plan plan = word_to_plan(*res.word, c.signature());
    auto report = oracle::verify_plan(plan, c.problem());
    auto defects = plan_defects(plan, c.problem());
    if (!report.ok() || !defects.empty()) {
      std::string what = "accepted word of length " + std::to_string(res.word->size()) +
                         " does not encode a solution plan";
      throw SoundnessError(*res.word, plan, report, what);
    }
    res.plan = std::move(plan);
  }
  return res;
}

inline SolveResult solve(const PlanningProblem &problem, std::size_t max_len) {
  SolveOptions opt;
  opt.max_len = max_len;
  return solve(problem, opt);
}

} // namespace tlp
