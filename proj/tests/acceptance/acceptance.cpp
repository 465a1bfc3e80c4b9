// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace tlp;
using namespace tlp::testing;

namespace {

// Collects failed checks of one criterion; the first few are printed.
struct Check {
  std::size_t failed = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string &what) {
    if (ok)
      return;
    if (failed++ < 3)
      notes.push_back(what);
  }
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Seconds = std::chrono::duration<double>;

bool run(int id, const std::string &name, double limit_s, const std::function<Outcome(Check &)> &body) {
  Check check;
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out = body(check);
  } catch (const std::exception &e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = Seconds(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = out.pass && check.failed == 0 && in_time;
  std::ostringstream line;
  line << (pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << out.detail;
  if (check.failed)
    line << "; " << check.failed << " failed check(s)";
  line.precision(2);
  line << std::fixed << " [" << secs << " s";
  if (!in_time)
    line << ", limit " << limit_s << " s";
  line << "]";
  std::cout << line.str() << "\n";
  for (const auto &n : check.notes)
    std::cout << "    " << n << "\n";
  std::cout.flush();
  return pass;
}

// Instances shared by criteria 7, 8 and 9.
std::vector<PlanningProblem> &random_instances() {
  static std::vector<PlanningProblem> v = [] {
    std::vector<PlanningProblem> out;
    Rng rng(20240611);
    ProblemShape shape; // <= 2 variables, 3 values, 2 rules, 2 statements, 2 quantifiers
    while (out.size() < 250)
      out.push_back(random_eager_problem(rng, shape));
    return out;
  }();
  return v;
}

PlanningProblem parse_or_throw(const std::string &src) {
  auto r = parse_problem(src);
  if (!r.ok())
    throw std::runtime_error("fixture does not parse");
  return *r.problem;
}

// ε instances: (problem, label).
std::vector<std::pair<PlanningProblem, std::string>> epsilon_instances() {
  PlanningProblem no_rules;
  no_rules.variables = {self_loop_variable("x", "v")};
  auto triggerless = parse_or_throw("var x { values v; trans v -> {v}; }\n"
                                    "rule r: true => exists a[x=v]. start(a) < end(a);");
  return {{eager_problem(), "triggered rule only"}, {no_rules, "no rules"}, {triggerless, "triggerless rule"}};
}

Plan empty_plan(const PlanningProblem &p) {
  Plan plan;
  for (const auto &v : p.variables)
    plan.timelines[v.name] = Timeline{v.name, {}};
  return plan;
}

Outcome worked_examples(Check &c) {
  c.expect(check_eager_rule(eager_rule()).eager, "eager rule reported non-eager");
  auto weak = check_eager_rule(weak_start_rule());
  c.expect(!weak.eager, "<=-variant reported eager");
  c.expect(weak.violations.size() == 1, "<=-variant: expected exactly one violation");
  if (!weak.violations.empty()) {
    const auto &v = weak.violations.front();
    c.expect(v.condition == 3, "<=-variant: violated condition " + std::to_string(v.condition));
    c.expect(v.first == "a0" && v.second == "a1", "<=-variant: pair (" + v.first + "," + v.second + ")");
  }
  auto before = check_eager_rule(rewriting_rule());
  c.expect(!before.eager && before.conditions() == std::set<int>{2},
           "rewriting example before normalization is not a Condition 2 violation");
  c.expect(check_eager_rule(normalize_rule(rewriting_rule())).eager,
           "rewriting example after normalization is not eager");
  return {true, "eager rule, <=-variant (C3 on a0,a1), rewriting example (C2 before, eager after)"};
}

Outcome allen_conformance(Check &c) {
  using R = AllenRelation;
  const std::set<R> trigger_eager = {R::before, R::after,      R::meets,    R::met_by,
                                     R::starts, R::started_by, R::contains, R::equals};
  const std::set<R> free_eager = {R::before, R::after, R::meets, R::met_by};
  int assertions = 0;
  for (auto r : all_allen_relations) {
    c.expect(classify(r, AllenContext::trigger_first).eager == (trigger_eager.count(r) == 1),
             "trigger context: " + std::string(to_string(r)));
    c.expect(classify(r, AllenContext::no_trigger).eager == (free_eager.count(r) == 1),
             "no-trigger context: " + std::string(to_string(r)));
    assertions += 2;
  }
  return {assertions == 26, std::to_string(assertions) + " assertions"};
}

Outcome closure_oracle(Check &c) {
  Rng rng(3);
  const std::vector<std::string> tokens = {"a", "b", "c"};
  int checked = 0;
  for (int i = 0; checked < 600 && i < 100000; ++i) {
    auto clause = random_clause(rng, tokens, 5);
    auto closed = close_clause(clause);
    if (!is_consistent(closed))
      continue;
    auto e = brute_entailment(clause);
    std::ostringstream what;
    for (const auto &a : clause)
      what << to_string(a) << "; ";
    c.expect(e.satisfiable, "consistent clause has no integer model: " + what.str());
    c.expect(closed.weak_pairs() == e.weak, "weak pairs differ: " + what.str());
    c.expect(closed.strict_pairs() == e.strict, "strict pairs differ: " + what.str());
    ++checked;
  }
  return {checked >= 500, std::to_string(checked) + " consistent clauses"};
}

Outcome codec_round_trips(Check &c) {
  Rng rng(31);
  int n = 0;
  for (; n < 1500; ++n) {
    PlanningProblem p;
    p.variables = random_total_variables(rng, 3, 3);
    Signature sig(p);
    auto plan = random_plan(rng, p.variables, uniform(rng, 1, 6));
    auto w = plan_to_word(plan, sig);
    c.expect(static_cast<std::int64_t>(w.size()) == horizon(plan), "word length differs from horizon");
    c.expect(word_to_plan(w, sig) == plan, "decode(encode(plan)) != plan");
    c.expect(plan_to_word(word_to_plan(w, sig), sig) == w, "encode(decode(word)) != word");
  }
  return {n >= 1000, std::to_string(n) + " plans, <= 3 variables, horizon <= 6"};
}

Outcome tsv_language(Check &c) {
  // Non-total transition functions so that compliance matters.
  auto p = parse_or_throw("var x { values p, q; trans p -> {q}; trans q -> {p, q}; }\n"
                          "var y { values p, q; trans p -> {p}; trans q -> {p}; }");
  Signature sig(p);
  StructureAutomaton tsv(sig);
  const auto every = all_symbols(sig);
  std::vector<Symbol> sigma; // all letters start (initial) or none does
  for (const auto &s : every) {
    std::size_t starts = 0;
    for (const auto &l : s.letters)
      starts += l.kind == LetterKind::start ? 1 : 0;
    if (starts == 0 || starts == s.letters.size())
      sigma.push_back(s);
  }
  c.expect(sigma.size() == alphabet_size(2, 2), "alphabet has " + std::to_string(sigma.size()) + " symbols");

  std::size_t words = 0, accepted = 0;
  Word w;
  // The automaton state is carried along the enumeration; every word is
  // still compared with its own decoding.
  std::function<void(const std::vector<Symbol> &, const TState &, std::size_t)> rec =
      [&](const std::vector<Symbol> &symbols, const TState &q, std::size_t left) {
        const bool acc = tsv.is_final(q);
        ++words;
        accepted += acc ? 1 : 0;
        c.expect(acc == decodes_to_plan(w, sig, p),
                 "acceptance differs from decoding on a word of length " + std::to_string(w.size()));
        if (left == 0)
          return;
        for (const auto &s : symbols) {
          w.push_back(s);
          rec(symbols, tsv.step(q, s), left - 1);
          w.pop_back();
        }
      };
  c.expect(tsv.accepts(Word{}) == tsv.is_final(tsv.initial()), "accepts disagrees with stepping");
  rec(sigma, tsv.initial(), 4);
  const std::size_t in_sigma = words;
  rec(every, tsv.initial(), 3);
  return {accepted > 2, std::to_string(in_sigma) + " words of length <= 4 over " + std::to_string(sigma.size()) +
                            " symbols, " + std::to_string(words - in_sigma) + " of length <= 3 over all " +
                            std::to_string(every.size()) + " letter combinations, " + std::to_string(accepted) +
                            " accepted"};
}

Outcome snapshot_primitives(Check &c) {
  std::size_t sets = 0;
  const int seen = for_random_blueprints(41, 250, 6, [&](const Blueprint &bp, Rng &rng) {
    for (auto k : downward_closed_sets(bp)) {
      c.expect(std::optional<VertexSet>(bp.next(k)) == brute_next(bp, k, nullptr), "next differs");
      for (int r = 0; r < 3; ++r) {
        const auto evs = random_events(rng, bp);
        c.expect(std::optional<VertexSet>(bp.next(k, evs)) == brute_next(bp, k, &evs), "next_sigma differs");
      }
      ++sets;
    }
  });
  return {seen >= 200, std::to_string(seen) + " blueprints, " + std::to_string(sets) + " progress sets"};
}

Outcome oracle_equivalence(Check &c) {
  const std::int64_t h = 6;
  std::size_t sat = 0, literal_disagree = 0;
  const auto &instances = random_instances();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto &p = instances[i];
    const auto expect = oracle::brute_force_exists(p, h);
    SolveOptions opt;
    opt.max_len = static_cast<std::size_t>(h);
    const auto res = solve(p, opt);
    const std::string tag = "instance " + std::to_string(i);
    c.expect(res.word.has_value() == expect.has_value(), tag + ": satisfiability differs from the oracle");
    if (expect && res.word) {
      ++sat;
      c.expect(oracle::verify_plan(*res.plan, p).ok(), tag + ": witness fails verification");
      c.expect(static_cast<std::int64_t>(res.word->size()) == horizon(*expect), tag + ": witness not minimal");
    }
    opt.mode = EmptyViewpointMode::literal;
    bool literal_ok = false;
    try {
      const auto lit = solve(p, opt);
      literal_ok = lit.word.has_value() == expect.has_value() &&
                   (!expect || static_cast<std::int64_t>(lit.word->size()) == horizon(*expect));
    } catch (const SoundnessError &) {
    }
    literal_disagree += literal_ok ? 0 : 1;
  }
  return {instances.size() >= 200,
          std::to_string(instances.size()) + " eager problems at H=6, " + std::to_string(sat) +
              " sat (sink mode); literal mode disagrees on " + std::to_string(literal_disagree)};
}

Outcome concrete_instances(Check &c) {
  auto eager = solve(eager_problem(), 64);
  c.expect(eager.status == SolveStatus::sat && eager.plan && horizon(*eager.plan) == 1,
           "eager problem: expected a horizon-1 witness");
  auto strict = solve(strict_problem(), 64);
  c.expect(strict.status == SolveStatus::unsat_proved, "strict variant: expected unsat-proved");
  c.expect(!oracle::brute_force_exists(strict_problem(), 6), "strict variant: oracle finds a plan");
  int eps = 0;
  for (const auto &[p, label] : epsilon_instances()) {
    bool triggerless = false;
    for (const auto &r : p.rules)
      triggerless = triggerless || r.triggerless();
    const bool expected = !triggerless && oracle::verify_plan(empty_plan(p), p).ok();
    Compilation comp(p);
    c.expect(comp.accepts(Word{}) == expected, "epsilon: " + label);
    ++eps;
  }
  return {eps == 3, "eager -> sat h=1, strict -> unsat-proved (oracle to 6), 3 epsilon instances"};
}

Outcome structural_invariants(Check &c) {
  std::vector<PlanningProblem> all = random_instances();
  all.push_back(eager_problem());
  all.push_back(strict_problem());
  for (auto &[p, label] : epsilon_instances())
    all.push_back(p);
  std::size_t states = 0, transitions = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Compilation comp(all[i]);
    InvariantObserver obs(comp);
    SolveOptions opt;
    opt.max_len = 64;
    opt.stop_at_first = false;
    opt.observer = &obs;
    search(comp, opt);
    c.expect(obs.failures == 0, "instance " + std::to_string(i) + ": " + obs.first_failure);
    states += obs.states;
    transitions += obs.transitions;
  }
  return {states > 0, std::to_string(all.size()) + " instances, " + std::to_string(states) + " states, " +
                          std::to_string(transitions) + " transitions, fully explored"};
}

} // namespace

int main() {
  bool ok = true;
  ok &= run(1, "eagerness of the worked examples", 1, worked_examples);
  ok &= run(2, "Allen conformance", 1, allen_conformance);
  ok &= run(3, "closure oracle", 30, closure_oracle);
  ok &= run(4, "codec round trips", 10, codec_round_trips);
  ok &= run(5, "T_SV language", 30, tsv_language);
  ok &= run(6, "snapshot primitives", 30, snapshot_primitives);
  ok &= run(7, "end-to-end oracle equivalence", 300, oracle_equivalence);
  ok &= run(8, "concrete instances", 10, concrete_instances);
  ok &= run(9, "structural invariants under BFS", 300, structural_invariants);
  return ok ? 0 : 1;
}
