// tlp: command-line front end. Reads .tbp problems; see README for formats.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tlp/dot.hpp"
#include "tlp/json_io.hpp"
#include "tlp/tlp.hpp"

namespace {

enum Exit : int {
  ok = 0,
  unsat_proved = 1,
  unsat_bounded = 2,
  invalid = 3,
  parse_error = 4,
  soundness = 5,
};

struct Loaded {
  int status = Exit::ok;
  std::optional<tlp::PlanningProblem> problem;
};

// Parses a problem file; diagnostics go to stderr.
Loaded load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": cannot open\n";
    return {Exit::parse_error, std::nullopt};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  auto res = tlp::parse_problem(ss.str());
  for (const auto &d : res.diagnostics)
    std::cerr << tlp::format(d, path) << "\n";
  if (!res.ok())
    return {Exit::parse_error, std::nullopt};
  return {Exit::ok, std::move(res.problem)};
}

void emit(const tlp::json &j) { std::cout << tlp::versioned(j).dump(2) << "\n"; }

bool write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << path << ": cannot write\n";
    return false;
  }
  return true;
}

// Validation, consistency and eagerness of a parsed problem, as one report.
// Returns the exit status of `check`.
int analyse(const tlp::PlanningProblem &parsed, tlp::json &report) {
  auto [p, validation] = tlp::prepare_problem(parsed);
  report["validation"] = tlp::to_json(validation);
  if (!validation.ok())
    return Exit::invalid;
  try {
    auto eager = tlp::check_eager_problem(p);
    report["eager"] = tlp::to_json(eager);
    return eager.eager ? Exit::ok : Exit::invalid;
  } catch (const tlp::InconsistentClause &e) {
    report["inconsistent"] = {{"rule", e.rule_id}, {"statement", e.statement_index}};
    return Exit::invalid;
  }
}

int cmd_check(const std::string &file) {
  auto in = load(file);
  if (!in.problem)
    return in.status;
  tlp::json report = {{"command", "check"}, {"file", file}};
  int status = analyse(*in.problem, report);
  emit(report);
  return status;
}

struct SolveArgs {
  std::string file;
  std::size_t max_len = 64;
  std::int64_t oracle_horizon = 0;
  std::string emit_plan;
  std::string dot;
  std::string dot_target = "product";
  std::string mode = "sink";
  unsigned jobs = 1;
};

// Solver and oracle disagree on some horizon up to h.
bool disagrees(const tlp::SolveResult &res, const std::optional<tlp::Plan> &oracle, std::int64_t h) {
  const auto len = res.word ? static_cast<std::int64_t>(res.word->size()) : -1;
  if (!oracle)
    return len >= 1 && len <= h;
  const auto oh = tlp::horizon(*oracle);
  switch (res.status) {
  case tlp::SolveStatus::sat:
    return len != oh;
  case tlp::SolveStatus::unsat_proved:
    return true;
  case tlp::SolveStatus::unsat_bounded:
    return static_cast<std::int64_t>(res.depth) >= oh;
  }
  return true;
}

int cmd_solve(const SolveArgs &a) {
  auto in = load(a.file);
  if (!in.problem)
    return in.status;
  tlp::json report = {{"command", "solve"}, {"file", a.file}};
  if (int st = analyse(*in.problem, report); st != Exit::ok) {
    emit(report);
    return st;
  }
  tlp::SolveOptions opt;
  opt.max_len = a.max_len;
  opt.mode = a.mode == "literal" ? tlp::EmptyViewpointMode::literal : tlp::EmptyViewpointMode::sink;
  opt.jobs = std::max(1U, a.jobs);
  report["empty_viewpoint"] = tlp::to_string(opt.mode);
  try {
    tlp::Compilation c(*in.problem, opt.mode);
    auto res = tlp::solve(*in.problem, opt);
    report["result"] = tlp::to_json(res, c.signature());
    int status = res.status == tlp::SolveStatus::sat            ? Exit::ok
                 : res.status == tlp::SolveStatus::unsat_proved ? Exit::unsat_proved
                                                                : Exit::unsat_bounded;
    if (a.oracle_horizon > 0) {
      auto o = tlp::oracle::brute_force_exists(c.problem(), a.oracle_horizon);
      bool bad = disagrees(res, o, a.oracle_horizon);
      report["oracle"] = {{"horizon", a.oracle_horizon},
                          {"sat", o.has_value()},
                          {"agrees", !bad}};
      if (o)
        report["oracle"]["plan"] = tlp::plan_to_json(*o);
      if (bad)
        status = Exit::soundness;
    }
    if (res.plan && !a.emit_plan.empty())
      write_file(a.emit_plan, tlp::plan_to_json(*res.plan).dump(2) + "\n");
    if (!a.dot.empty()) {
      auto target = tlp::parse_dot_target(a.dot_target);
      write_file(a.dot, tlp::export_dot(c, *target, a.max_len));
    }
    emit(report);
    return status;
  } catch (const tlp::SoundnessError &e) {
    report["error"] = {{"kind", "internal-soundness"},
                       {"message", e.what()},
                       {"plan", tlp::plan_to_json(e.plan)},
                       {"verify", tlp::to_json(e.report)}};
  } catch (const tlp::LinearityViolation &e) {
    report["error"] = {{"kind", "linearity-violation"}, {"message", e.what()}};
  }
  emit(report);
  return Exit::soundness;
}

int cmd_verify(const std::string &file, const std::string &plan_path) {
  auto in = load(file);
  if (!in.problem)
    return in.status;
  tlp::json report = {{"command", "verify"}, {"file", file}, {"plan_file", plan_path}};
  if (int st = analyse(*in.problem, report); st != Exit::ok && !report["validation"]["valid"]) {
    emit(report);
    return st;
  }
  tlp::Plan plan;
  try {
    std::ifstream pin(plan_path, std::ios::binary);
    if (!pin) {
      std::cerr << plan_path << ": cannot open\n";
      return Exit::parse_error;
    }
    plan = tlp::plan_from_json(tlp::json::parse(pin));
  } catch (const tlp::json::exception &e) {
    std::cerr << plan_path << ": " << e.what() << "\n";
    return Exit::parse_error;
  } catch (const tlp::PlanFormatError &e) {
    std::cerr << plan_path << ": " << e.what() << "\n";
    return Exit::parse_error;
  }
  const auto p = tlp::normalize_problem(*in.problem);
  try {
    auto defects = tlp::plan_defects(plan, p);
    report["defects"] = defects;
    auto v = tlp::oracle::verify_plan(plan, p);
    report["verify"] = tlp::to_json(v);
    emit(report);
    return v.ok() && defects.empty() ? Exit::ok : Exit::unsat_proved;
  } catch (const tlp::MalformedPlan &e) {
    std::cerr << plan_path << ": " << e.what() << "\n";
    return Exit::parse_error;
  }
}

int cmd_allen(bool as_json) {
  using namespace tlp;
  auto cell = [](const AllenClass &c) {
    if (c.eager)
      return std::string("eager");
    std::string out = "non-eager (";
    bool first = true;
    for (int k : c.violated) {
      out += (first ? "C" : ",C") + std::to_string(k);
      first = false;
    }
    return out + ")";
  };
  json rows = json::array();
  std::ostringstream os;
  os << std::left;
  os.width(15);
  os << "relation";
  os.width(22);
  os << "trigger";
  os.width(22);
  os << "no-trigger";
  os << "trigger-second\n";
  for (auto rel : all_allen_relations) {
    auto t = classify(rel, AllenContext::trigger_first);
    auto n = classify(rel, AllenContext::no_trigger);
    auto m = classify(rel, AllenContext::trigger_second);
    os.width(15);
    os << to_string(rel);
    os.width(22);
    os << cell(t);
    os.width(22);
    os << cell(n);
    os << cell(m) << "\n";
    json row = {{"relation", to_string(rel)}};
    for (auto [key, c] : {std::pair{"trigger", t}, {"no-trigger", n}, {"trigger-second", m}})
      row[key] = {{"eager", c.eager}, {"violated", c.violated}};
    rows.push_back(std::move(row));
  }
  if (as_json)
    emit({{"command", "allen"}, {"relations", rows}});
  else
    std::cout << os.str();
  return Exit::ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Qualitative timeline-based planning: eagerness check, automaton solver, plan verifier"};
  app.require_subcommand(1);

  std::string check_file;
  auto *check = app.add_subcommand("check", "Validate a problem and decide whether it is eager");
  check->add_option("file", check_file, "Problem file (.tbp)")->required();

  SolveArgs sa;
  auto *solve = app.add_subcommand("solve", "Search for a shortest solution plan");
  solve->add_option("file", sa.file, "Problem file (.tbp)")->required();
  solve->add_option("--max-len", sa.max_len, "Bound on the encoding word length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  solve->add_option("--oracle-horizon", sa.oracle_horizon,
                    "Cross-check with brute-force plan enumeration up to this horizon")
      ->check(CLI::PositiveNumber);
  solve->add_option("--emit-plan", sa.emit_plan, "Write the plan JSON here when satisfiable");
  solve->add_option("--dot", sa.dot, "Write a GraphViz rendering here");
  solve->add_option("--dot-target", sa.dot_target, "What --dot renders")
      ->capture_default_str()
      ->check(CLI::IsMember({"tsv", "ap", "product", "blueprints"}));
  solve->add_option("--empty-viewpoint", sa.mode,
                    "Obligation whose progress sets all die: reject the run (sink) or keep an empty viewpoint (literal)")
      ->capture_default_str()
      ->check(CLI::IsMember({"literal", "sink"}));
  solve->add_option("--jobs", sa.jobs, "Threads expanding each search layer")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string verify_file, plan_path;
  auto *verify = app.add_subcommand("verify", "Check a plan against the rules of a problem");
  verify->add_option("file", verify_file, "Problem file (.tbp)")->required();
  verify->add_option("--plan", plan_path, "Plan JSON")->required();

  bool allen_json = false;
  auto *allen = app.add_subcommand("allen", "Eagerness of the Allen relations");
  allen->add_flag("--json", allen_json, "Print a JSON report instead of the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::parse_error;
  }

  if (*check)
    return cmd_check(check_file);
  if (*solve)
    return cmd_solve(sa);
  if (*verify)
    return cmd_verify(verify_file, plan_path);
  if (*allen)
    return cmd_allen(allen_json);
  return Exit::parse_error;
}
