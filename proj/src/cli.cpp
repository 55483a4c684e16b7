#include "knowhow/cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "knowhow/checker.hpp"
#include "knowhow/fixtures.hpp"
#include "knowhow/formula.hpp"
#include "knowhow/harness.hpp"
#include "knowhow/proofkit.hpp"
#include "knowhow/system.hpp"

namespace knowhow::cli {

namespace {

struct CheckArgs {
  std::string system;
  std::string history;
  std::string formula;
  std::optional<std::size_t> horizon;
};

struct FuzzArgs {
  GenParams params;
  std::size_t systems = 50;
  std::size_t instances = 45;
  bool no_empty = false;
  bool lemmas = false;
  bool json = false;
};

const char* yes_no(bool b) { return b ? "yes" : "no"; }
const char* truth(bool b) { return b ? "True" : "False"; }

int do_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  System sys = load_system_file(a.system);
  History h;
  try {
    h = sys.parse_history(a.history);
  } catch (const SystemError& e) {
    err << "error: --history: " << e.what() << '\n';
    return kUsage;
  }
  Formula f = parse(a.formula);
  const std::size_t horizon = a.horizon.value_or(default_horizon(h, f));

  Evaluator ev(sys, horizon);
  Verdict v = ev.evaluate(h, f);
  out << "history: " << sys.format_history(h) << '\n'
      << "formula: " << print(f) << '\n'
      << "verdict: " << truth(v.value) << '\n'
      << "bounded: " << yes_no(v.bounded) << '\n'
      << "horizon: " << horizon << '\n';
  if (f.op() == Op::how) {
    auto s = ev.witness(h, f.coalition(), f.sub());
    out << "witness: ";
    if (!s) out << "none";
    else if (s->coalition == 0) out << "(empty profile)";
    else out << sys.format_strategy(*s);
    out << '\n';
  }
  if (v.counterexample)
    out << "counterexample: " << sys.format_history(*v.counterexample) << '\n';
  return v.value ? kOk : kNegative;
}

int do_prove(const std::string& path, std::ostream& out) {
  Derivation d = load_proof_file(path);
  VerifyReport r = verify(d);
  out << r.text(d) << '\n';
  return r.ok ? kOk : kNegative;
}

int do_fuzz(FuzzArgs a, std::ostream& out) {
  a.params.allow_empty_coalition = !a.no_empty;
  validate(a.params);
  SoundnessReport s = soundness_suite(a.params, a.systems, a.instances);
  std::optional<LemmaReport> l;
  if (a.lemmas) l = lemma_suite(a.params, a.systems);
  if (a.json) {
    nlohmann::json j = {{"soundness", s.json()}};
    if (l) j["lemmas"] = l->json();
    out << j.dump(2) << '\n';
  } else {
    out << s.text();
    if (l) out << "lemmas: " << l->text();
  }
  const bool clean = s.violations.empty() && (!l || l->failures.empty());
  return clean ? kOk : kNegative;
}

int do_examples(const std::string& name, std::ostream& out) {
  System sys = fixture_system(name);
  const auto& claims = fixture_claims(name);
  std::size_t passed = 0;
  for (const Claim& c : claims) {
    Formula f = parse(c.formula);
    bool ok = true;
    out << c.description << '\n';
    for (const auto& literal : c.histories) {
      History h = sys.parse_history(literal);
      ClaimReport r = check_claim(sys, h, f, c.expected, default_horizon(h, f));
      out << "  " << r.text() << '\n';
      ok = ok && r.passed;
    }
    passed += ok;
  }
  out << passed << "/" << claims.size() << " claims pass\n";
  return passed == claims.size() ? kOk : kNegative;
}

int do_validate(const std::string& path, std::ostream& out) {
  System sys = load_system_file(path);
  out << "agents: " << sys.num_agents() << '\n'
      << "choices: " << sys.num_choices() << '\n'
      << "states: " << sys.num_states() << '\n'
      << "profiles: " << sys.num_profiles() << '\n'
      << "transitions: " << sys.mechanism().size() << '\n';
  auto missing = sys.check_regular();
  for (const auto& [w, s] : missing)
    out << "no successor: " << sys.state_name(w) << " under " << sys.format_profile(s)
        << '\n';
  out << "regular: " << yes_no(missing.empty()) << '\n';
  return missing.empty() ? kOk : kNegative;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checker and proof checker for coalition know-how", "knowhow"};
  app.require_subcommand(1, 1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Evaluate a formula at a history");
  c->add_option("--system", check.system, "System file")->required();
  c->add_option("--history", check.history, "History literal, e.g. \"w0 ; a=1 ; w1\"")
      ->required();
  c->add_option("--formula", check.formula, "Formula text")->required();
  c->add_option("--horizon", check.horizon, "Bound for empty-coalition clauses");

  std::string proof_path;
  auto* p = app.add_subcommand("prove", "Verify a derivation file");
  p->add_option("path", proof_path, "Proof file")->required();

  FuzzArgs fuzz;
  auto* z = app.add_subcommand("fuzz", "Random soundness checks of the axioms");
  z->add_option("--seed", fuzz.params.seed, "Master seed");
  z->add_option("--systems", fuzz.systems, "Number of random systems");
  z->add_option("--instances", fuzz.instances, "Axiom instances per system");
  z->add_option("--depth", fuzz.params.history_depth, "Maximum history length");
  z->add_option("--horizon", fuzz.params.horizon, "Bound for empty-coalition clauses");
  z->add_option("--states", fuzz.params.num_states, "Maximum states per system");
  z->add_option("--agents", fuzz.params.num_agents, "Maximum agents per system");
  z->add_option("--choices", fuzz.params.num_choices, "Maximum choices per agent");
  z->add_option("--formula-depth", fuzz.params.formula_depth,
                "Depth of formulas substituted into the schemas");
  z->add_option("--branching", fuzz.params.branching, "Expected successors per profile");
  z->add_option("--threads", fuzz.params.threads, "Worker threads (0 = all cores)");
  z->add_flag("--no-empty", fuzz.no_empty, "Never use the empty coalition");
  z->add_flag("--lemmas", fuzz.lemmas, "Also run the lemma suite on the same systems");
  z->add_flag("--json", fuzz.json, "Print the report as JSON");

  std::string fixture;
  auto* e = app.add_subcommand("examples", "Check the claims about a bundled system");
  e->add_option("name", fixture, "Bundled system")
      ->required()
      ->check(CLI::IsMember({"t1", "t2"}));

  std::string system_path;
  auto* v = app.add_subcommand("validate", "Check a system file for regularity");
  v->add_option("path", system_path, "System file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c) return do_check(check, out, err);
    if (*p) return do_prove(proof_path, out);
    if (*z) return do_fuzz(fuzz, out);
    if (*e) return do_examples(fixture, out);
    if (*v) return do_validate(system_path, out);
  } catch (const ParseError& ex) {
    err << "error: formula: " << ex.what() << '\n';
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
  }
  return kUsage;
}

}  // namespace knowhow::cli
