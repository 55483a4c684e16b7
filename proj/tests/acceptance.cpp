// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "knowhow/checker.hpp"
#include "knowhow/fixtures.hpp"
#include "knowhow/formula.hpp"
#include "knowhow/harness.hpp"
#include "knowhow/proofkit.hpp"
#include "knowhow/system.hpp"

namespace {

using namespace knowhow;
using Clock = std::chrono::steady_clock;

constexpr double kRegressionSeconds = 1.0;
constexpr double kFuzzSeconds = 60.0;
constexpr std::size_t kFuzzSystems = 50;
constexpr std::size_t kFuzzInstancesPerSystem = 45;
constexpr std::size_t kMinInstances = 2000;
constexpr std::size_t kLemmaRandomSystems = 20;
constexpr std::size_t kLemmaDepth = 3;
constexpr std::size_t kOracleTriples = 1000;
constexpr std::size_t kOracleMaxFormulaDepth = 3;
constexpr std::size_t kOracleMaxHistory = 3;
constexpr std::size_t kWitnessFormulasPerSystem = 12;
constexpr std::size_t kWitnessMaxHistory = 2;
constexpr std::size_t kRoundTrips = 10000;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

GenParams fuzz_params() {
  GenParams p;
  p.seed = 2024;
  p.num_states = 4;
  p.num_agents = 2;
  p.num_choices = 2;
  p.history_depth = 3;
  p.formula_depth = 2;
  p.horizon = 5;
  return p;
}

Outcome fixture_regression(const std::string& name, std::size_t expected_claims) {
  auto t0 = Clock::now();
  System sys = fixture_system(name);
  const auto& claims = fixture_claims(name);
  std::size_t passed = 0;
  std::string failed;
  for (const Claim& c : claims) {
    Formula f = parse(c.formula);
    bool ok = true;
    for (const auto& literal : c.histories) {
      History h = sys.parse_history(literal);
      ok = check_claim(sys, h, f, c.expected, default_horizon(h, f)).passed && ok;
    }
    if (ok) ++passed;
    else failed += " [" + c.description + "]";
  }
  double s = seconds_since(t0);
  bool pass = passed == claims.size() && claims.size() == expected_claims && s < kRegressionSeconds;
  return {pass, std::to_string(passed) + "/" + std::to_string(claims.size()) + " claims in " +
                    fmt_seconds(s) + failed};
}

Outcome proof_corpus() {
  const std::string dir = KNOWHOW_PROOF_DIR;
  std::size_t good = 0, bad = 0;
  std::string problems;
  for (const char* file : {"lemma_positive_introspection.proof", "lemma_sni.proof",
                           "lemma_subset_h.proof"}) {
    Derivation d = load_proof_file(dir + "/" + file);
    VerifyReport r = verify(d);
    if (r.ok && r.theorem) ++good;
    else problems += std::string(" ") + file + ": " + r.text(d);
  }

  const std::vector<Formula> premises{parse("p"), parse("p -> q"), parse("q -> r")};
  const std::vector<Formula> conclusions{parse("p"), parse("q"), parse("r")};
  const std::vector<Coalition> coalitions{Coalition{"a"}, Coalition{"b"}, Coalition{"c"}};
  std::size_t emitted = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    std::span<const Formula> fs(premises.data(), n);
    std::span<const Coalition> cs(coalitions.data(), n);
    Derivation core;
    core.lines.push_back({implication_chain(fs, conclusions[n - 1]), just::Tautology{}, ""});
    core.goal = core.lines.back().formula;
    Derivation h = derive_superdistributivity_instance(cs, fs, conclusions[n - 1], core);
    Derivation k = derive_knowledge_superdistributivity_instance(Coalition{"a", "b"}, fs,
                                                                 conclusions[n - 1], core);
    if (verify(h).ok && verify(k).ok) ++emitted;
    else problems += " emitter n=" + std::to_string(n);
  }

  struct Negative {
    const char* file;
    std::size_t line;  // zero-based
    Failure failure;
  };
  for (const Negative& n : {Negative{"bad_nec_hyp.proof", 1, Failure::mode_violation},
                            Negative{"bad_cooperation_overlap.proof", 1, Failure::schema_mismatch},
                            Negative{"bad_perfect_recall_empty.proof", 1,
                                     Failure::schema_mismatch}}) {
    Derivation d = load_proof_file(dir + "/" + n.file);
    VerifyReport r = verify(d);
    if (!r.ok && r.line == n.line && r.failure == n.failure) ++bad;
    else problems += std::string(" ") + n.file + ": " + r.text(d);
  }
  return {good == 3 && emitted == 3 && bad == 3,
          std::to_string(good) + "/3 lemmas, " + std::to_string(emitted) +
              "/3 emitted instances, " + std::to_string(bad) + "/3 controls rejected" + problems};
}

Outcome soundness_fuzz() {
  auto t0 = Clock::now();
  SoundnessReport r = soundness_suite(fuzz_params(), kFuzzSystems, kFuzzInstancesPerSystem);
  double s = seconds_since(t0);
  bool pass = r.systems == kFuzzSystems && r.instances >= kMinInstances && r.violations.empty() &&
              r.guard_rejections == 0 && s < kFuzzSeconds;
  std::string detail = std::to_string(r.systems) + " systems, " + std::to_string(r.instances) +
                       " instances, " + std::to_string(r.evaluations) + " evaluations, " +
                       std::to_string(r.violations.size()) + " violations in " + fmt_seconds(s);
  if (!r.violations.empty()) detail += "\n" + r.text();
  return {pass, detail};
}

Outcome lemma_suite_outcome() {
  LemmaReport r;
  lemma_checks(fixture_system("t1"), kLemmaDepth, 1, 8, r);
  lemma_checks(fixture_system("t2"), kLemmaDepth, 2, 8, r);
  GenParams p = fuzz_params();
  p.seed = 77;
  p.history_depth = kLemmaDepth;
  r.merge(lemma_suite(p, kLemmaRandomSystems));
  std::string detail = std::to_string(r.systems) + " systems, " + std::to_string(r.checks) +
                       " checks, " + std::to_string(r.failures.size()) + " failures";
  for (const auto& f : r.failures) detail += "\n  " + f;
  return {r.failures.empty() && r.systems == kLemmaRandomSystems + 2, detail};
}

History random_history(const System& sys, std::mt19937_64& rng, std::size_t length) {
  History h;
  h.states.push_back(static_cast<StateId>(rng() % sys.num_states()));
  for (std::size_t i = 0; i < length; ++i) {
    ProfileId s = static_cast<ProfileId>(rng() % sys.num_profiles());
    auto next = sys.successors(h.last(), s);
    h = h.extended(s, next[rng() % next.size()]);
  }
  return h;
}

Outcome oracle_agreement() {
  GenParams p = fuzz_params();
  p.seed = 31337;
  std::mt19937_64 rng(p.seed);
  std::size_t agree = 0;
  std::string first;
  for (std::size_t i = 0; i < kOracleTriples; ++i) {
    GenParams q = system_params(p, i);
    System sys = gen_system(q);
    FormulaGenerator gen(q.seed ^ 0x5bd1e995, sys.propositions(), sys.agents(), false);
    Formula f = gen.formula(rng() % (kOracleMaxFormulaDepth + 1));
    History h = random_history(sys, rng, rng() % (kOracleMaxHistory + 1));
    std::size_t horizon = default_horizon(h, f);
    Verdict fast = evaluate(sys, h, f, horizon);
    Verdict slow = evaluate_naive(sys, h, f, horizon);
    if (fast.value == slow.value && !fast.bounded && !slow.bounded) ++agree;
    else if (first.empty())
      first = " first disagreement: " + print(f) + " at " + sys.format_history(h);
  }
  return {agree == kOracleTriples,
          std::to_string(agree) + "/" + std::to_string(kOracleTriples) + " agree" + first};
}

Outcome witness_soundness() {
  GenParams p = fuzz_params();
  std::size_t true_checked = 0, false_checked = 0, errors = 0;
  std::string first;
  for (std::size_t i = 0; i < kFuzzSystems; ++i) {
    GenParams q = system_params(p, i);
    System sys = gen_system(q);
    FormulaGenerator gen(q.seed ^ 0x9e3779b9, sys.propositions(), sys.agents(), false);
    std::vector<History> hs;
    for (std::size_t n = 0; n <= kWitnessMaxHistory; ++n)
      for (auto& h : histories_of_length(sys, n)) hs.push_back(std::move(h));
    for (std::size_t k = 0; k < kWitnessFormulasPerSystem; ++k) {
      Coalition c = gen.nonempty_coalition();
      Formula body = gen.formula(1 + k % 2);
      Formula f = Formula::how(c, body);
      AgentMask m = sys.mask(c);
      const History& h = hs[gen.rng()() % hs.size()];
      std::size_t horizon = default_horizon(h, f);
      Verdict v = evaluate(sys, h, f, horizon);
      auto w = witness(sys, h, c, body, horizon);
      bool ok;
      if (v.value) {
        ok = w && replay_how(sys, h, m, w->profile, body, horizon);
        ++true_checked;
      } else {
        ok = !w;
        for (const auto& s : all_strategies(sys, m))
          ok = ok && !replay_how(sys, h, m, s, body, horizon);
        ++false_checked;
      }
      if (!ok) {
        ++errors;
        if (first.empty()) first = " first failure: " + print(f) + " at " + sys.format_history(h);
      }
    }
  }
  return {errors == 0 && true_checked > 0 && false_checked > 0,
          std::to_string(true_checked) + " true and " + std::to_string(false_checked) +
              " false verdicts checked, " + std::to_string(errors) + " failures" + first};
}

Outcome round_trip() {
  FormulaGenerator gen(8, {"p", "q", "r", "w0'"}, {"a", "b", "c"}, true);
  std::size_t failures = 0;
  std::string first;
  for (std::size_t i = 0; i < kRoundTrips; ++i) {
    Formula f = gen.formula(i % 6);
    std::string text = print(f);
    bool ok = false;
    try {
      ok = parse(text) == f && print(parse(text)) == text;
    } catch (const ParseError&) {
    }
    if (!ok && failures++ == 0) first = " first failure: " + text;
  }
  return {failures == 0, std::to_string(kRoundTrips - failures) + "/" +
                             std::to_string(kRoundTrips) + " round-trips" + first};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"T1 regression", [] { return fixture_regression("t1", 6); }},
      {"T2 regression", [] { return fixture_regression("t2", 3); }},
      {"proof corpus", proof_corpus},
      {"soundness fuzz", soundness_fuzz},
      {"lemma suite", lemma_suite_outcome},
      {"oracle equivalence", oracle_agreement},
      {"witness soundness", witness_soundness},
      {"parser round-trip", round_trip},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index++, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
