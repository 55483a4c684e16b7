#include <gtest/gtest.h>

#include "knowhow/checker.hpp"
#include "knowhow/fixtures.hpp"
#include "knowhow/harness.hpp"

namespace knowhow {
namespace {

const System& t1() {
  static const System s = fixture_system("t1");
  return s;
}
const System& t2() {
  static const System s = fixture_system("t2");
  return s;
}

bool holds(const System& s, const std::string& h, const std::string& f,
           std::size_t horizon = 6) {
  return evaluate(s, s.parse_history(h), parse(f), horizon).value;
}

TEST(Evaluate, T1Claims) {
  EXPECT_FALSE(holds(t1(), "w2", "K{a} p"));
  EXPECT_FALSE(holds(t1(), "w1 ; a=0 ; w2", "K{a} p"));
  EXPECT_TRUE(holds(t1(), "w0 ; a=1 ; w1 ; a=0 ; w2", "K{a} p"));
  EXPECT_FALSE(holds(t1(), "w1", "H{a} p"));
  EXPECT_FALSE(holds(t1(), "w1'", "H{a} p"));
  EXPECT_TRUE(holds(t1(), "w0 ; a=1 ; w1", "H{a} p"));
  EXPECT_TRUE(holds(t1(), "w0", "H{a} H{a} p"));
}

TEST(Evaluate, T2Claims) {
  EXPECT_TRUE(holds(t2(), "w0", "H{a,b} p"));
  EXPECT_FALSE(holds(t2(), "w0", "H{a} p"));
  EXPECT_FALSE(holds(t2(), "w0", "H{b} p"));
  EXPECT_FALSE(holds(t2(), "w0", "H{c} p"));
  EXPECT_TRUE(holds(t2(), "w0", "H{a,c} p"));
}

TEST(Evaluate, FalsehoodIsUnachievable) {
  for (const auto& h : histories_of_length(t2(), 1)) {
    std::string lit = t2().format_history(h);
    EXPECT_FALSE(holds(t2(), lit, "H{a,b,c} false"));
    EXPECT_FALSE(holds(t2(), lit, "H{} false", 2));
  }
}

TEST(Evaluate, BooleanConnectives) {
  EXPECT_TRUE(holds(t1(), "w2", "p"));
  EXPECT_FALSE(holds(t1(), "w2'", "p"));
  EXPECT_TRUE(holds(t1(), "w2'", "p -> false -> q"));
  EXPECT_TRUE(holds(t1(), "w2'", "!p"));
  EXPECT_TRUE(holds(t1(), "w0", "true"));
  EXPECT_FALSE(holds(t1(), "w0", "false"));
  EXPECT_FALSE(holds(t1(), "w2", "undeclared"));
}

TEST(Evaluate, Preconditions) {
  const System& s = t1();
  History bad{{s.state_id("w0"), s.state_id("w2")}, {0}};
  EXPECT_THROW(evaluate(s, bad, parse("p"), 3), EvaluationError);
  EXPECT_THROW(evaluate(s, s.parse_history("w0"), parse("K{b} p"), 3), EvaluationError);
  // empty coalition needs horizon >= length + h_depth
  History h = s.parse_history("w0 ; a=1 ; w1");
  EXPECT_THROW(evaluate(s, h, parse("H{} p"), 1), EvaluationError);
  EXPECT_NO_THROW(evaluate(s, h, parse("H{} p"), 2));
  EXPECT_NO_THROW(evaluate(s, h, parse("H{a} H{a} p"), 0));
}

TEST(Evaluate, RefusesNonRegularSystems) {
  System s = load_system("agents: a\nchoices: 0 1\nstates: x\ntrans x [a=0] x\n");
  EXPECT_FALSE(s.regular());
  EXPECT_THROW(Evaluator(s, 3), EvaluationError);
  EXPECT_THROW(evaluate(s, s.parse_history("x"), parse("p"), 3), EvaluationError);
  EXPECT_THROW(evaluate_naive(s, s.parse_history("x"), parse("p"), 3), EvaluationError);
}

TEST(Verdict, BoundedOnlyWithEmptyCoalition) {
  Verdict v = evaluate(t1(), t1().parse_history("w0"), parse("H{a} H{a} p"), 0);
  EXPECT_FALSE(v.bounded);
  v = evaluate(t1(), t1().parse_history("w0"), parse("K{} !false"), 3);
  EXPECT_TRUE(v.bounded);
  EXPECT_TRUE(v.value);
  EXPECT_EQ(v.horizon_used, 3u);
}

TEST(Verdict, CounterexampleForEmptyCoalition) {
  Verdict v = evaluate(t1(), t1().parse_history("w0"), parse("K{} p"), 2);
  ASSERT_FALSE(v.value);
  ASSERT_TRUE(v.counterexample);
  EXPECT_FALSE(evaluate(t1(), *v.counterexample, parse("p"), 2).value);
  EXPECT_LE(v.counterexample->length(), 2u);

  v = evaluate(t1(), t1().parse_history("w0"), parse("H{} p"), 2);
  ASSERT_FALSE(v.value);
  ASSERT_TRUE(v.counterexample);
  EXPECT_GE(v.counterexample->length(), 1u);
}

TEST(Verdict, CounterexampleForKnowledge) {
  Verdict v = evaluate(t1(), t1().parse_history("w2"), parse("K{a} p"), 0);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(t1().format_history(*v.counterexample), "w2'");
}

TEST(Witness, Examples) {
  auto w = witness(t1(), t1().parse_history("w0 ; a=1 ; w1"), Coalition{"a"}, parse("p"), 2);
  ASSERT_TRUE(w);
  EXPECT_EQ(t1().format_strategy(w->profile), "a=0");
  EXPECT_FALSE(witness(t1(), t1().parse_history("w1"), Coalition{"a"}, parse("p"), 1));
  auto w2 = witness(t2(), t2().parse_history("w0"), Coalition{"a", "b"}, parse("p"), 1);
  ASSERT_TRUE(w2);
  EXPECT_EQ(t2().format_strategy(w2->profile), "a=1,b=1");
}

TEST(Witness, FirstInLexicographicOrder) {
  // both instructions work from w0 for the body "true"
  auto w = witness(t1(), t1().parse_history("w0"), Coalition{"a"}, parse("true"), 1);
  ASSERT_TRUE(w);
  EXPECT_EQ(t1().format_strategy(w->profile), "a=0");
}

TEST(Witness, ReplayAgrees) {
  const System& s = t1();
  History h = s.parse_history("w0 ; a=1 ; w1");
  for (const auto& st : all_strategies(s, 1))
    EXPECT_EQ(replay_how(s, h, 1, st, parse("p"), 2), st.votes[0] == 0);
}

TEST(AllStrategies, Lexicographic) {
  auto all = all_strategies(t2(), t2().mask(Coalition{"a", "c"}));
  ASSERT_EQ(all.size(), 4u);
  std::vector<std::string> names;
  for (const auto& s : all) names.push_back(t2().format_strategy(s));
  EXPECT_EQ(names, (std::vector<std::string>{"a=0,c=0", "a=0,c=1", "a=1,c=0", "a=1,c=1"}));
  EXPECT_EQ(all_strategies(t2(), 0).size(), 1u);
}

TEST(Claims, FlippedExpectationFails) {
  History h = t1().parse_history("w2");
  ClaimReport r = check_claim(t1(), h, parse("K{a} p"), true, 0);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.text(), "FAIL  (w2) |= K{a} p  expected True, got False");
}

TEST(Claims, BoundedFlagReported) {
  History h = t1().parse_history("w0");
  ClaimReport r = check_claim(t1(), h, parse("K{} p -> H{} p"), true, 1);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.verdict.bounded);
  EXPECT_NE(r.text().find("[bounded, horizon 1]"), std::string::npos);
}

TEST(Claims, FixtureListsPass) {
  for (const auto& name : fixture_names()) {
    System s = fixture_system(name);
    for (const auto& c : fixture_claims(name))
      for (const auto& lit : c.histories) {
        History h = s.parse_history(lit);
        Formula f = parse(c.formula);
        EXPECT_TRUE(check_claim(s, h, f, c.expected, default_horizon(h, f)).passed)
            << name << ": " << lit << " " << c.formula;
      }
  }
  EXPECT_EQ(fixture_claims("t1").size(), 6u);
  EXPECT_THROW(fixture_claims("t9"), std::invalid_argument);
}

TEST(DefaultHorizon, AddsSlackForEmptyCoalition) {
  History h = t1().parse_history("w0 ; a=1 ; w1");
  EXPECT_EQ(default_horizon(h, parse("H{a} H{a} p")), 3u);
  EXPECT_EQ(default_horizon(h, parse("K{} H{a} p")), 4u);
}

// Exactness: without the empty coalition verdicts do not depend on the
// horizon and only lengths in [|h|, |h| + h_depth] are visited.
TEST(Properties, Exactness) {
  GenParams gp;
  gp.allow_empty_coalition = false;
  for (std::size_t i = 0; i < 30; ++i) {
    GenParams q = system_params(gp, i);
    System s = gen_system(q);
    FormulaGenerator gen(i, s.propositions(), s.agents(), false);
    for (int k = 0; k < 10; ++k) {
      Formula f = gen.formula(3);
      for (const auto& h : histories_of_length(s, k % 3)) {
        Evaluator ev(s, 0);
        bool v = ev.evaluate(h, f).value;
        EXPECT_GE(ev.min_length_touched(), h.length());
        EXPECT_LE(ev.max_length_touched(), h.length() + h_depth(f));
        EXPECT_EQ(evaluate(s, h, f, 9).value, v);
        EXPECT_FALSE(ev.evaluate(h, f).bounded);
      }
    }
  }
}

// Once false at some horizon, an empty-coalition clause stays false at every
// larger one. Bodies are free of the empty coalition.
TEST(Properties, HorizonMonotonicity) {
  GenParams gp;
  for (std::size_t i = 0; i < 20; ++i) {
    GenParams q = system_params(gp, i);
    q.num_states = std::min<std::size_t>(q.num_states, 3);
    System s = gen_system(q);
    FormulaGenerator gen(100 + i, s.propositions(), s.agents(), false);
    for (int k = 0; k < 6; ++k) {
      Formula body = gen.formula(1);
      for (Formula f : {Formula::know({}, body), Formula::how({}, body)}) {
        History h = histories_of_length(s, 0).front();
        bool was_false = false;
        for (std::size_t n = h_depth(f); n <= 4; ++n) {
          bool v = evaluate(s, h, f, n).value;
          if (was_false) EXPECT_FALSE(v) << print(f) << " at horizon " << n;
          was_false = was_false || !v;
        }
      }
    }
  }
}

TEST(Properties, EvaluatorClassMatchesFilter) {
  Evaluator ev(t1(), 3);
  for (std::size_t n = 0; n <= 3; ++n)
    for (const auto& h : histories_of_length(t1(), n)) {
      auto a = ev.indist_class(h, 1);
      auto b = indist_class(t1(), h, 1);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      EXPECT_EQ(a, b);
    }
  EXPECT_THROW(ev.indist_class(t1().parse_history("w0"), 0), EvaluationError);
}

TEST(Oracle, AgreesOnFixtures) {
  for (const auto& name : fixture_names()) {
    System s = fixture_system(name);
    for (const auto& c : fixture_claims(name))
      for (const auto& lit : c.histories) {
        History h = s.parse_history(lit);
        Formula f = parse(c.formula);
        std::size_t n = default_horizon(h, f);
        EXPECT_EQ(evaluate(s, h, f, n).value, evaluate_naive(s, h, f, n).value);
      }
  }
}

TEST(Oracle, AgreesWithEmptyCoalition) {
  const System& s = t1();
  FormulaGenerator gen(5, {"p"}, {"a"}, true);
  for (int k = 0; k < 40; ++k) {
    Formula f = gen.formula(2);
    History h = s.parse_history("w0");
    std::size_t n = std::max<std::size_t>(h_depth(f), 2);
    Verdict a = evaluate(s, h, f, n), b = evaluate_naive(s, h, f, n);
    EXPECT_EQ(a.value, b.value) << print(f);
    EXPECT_EQ(a.bounded, b.bounded) << print(f);
  }
}

TEST(Oracle, AgreesOnRandomTriples) {
  GenParams gp;
  gp.num_states = 3;
  gp.num_choices = 2;
  for (std::size_t i = 0; i < 40; ++i) {
    GenParams q = system_params(gp, i);
    System s = gen_system(q);
    FormulaGenerator gen(i * 31 + 1, s.propositions(), s.agents(), false);
    for (int k = 0; k < 5; ++k) {
      Formula f = gen.formula(2);
      for (const auto& h : histories_of_length(s, k % 2))
        ASSERT_EQ(evaluate(s, h, f, 0).value, evaluate_naive(s, h, f, 0).value)
            << print(f) << " at " << s.format_history(h) << "\n" << s.to_text();
    }
  }
}

}  // namespace
}  // namespace knowhow
