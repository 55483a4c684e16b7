#include <gtest/gtest.h>

#include <set>

#include "knowhow/formula.hpp"
#include "knowhow/harness.hpp"

namespace knowhow {
namespace {

Formula p = Formula::atom("p");
Formula q = Formula::atom("q");
Formula r = Formula::atom("r");

TEST(Identifier, AcceptsPrimesDigitsUnderscore) {
  EXPECT_TRUE(is_identifier("w0'"));
  EXPECT_TRUE(is_identifier("_x1"));
  EXPECT_TRUE(is_identifier("a"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("0a"));
  EXPECT_FALSE(is_identifier("'a"));
  EXPECT_FALSE(is_identifier("a-b"));
}

TEST(CoalitionTest, SortsAndCompares) {
  Coalition c{"b", "a"};
  EXPECT_EQ(c.to_string(), "{a,b}");
  EXPECT_EQ(c, (Coalition{"a", "b"}));
  EXPECT_EQ(Coalition{}.to_string(), "{}");
  EXPECT_TRUE(Coalition{}.empty());
}

TEST(CoalitionTest, RejectsDuplicatesAndBadNames) {
  EXPECT_THROW((Coalition{"a", "a"}), std::invalid_argument);
  EXPECT_THROW((Coalition{"1"}), std::invalid_argument);
}

TEST(CoalitionTest, SetOperations) {
  Coalition a{"a"}, ab{"a", "b"}, c{"c"};
  EXPECT_TRUE(a.subset_of(ab));
  EXPECT_FALSE(ab.subset_of(a));
  EXPECT_TRUE(Coalition{}.subset_of(a));
  EXPECT_TRUE(a.disjoint_from(c));
  EXPECT_FALSE(a.disjoint_from(ab));
  EXPECT_EQ(a.united(c), (Coalition{"a", "c"}));
  EXPECT_EQ(ab.minus(a), Coalition{"b"});
  EXPECT_TRUE(ab.contains("b"));
  EXPECT_FALSE(ab.contains("c"));
}

TEST(Parse, ImplicationIsRightAssociative) {
  EXPECT_EQ(parse("p -> q -> r"),
            Formula::implies(p, Formula::implies(q, r)));
  EXPECT_EQ(parse("(p -> q) -> r"),
            Formula::implies(Formula::implies(p, q), r));
}

TEST(Parse, Modalities) {
  EXPECT_EQ(parse("H{a,b} p"), Formula::how(Coalition{"a", "b"}, p));
  EXPECT_EQ(parse("K{} p -> H{} p"),
            Formula::implies(Formula::know({}, p), Formula::how({}, p)));
  EXPECT_EQ(parse("H{b,a} p"), parse("H{a,b} p"));
  EXPECT_EQ(parse("K{a}(p -> q)"),
            Formula::know(Coalition{"a"}, Formula::implies(p, q)));
}

TEST(Parse, UnaryBindsTighterThanImplication) {
  EXPECT_EQ(parse("!K{a} p -> q"),
            Formula::implies(Formula::negation(Formula::know(Coalition{"a"}, p)), q));
  EXPECT_EQ(parse("H{a} p -> q"),
            Formula::implies(Formula::how(Coalition{"a"}, p), q));
}

TEST(Parse, Constants) {
  EXPECT_EQ(parse("false"), Formula::falsum());
  EXPECT_EQ(parse("true"), Formula::negation(Formula::falsum()));
  EXPECT_EQ(Formula::truth(), parse("!false"));
}

TEST(Parse, WhitespaceIsInsignificant) {
  EXPECT_EQ(parse("  K { a , b }p->q "), parse("K{a,b} p -> q"));
  EXPECT_EQ(parse("!!p"), Formula::negation(Formula::negation(p)));
}

TEST(Parse, PrimedAtoms) {
  EXPECT_EQ(parse("w0'").name(), "w0'");
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("p ->"), ParseError);
  EXPECT_THROW(parse("(p"), ParseError);
  EXPECT_THROW(parse("p q"), ParseError);
  EXPECT_THROW(parse("K p"), ParseError);
  EXPECT_THROW(parse("H{a p"), ParseError);
  EXPECT_THROW(parse("K{a,} p"), ParseError);
  EXPECT_THROW(parse("K{a,a} p"), ParseError);
  EXPECT_THROW(parse("p & q"), ParseError);
}

TEST(Parse, ErrorReportsOffsetAndExpectation) {
  try {
    parse("p -> )");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, PrefixStopsAtJustification) {
  std::string text = "K{a} p -> p   axiom Truth";
  std::size_t pos = 0;
  Formula f = parse_prefix(text, pos);
  EXPECT_EQ(f, parse("K{a} p -> p"));
  EXPECT_EQ(text.substr(pos), "axiom Truth");
}

TEST(Print, Examples) {
  EXPECT_EQ(print(Formula::implies(p, p)), "p -> p");
  EXPECT_EQ(print(Formula::how(Coalition{"b", "a"}, Formula::falsum())), "H{a,b} false");
  EXPECT_EQ(print(Formula::negation(Formula::implies(p, q))), "!(p -> q)");
  EXPECT_EQ(print(Formula::truth()), "true");
  EXPECT_EQ(print(Formula::implies(Formula::implies(p, q), r)), "(p -> q) -> r");
  EXPECT_EQ(print(Formula::implies(p, Formula::implies(q, r))), "p -> q -> r");
  EXPECT_EQ(print(Formula::know(Coalition{"a"}, Formula::implies(p, q))), "K{a}(p -> q)");
  EXPECT_EQ(print(Formula::know({}, p)), "K{} p");
}

TEST(Depth, HDepth) {
  EXPECT_EQ(h_depth(p), 0u);
  EXPECT_EQ(h_depth(parse("H{a} H{a} p")), 2u);
  EXPECT_EQ(h_depth(parse("K{a} H{a} p")), 1u);
  EXPECT_EQ(h_depth(parse("H{a} p -> K{a} K{a} q")), 1u);
  EXPECT_EQ(modal_depth(parse("K{a} H{a} p")), 2u);
}

TEST(Depth, UsesEmptyCoalition) {
  EXPECT_TRUE(uses_empty_coalition(parse("K{} p")));
  EXPECT_FALSE(uses_empty_coalition(parse("H{a} p")));
  EXPECT_TRUE(uses_empty_coalition(parse("p -> H{} false")));
  EXPECT_TRUE(uses_empty_coalition(parse("!K{a} H{} p")));
}

TEST(FormulaTest, StructuralEqualityAndHash) {
  Formula a = parse("H{a}(p -> K{b} q)");
  Formula b = parse("H{a}(p -> K{b} q)");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_FALSE(a == parse("H{a}(p -> K{c} q)"));
  EXPECT_EQ(a.size(), 5u);
}

TEST(FormulaTest, AccessorsThrowOnWrongNode) {
  EXPECT_THROW(p.sub(), std::logic_error);
  EXPECT_THROW(p.coalition(), std::logic_error);
  EXPECT_THROW(Formula::falsum().name(), std::logic_error);
}

TEST(FormulaTest, AtomMustBeIdentifier) {
  EXPECT_THROW(Formula::atom("1p"), std::invalid_argument);
  EXPECT_THROW(Formula::atom("K"), std::invalid_argument);
}

TEST(RoundTrip, GeneratedFormulas) {
  std::vector<std::string> props{"p", "q", "r'"};
  std::vector<std::string> agents{"a", "b", "c"};
  FormulaGenerator gen(7, props, agents, true);
  for (int i = 0; i < 2000; ++i) {
    Formula f = gen.formula(static_cast<std::size_t>(i % 5));
    std::string text = print(f);
    ASSERT_EQ(parse(text), f) << text;
    ASSERT_EQ(print(parse(text)), text);
  }
}

TEST(Generator, DepthZeroIsLeaf) {
  FormulaGenerator gen(3, {"p"}, {"a"}, true);
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.formula(0);
    EXPECT_TRUE(f.is(Op::atom) || f.is(Op::falsum));
  }
}

TEST(Generator, RespectsDepthAndSeed) {
  GenParams gp;
  gp.formula_depth = 3;
  std::vector<std::string> props{"p", "q"}, agents{"a", "b"};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    gp.seed = seed;
    Formula f = gen_formula(gp, props, agents);
    EXPECT_LE(modal_depth(f), 3u);
    EXPECT_LE(h_depth(f), 3u);
    EXPECT_EQ(f, gen_formula(gp, props, agents));
  }
}

TEST(Generator, NoEmptyCoalitionWhenDisallowed) {
  FormulaGenerator gen(11, {"p"}, {"a", "b"}, false);
  for (int i = 0; i < 500; ++i) EXPECT_FALSE(uses_empty_coalition(gen.formula(3)));
}

}  // namespace
}  // namespace knowhow
