#include <gtest/gtest.h>

#include <random>

#include "ldgba/logic/parser.hpp"
#include "ldgba/logic/semantics.hpp"
#include "support/generators.hpp"

using namespace ldgba::logic;
using ldgba::testing::naive_eval;
using ldgba::testing::random_formula;
using ldgba::testing::random_lasso;

namespace {

const AtomSet abc{"a", "b", "c"};

Formula A(const char* n) { return Formula::atom(n); }

}  // namespace

TEST(Parse, Phi1) {
  const Formula expected = Formula::conj(
      Formula::disj(Formula::always(Formula::eventually(A("a"))), Formula::always(Formula::eventually(A("b")))),
      Formula::always(Formula::negation(A("c"))));
  EXPECT_EQ(parse("(G F a | G F b) & G !c", abc), expected);
}

TEST(Parse, TrueLiteral) { EXPECT_EQ(parse("true", abc), Formula::truth()); }

TEST(Parse, Phi2) {
  const Formula expected =
      Formula::conj(Formula::always(Formula::eventually(Formula::conj(A("a"), Formula::eventually(A("b"))))),
                    Formula::always(Formula::negation(A("c"))));
  EXPECT_EQ(parse("G F (a & F b) & G !c", abc), expected);
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(parse("a | b & c", abc), Formula::disj(A("a"), Formula::conj(A("b"), A("c"))));
  EXPECT_EQ(parse("a U b U c", abc), Formula::until(A("a"), Formula::until(A("b"), A("c"))));
  EXPECT_EQ(parse("a & b U c", abc), Formula::conj(A("a"), Formula::until(A("b"), A("c"))));
  EXPECT_EQ(parse("!a U b", abc), Formula::until(Formula::negation(A("a")), A("b")));
  EXPECT_EQ(parse("a & b & c", abc), Formula::conj(Formula::conj(A("a"), A("b")), A("c")));
  EXPECT_EQ(parse("X X a", abc), Formula::next(Formula::next(A("a"))));
}

TEST(Parse, SyntaxErrorReportsOffset) {
  try {
    parse("a U", abc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
  }
  try {
    parse("(a & b", abc);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    parse("a $ b", abc);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(Parse, UnknownAtom) {
  try {
    parse("G !d", abc);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_NE(std::string(e.what()).find("unknown atom 'd'"), std::string::npos);
  }
}

TEST(Print, AsciiWithMinimalParentheses) {
  EXPECT_EQ(to_string(parse("(G F a | G F b) & G !c", abc)), "(G F a | G F b) & G !c");
  EXPECT_EQ(to_string(parse("G F (a & F b)", abc)), "G F (a & F b)");
  EXPECT_EQ(to_string(parse("(a U b) U c", abc)), "(a U b) U c");
  EXPECT_EQ(to_string(parse("a & (b & c)", abc)), "a & (b & c)");
}

TEST(Print, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = random_formula(rng, abc, 5);
    const std::string text = to_string(f);
    ASSERT_EQ(parse(text, abc), f) << text;
  }
}

TEST(ExpandDerived, Examples) {
  EXPECT_EQ(expand_derived(Formula::eventually(A("a"))), Formula::until(Formula::truth(), A("a")));
  EXPECT_EQ(expand_derived(Formula::always(A("a"))),
            Formula::negation(Formula::until(Formula::truth(), Formula::negation(A("a")))));
  EXPECT_EQ(expand_derived(A("a")), A("a"));
}

namespace {
bool core_only(const Formula& f) {
  if (f.op() == Op::Eventually || f.op() == Op::Always) return false;
  if (f.is_unary()) return core_only(f.operand());
  if (f.is_binary()) return core_only(f.lhs()) && core_only(f.rhs());
  return true;
}
}  // namespace

TEST(ExpandDerived, PreservesSemanticsOnRandomPairs) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = random_formula(rng, abc, 5);
    const LassoWord w = random_lasso(rng, abc, 4, 4);
    const Formula g = expand_derived(f);
    ASSERT_TRUE(core_only(g));
    ASSERT_EQ(eval_lasso(f, w, abc), eval_lasso(g, w, abc)) << to_string(f);
  }
}

TEST(EvalLasso, Examples) {
  const Symbol none{}, a = abc.symbol({"a"}), b = abc.symbol({"b"}), c = abc.symbol({"c"});
  EXPECT_TRUE(eval_lasso(parse("F a", abc), LassoWord{{none}, {a}}, abc));
  EXPECT_FALSE(eval_lasso(parse("G !c", abc), LassoWord{{c}, {none}}, abc));
  // Unrolled by hand: every a (offset 0 of the cycle) is followed by b at offset 2.
  EXPECT_TRUE(eval_lasso(parse("G F (a & F b)", abc), LassoWord{{}, {a, none, b, none}}, abc));
  EXPECT_TRUE(naive_eval(parse("G F (a & F b)", abc), LassoWord{{}, {a, none, b, none}}, abc));
  EXPECT_FALSE(eval_lasso(parse("G F (a & F b)", abc), LassoWord{{b}, {a, none}}, abc));
}

TEST(EvalLasso, NextAndUntilAtCycleBoundary) {
  const Symbol none{}, a = abc.symbol({"a"}), b = abc.symbol({"b"});
  // prefix [a] cycle [b, a]: positions 0:a 1:b 2:a 3:b ...
  const LassoWord w{{a}, {b, a}};
  EXPECT_TRUE(eval_lasso(parse("X b", abc), w, abc));
  EXPECT_TRUE(eval_lasso(parse("X X X b", abc), w, abc));
  EXPECT_TRUE(eval_lasso(parse("G (a | b)", abc), w, abc));
  EXPECT_FALSE(eval_lasso(parse("a U c", abc), w, abc));
  EXPECT_TRUE(eval_lasso(parse("(a | b) U (b & X a)", abc), w, abc));
  EXPECT_FALSE(eval_lasso(parse("F G a", abc), w, abc));
  EXPECT_TRUE(eval_lasso(parse("F G !c", abc), LassoWord{{none}, {a}}, abc));
}

TEST(EvalLasso, RotationInvariance) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Formula f = random_formula(rng, abc, 5);
    const LassoWord w = random_lasso(rng, abc, 4, 4);
    LassoWord r = w;
    r.prefix.push_back(w.cycle.front());
    r.cycle.erase(r.cycle.begin());
    r.cycle.push_back(w.cycle.front());
    ASSERT_EQ(eval_lasso(f, w, abc), eval_lasso(f, r, abc)) << to_string(f);
  }
}

TEST(EvalLasso, AgreesWithDefinitionalOracle) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = random_formula(rng, abc, 5);
    const LassoWord w = random_lasso(rng, abc, 4, 4);
    ASSERT_EQ(eval_lasso(f, w, abc), naive_eval(f, w, abc)) << to_string(f);
  }
}

TEST(EvalLasso, EmptyCycleRejected) {
  EXPECT_THROW(eval_lasso(parse("a", abc), LassoWord{{Symbol{}}, {}}, abc), std::invalid_argument);
}

TEST(AtomSet, LexicographicOrderFixesBits) {
  const AtomSet s{"c", "S", "a", "Print"};
  EXPECT_EQ(s.names(), (std::vector<std::string>{"Print", "S", "a", "c"}));
  EXPECT_EQ(s.symbol({"a"}).bits, 4u);
  EXPECT_EQ(s.format(s.symbol({"c", "Print"})), "{Print,c}");
  EXPECT_THROW(AtomSet({"X"}), std::invalid_argument);
  EXPECT_EQ(AtomSet::from_csv("b, a,c"), abc);
}
