#include <gtest/gtest.h>

#include <random>

#include "ldgba/automata/acceptance.hpp"
#include "ldgba/translate/registry.hpp"
#include "support/generators.hpp"

using namespace ldgba::translate;
using ldgba::automata::accepts_lasso;
using ldgba::automata::validate;
using ldgba::logic::eval_lasso;
using ldgba::logic::LassoWord;
using ldgba::logic::parse;
using ldgba::testing::random_lasso;

TEST(Registry, LanguageMatchesFormulaOn1000Lassos) {
  for (const auto& t : task_registry()) {
    const AtomSet atoms(t.atoms);
    const Formula f = parse(t.formula, atoms);
    const Ldgba a = task_automaton(t.name);
    ASSERT_TRUE(validate(a).empty()) << t.name;
    std::mt19937_64 rng(1000 + t.name.size());
    int accepted = 0;
    for (int i = 0; i < 1000; ++i) {
      const LassoWord w = random_lasso(rng, atoms, 6, 6);
      const bool expect = eval_lasso(f, w, atoms);
      accepted += expect;
      ASSERT_EQ(accepts_lasso(a, w), expect) << t.name << " lasso " << i;
    }
    // the sample must exercise both outcomes for the comparison to mean anything
    if (t.name != "office_task2") EXPECT_GT(accepted, 0) << t.name;
    EXPECT_LT(accepted, 1000) << t.name;
  }
}

TEST(Registry, UnknownTask) { EXPECT_THROW(task_automaton("nope"), std::invalid_argument); }

TEST(Registry, Sizes) {
  EXPECT_EQ(task_automaton("go_to_goal").size(), 2u);
  const Ldgba phi1 = task_automaton("grid_phi1");
  EXPECT_FALSE(phi1.deterministic(phi1.initial()));
  EXPECT_EQ(phi1.epsilon_successors(phi1.initial()).size(), 2u);
  EXPECT_EQ(phi1.acceptance_set_count(), 1u);
  EXPECT_EQ(task_automaton("grid_phi2").acceptance_set_count(), 2u);
  for (const char* name : {"grid_phi2", "office_task1", "office_task2", "warehouse_phi", "go_to_goal"}) {
    const Ldgba a = task_automaton(name);
    EXPECT_FALSE(a.has_epsilon()) << name;
  }
}

TEST(Translate, SafetyOnlyTwoStates) {
  const AtomSet atoms{"c"};
  const Ldgba a = translate(parse("G !c", atoms), atoms);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(a.acceptance_set_count(), 1u);
  EXPECT_EQ(a.acceptance_set(0), std::vector<StateId>{a.initial()});
  const auto c = atoms.symbol({"c"});
  EXPECT_EQ(a.step(a.initial(), Symbol{}), a.initial());
  EXPECT_NE(a.step(a.initial(), c), a.initial());
}

TEST(Translate, Deterministic) {
  for (const auto& t : task_registry()) EXPECT_EQ(task_automaton(t.name), task_automaton(t.name)) << t.name;
}

TEST(Translate, FragmentErrorNamesSubformula) {
  const AtomSet atoms{"a", "b"};
  try {
    translate(parse("G F a & X b", atoms), atoms);
    FAIL();
  } catch (const FragmentError& e) {
    EXPECT_EQ(ldgba::logic::to_string(e.subformula()), "X b");
  }
  EXPECT_THROW(translate(parse("F G a", atoms), atoms), FragmentError);
  EXPECT_THROW(translate(parse("a U (b U a)", atoms), atoms), FragmentError);
}

TEST(Translate, ExtraShapesAgreeWithSemantics) {
  const AtomSet atoms{"a", "b", "c"};
  const char* formulas[] = {
      "G F a",           "G F (a | b)",    "F a & F b",          "G F a & G F b & G !c",
      "G F a | G F b",   "!a U b",         "G F (a & F b)",      "(G F a | G F (b & c)) & F c",
      "(!a U b) & G F c", "G !a & G !b",   "G F (a & F (b | c))", "F (a & b) & G !c",
  };
  for (const char* text : formulas) {
    const Formula f = parse(text, atoms);
    const Ldgba a = translate(f, atoms);
    ASSERT_TRUE(validate(a).empty()) << text;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 400; ++i) {
      const LassoWord w = random_lasso(rng, atoms, 6, 6);
      ASSERT_EQ(accepts_lasso(a, w), eval_lasso(f, w, atoms)) << text << " lasso " << i;
    }
  }
}

TEST(Fragment, MatchKinds) {
  const AtomSet atoms{"Print", "S", "Sply", "a", "c"};
  const auto parts = match_fragment(parse(task_spec("office_task2").formula, atoms));
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[0].kind, ConjunctKind::Sequence);
  EXPECT_EQ(parts[1].kind, ConjunctKind::Sequence);
  EXPECT_EQ(parts[2].kind, ConjunctKind::Reachability);
  EXPECT_EQ(parts[3].kind, ConjunctKind::Safety);
  const auto t1 = match_fragment(parse(task_spec("office_task1").formula, atoms));
  ASSERT_EQ(t1.size(), 2u);
  EXPECT_EQ(t1[0].kind, ConjunctKind::Surveillance);
}
