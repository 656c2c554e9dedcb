#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "ldgba/pomdp/pl_pomdp.hpp"
#include "ldgba/worlds/presets.hpp"

using namespace ldgba::pomdp;
using ldgba::worlds::Cell;

namespace {

PlPomdp chain() {
  PlPomdp m(2, {"go"}, {"o0", "o1"}, AtomSet{"a"});
  m.set_transitions(0, 0, {{1, 1.0, 1.0}});
  m.set_transitions(1, 0, {{1, 1.0, 0.0}});
  m.set_observations(0, 0, {{0, 1.0}});
  m.set_observations(1, 0, {{1, 1.0}});
  m.set_labels(1, {{AtomSet{"a"}.symbol({"a"}), 1.0}});
  return m;
}

// |observed - expected| <= 3 sigma of a binomial with n draws
void expect_within_3_sigma(std::size_t hits, std::size_t n, double p, const std::string& what) {
  const double sigma = std::sqrt(n * p * (1 - p));
  EXPECT_LE(std::abs(static_cast<double>(hits) - n * p), 3 * sigma + 1e-9) << what << " p=" << p;
}

}  // namespace

TEST(Validate, DeterministicChain) { EXPECT_TRUE(validate(chain()).empty()); }

TEST(Validate, RowSummingTo095) {
  PlPomdp m = chain();
  m.set_transitions(0, 0, {{0, 0.5, 0}, {1, 0.45, 0}});
  const auto v = validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("(s=0, a=0)"), std::string::npos);
}

TEST(Validate, ObservationAndLabelRows) {
  PlPomdp m = chain();
  m.set_observations(1, 0, {{1, 0.7}});
  m.set_labels(0, {{Symbol{}, 0.5}});
  EXPECT_EQ(validate(m).size(), 2u);
}

TEST(Validate, AllPresets) {
  for (const auto& name : ldgba::worlds::preset_names()) EXPECT_TRUE(validate(ldgba::worlds::preset(name).pomdp).empty()) << name;
}

TEST(Step, DeterministicChain) {
  const PlPomdp m = chain();
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const EnvStep e = m.step(0, 0, rng);
    EXPECT_EQ(e.next, 1u);
    EXPECT_EQ(e.observation, 1u);
    EXPECT_EQ(e.label.bits, 1u);
    EXPECT_EQ(e.reward, 1.0);
  }
}

TEST(Step, UnavailableAction) {
  PlPomdp m = chain();
  m.set_available(0, 0, false);
  Rng rng(1);
  EXPECT_THROW(m.step(0, 0, rng), std::invalid_argument);
}

TEST(Step, GridUpAtInteriorCell) {
  const auto w = ldgba::worlds::preset("grid_phi1");
  const auto& g = w.spec;
  const std::uint32_t s = g.state_of({3, 7});
  EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(s, 0, g.state_of({3, 6})), 0.9);
  EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(s, 0, g.state_of({2, 7})), 0.05);
  EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(s, 0, g.state_of({4, 7})), 0.05);
  EXPECT_EQ(w.pomdp.transitions(s, 0).size(), 3u);
}

TEST(Step, GridObservationRow) {
  const auto w = ldgba::worlds::preset("grid_phi1");
  const auto& g = w.spec;
  const std::uint32_t s = g.state_of({3, 7});
  std::map<std::uint32_t, double> row;
  for (const auto& o : w.pomdp.observations(s, 0)) row[o.index] = o.prob;
  ASSERT_EQ(row.size(), 5u);
  EXPECT_DOUBLE_EQ(row[s], 0.9);
  for (Cell n : {Cell{3, 6}, Cell{2, 7}, Cell{4, 7}, Cell{3, 8}}) EXPECT_DOUBLE_EQ(row[g.state_of(n)], 0.025);
}

TEST(Step, EmpiricalFrequenciesWithin3Sigma) {
  const auto w = ldgba::worlds::preset("grid_phi2_dynamic");
  const auto& g = w.spec;
  const std::uint32_t s = g.state_of({1, 7});  // moving down lands on 'a' cells with probability 0.9
  Rng rng(42);
  const std::size_t n = 100000;
  std::map<std::uint32_t, std::size_t> next, obs;
  std::map<std::uint32_t, std::size_t> label_at_18;
  std::size_t arrivals_18 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const EnvStep e = w.pomdp.step(s, 2, rng);
    ++next[e.next];
    if (e.next == g.state_of({1, 8})) {
      ++arrivals_18;
      ++obs[e.observation];
      ++label_at_18[e.label.bits];
    }
  }
  for (const auto& o : w.pomdp.transitions(s, 2)) expect_within_3_sigma(next[o.next], n, o.prob, "transition");
  for (const auto& o : w.pomdp.observations(g.state_of({1, 8}), 2))
    expect_within_3_sigma(obs[o.index], arrivals_18, o.prob, "observation");
  for (const auto& l : w.pomdp.label_distribution(g.state_of({1, 8})))
    expect_within_3_sigma(label_at_18[l.label.bits], arrivals_18, l.prob, "label");
}

TEST(Step, SameSeedSameSequence) {
  const auto w = ldgba::worlds::preset("grid_phi2_dynamic");
  Rng r1(9), r2(9);
  std::uint32_t s1 = 0, s2 = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = static_cast<std::uint32_t>(i % 4);
    const EnvStep e1 = w.pomdp.step(s1, a, r1), e2 = w.pomdp.step(s2, a, r2);
    ASSERT_EQ(e1.next, e2.next);
    ASSERT_EQ(e1.observation, e2.observation);
    ASSERT_EQ(e1.label, e2.label);
    s1 = e1.next;
    s2 = e2.next;
  }
}

TEST(Labels, StaticDynamicAndEmpty) {
  const auto st = ldgba::worlds::preset("grid_phi2_static");
  const auto dy = ldgba::worlds::preset("grid_phi2_dynamic");
  const AtomSet& atoms = st.pomdp.atoms();
  const auto a_cell = st.spec.state_of({0, 9});
  const auto& ls = st.pomdp.label_distribution(a_cell);
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_EQ(ls[0].label, atoms.symbol({"a"}));
  EXPECT_EQ(ls[0].prob, 1.0);
  const auto& ld = dy.pomdp.label_distribution(a_cell);
  ASSERT_EQ(ld.size(), 2u);
  EXPECT_EQ(ld[0].label, atoms.symbol({"a"}));
  EXPECT_DOUBLE_EQ(ld[0].prob, 0.9);
  EXPECT_EQ(ld[1].label, atoms.symbol({"b"}));
  EXPECT_DOUBLE_EQ(ld[1].prob, 0.1);
  const auto& le = st.pomdp.label_distribution(st.spec.state_of({5, 1}));
  ASSERT_EQ(le.size(), 1u);
  EXPECT_TRUE(le[0].label.empty());
  EXPECT_EQ(le[0].prob, 1.0);
}

TEST(Labels, UnlabelledStatesEmitEmptySymbol) {
  const auto w = ldgba::worlds::preset("grid_phi1");
  Rng rng(3);
  const auto s = w.spec.state_of({5, 1});
  for (int i = 0; i < 200; ++i) {
    const EnvStep e = w.pomdp.step(s, 1, rng);
    if (!w.spec.labels.count(w.spec.cell_of(e.next))) {
      EXPECT_TRUE(e.label.empty());
    }
  }
}

TEST(Rng, StreamsAreIndependent) {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) b.uniform(Stream::Exploration);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.uniform(Stream::Transition), b.uniform(Stream::Transition));
  Rng c(6);
  EXPECT_NE(Rng(5).uniform(Stream::Transition), c.uniform(Stream::Transition));
}

TEST(Rng, IndexIsUniform) {
  Rng r(8);
  std::vector<std::size_t> hits(7, 0);
  const std::size_t n = 70000;
  for (std::size_t i = 0; i < n; ++i) ++hits[r.index(Stream::Replay, 7)];
  for (auto h : hits) expect_within_3_sigma(h, n, 1.0 / 7, "index");
}
