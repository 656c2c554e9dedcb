#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "ldgba/worlds/presets.hpp"

using namespace ldgba::worlds;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridSpec open_grid(int n) {
  GridSpec g;
  g.name = "open";
  g.width = g.height = n;
  g.atoms = {"a"};
  g.task = "go_to_goal";
  return g;
}

}  // namespace

TEST(BuildGrid, CornerIntoWallStays) {
  const GridSpec g = open_grid(5);
  const PlPomdp m = build_grid(g);
  // up from the top-left corner: intended and left slip both bounce
  EXPECT_DOUBLE_EQ(m.transition_prob(g.state_of({0, 0}), 0, g.state_of({0, 0})), 0.95);
  EXPECT_DOUBLE_EQ(m.transition_prob(g.state_of({0, 0}), 0, g.state_of({1, 0})), 0.05);
}

TEST(BuildGrid, BlockedCellBounces) {
  const auto w = preset("go_to_goal_10x10");
  const auto& g = w.spec;
  // (2,3) moving right runs into the wall at (3,3)
  EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(g.state_of({2, 3}), 3, g.state_of({2, 3})), 0.9);
}

TEST(BuildGrid, BoundaryObservationRenormalised) {
  const GridSpec g = open_grid(5);
  const PlPomdp m = build_grid(g);
  const auto& row = m.observations(g.state_of({0, 0}), 0);
  ASSERT_EQ(row.size(), 3u);
  for (const auto& o : row) EXPECT_DOUBLE_EQ(o.prob, o.index == g.state_of({0, 0}) ? 0.9 : 0.05);
}

TEST(BuildGrid, PresetSizes) {
  for (const char* name : {"go_to_goal_10x10", "grid_phi1", "grid_phi2_static", "grid_phi2_dynamic"})
    EXPECT_EQ(preset(name).pomdp.state_count(), 100u) << name;
  EXPECT_EQ(preset("warehouse_2agent").pomdp.state_count(), 64u);
  EXPECT_EQ(preset("warehouse_2agent").pomdp.action_count(), 5u);
  EXPECT_EQ(preset("office_full_obs").pomdp.state_count(), 16u);
}

TEST(BuildGrid, TrapsAbsorb) {
  for (const auto& name : preset_names()) {
    const auto w = preset(name);
    for (Cell c : w.spec.traps)
      for (std::uint32_t a = 0; a < w.pomdp.action_count(); ++a)
        EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(w.spec.state_of(c), a, w.spec.state_of(c)), 1.0) << name;
  }
}

TEST(BuildGrid, RotationSymmetryOfNoise) {
  const int n = 5;
  const GridSpec g = open_grid(n);
  const PlPomdp m = build_grid(g);
  auto rot = [&](Cell c) { return Cell{n - 1 - c.y, c.x}; };  // quarter turn clockwise
  for (int y = 1; y < n - 1; ++y)
    for (int x = 1; x < n - 1; ++x)
      for (std::uint32_t a = 0; a < 4; ++a)
        for (const auto& o : m.transitions(g.state_of({x, y}), a)) {
          const Cell to = g.cell_of(o.next);
          EXPECT_DOUBLE_EQ(m.transition_prob(g.state_of(rot({x, y})), (a + 3) % 4, g.state_of(rot(to))), o.prob);
        }
}

TEST(BuildGrid, StayActionIsDeterministic) {
  const auto w = preset("warehouse_2agent");
  for (std::uint32_t s = 0; s < w.pomdp.state_count(); ++s) EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(s, 4, s), 1.0);
}

TEST(Office, FullObservationHasThirteenSymbols) {
  const auto w = preset("office_full_obs");
  EXPECT_EQ(w.pomdp.observation_count(), 13u);
  const auto& g = w.spec;
  for (std::uint32_t s = 0; s < 16; ++s) {
    const auto& row = w.pomdp.observations(s, 0);
    ASSERT_EQ(row.size(), 1u);
    EXPECT_EQ(row[0].prob, 1.0);
  }
  EXPECT_EQ(w.pomdp.observations(g.state_of({0, 2}), 0)[0].index, w.pomdp.observations(g.state_of({0, 3}), 0)[0].index);
  EXPECT_EQ(w.pomdp.observation_names()[w.pomdp.observations(g.state_of({0, 2}), 0)[0].index], "wall/wall/wall/door");
}

TEST(Office, SingleObservationRows) {
  const auto w = preset("office_single_obs");
  const auto& names = w.pomdp.observation_names();
  EXPECT_EQ(names, (std::vector<std::string>{"hallway", "wall", "door", "window", "table", "paint", "flower"}));
  auto row_of = [&](Cell c) {
    std::map<std::string, double> r;
    for (const auto& o : w.pomdp.observations(w.spec.state_of(c), 0)) r[names[o.index]] = o.prob;
    return r;
  };
  const std::map<std::string, double> expected_b = {{"wall", 0.5}, {"table", 0.25}, {"door", 0.25}};
  EXPECT_EQ(row_of({0, 2}), expected_b);
  EXPECT_EQ(row_of({0, 3}), expected_b);
  EXPECT_EQ(row_of({3, 3}), (std::map<std::string, double>{{"wall", 1.0}}));
  for (std::uint32_t s = 0; s < 16; ++s) EXPECT_LE(w.pomdp.observations(s, 0).size(), 4u);
}

TEST(Office, DoorsGateMovement) {
  const auto w = preset("office_full_obs");
  const auto& g = w.spec;
  // office b opens east only; moving up from b bounces
  EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(g.state_of({0, 2}), 0, g.state_of({0, 2})), 0.9 + 0.1 / 3 * 2);
  EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(g.state_of({0, 2}), 3, g.state_of({1, 2})), 0.9);
  // storage is reachable from the hallway below office d
  EXPECT_DOUBLE_EQ(w.pomdp.transition_prob(g.state_of({3, 1}), 2, g.state_of({3, 2})), 0.9);
}

TEST(Presets, DynamicLabels) {
  const auto g = preset_spec("grid_phi2_dynamic");
  const auto& a = g.labels.at({0, 8});
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].atoms, std::vector<std::string>{"a"});
  EXPECT_DOUBLE_EQ(a[0].prob, 0.9);
  EXPECT_EQ(a[1].atoms, std::vector<std::string>{"b"});
  EXPECT_DOUBLE_EQ(a[1].prob, 0.1);
}

TEST(Presets, UnknownName) { EXPECT_THROW(preset_spec("mars"), std::invalid_argument); }

TEST(Presets, TaskAutomataMatchRegistry) {
  EXPECT_EQ(preset("grid_phi1").automaton, ldgba::translate::task_automaton("grid_phi1"));
  EXPECT_EQ(preset("warehouse_2agent").automaton, ldgba::translate::task_automaton("warehouse_phi"));
  EXPECT_EQ(preset("warehouse_2agent").spec.agent_count(), 2u);
}

TEST(EnvFile, PresetRoundTrip) {
  for (const auto& name : preset_names()) {
    const GridSpec g = preset_spec(name);
    const std::string text = save_env(g);
    EXPECT_EQ(parse_env(text), g) << name;
    EXPECT_EQ(save_env(parse_env(text)), text) << name;
  }
}

TEST(EnvFile, ShippedFilesAreCanonical) {
  for (const auto& name : preset_names()) {
    const std::string path = std::string(LDGBA_SOURCE_DIR) + "/envs/" + name + ".env";
    const std::string text = read_file(path);
    ASSERT_FALSE(text.empty()) << path;
    const GridSpec g = parse_env(text);
    EXPECT_EQ(save_env(g), text) << name;
    EXPECT_EQ(g, preset_spec(name)) << name;
  }
}

TEST(EnvFile, BlockedAndLabelledCellNamed) {
  const std::string text =
      "[grid]\nname = x\nwidth = 3\nheight = 3\natoms = a\ntask = go_to_goal\n\n[blocked]\ncells = 1,1\n\n[labels]\n1,1 = {a}\n";
  try {
    parse_env(text);
    FAIL();
  } catch (const EnvError& e) {
    EXPECT_NE(std::string(e.what()).find("cell 1,1 is both blocked and labelled"), std::string::npos) << e.what();
  }
}

TEST(EnvFile, UnknownKeyRejectedWithLine) {
  try {
    parse_env("[grid]\nname = x\nwidth = 3\nheight = 3\ncolour = red\n");
    FAIL();
  } catch (const EnvError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  try {
    parse_env("[grid]\nname = x\nwidth = 3\nheight = 3\natoms = a\ntask = go_to_goal\n[train]\nbatchsize = 3\n");
    FAIL();
  } catch (const EnvError& e) {
    EXPECT_EQ(e.line(), 8u);
  }
}

TEST(EnvFile, EmptyLabelSectionMeansEmptyLabels) {
  const GridSpec g = parse_env("[grid]\nname = x\nwidth = 3\nheight = 2\natoms = b\ntask = go_to_goal\n");
  const PlPomdp m = build_grid(g);
  for (std::uint32_t s = 0; s < 6; ++s) {
    ASSERT_EQ(m.label_distribution(s).size(), 1u);
    EXPECT_TRUE(m.label_distribution(s)[0].label.empty());
  }
}

TEST(EnvFile, LabelProbabilitiesMustSumToOne) {
  EXPECT_THROW(parse_env("[grid]\nname = x\nwidth = 3\nheight = 2\natoms = a,b\ntask = go_to_goal\n\n[labels]\n0,0 = "
                         "{a}:0.5 {b}:0.4\n"),
               EnvError);
}
