#include "elicit/corpus.hpp"
#include "elicit/error.hpp"
#include "elicit/graph.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace elicit {
namespace {

using testing::R;

std::vector<InfoState> states_of(const StateGraph& graph) {
  std::vector<InfoState> states;
  for (const auto& node : graph.nodes()) states.push_back(node.state);
  return states;
}

std::vector<InfoState> end_states(const StateGraph& graph) {
  std::vector<InfoState> states;
  for (auto v : graph.end_nodes()) states.push_back(graph.nodes()[v].state);
  return states;
}

/// Best weight over every root path to the target, by explicit enumeration.
int brute_best(const StateGraph& graph, int rank_bound, const InfoState& target) {
  int best = -1;
  std::vector<InfoState> path{{0, 0}};
  auto walk = [&](auto&& self) -> void {
    const InfoState here = path.back();
    if (!graph.contains(here)) return;
    if (here == target) {
      int weight = 0;
      for (const auto& s : path) weight += rank_weight(graph.node(s), rank_bound);
      best = std::max(best, weight);
      return;
    }
    if (here.approached >= target.approached) return;
    for (int step = 0; step <= 1; ++step) {
      path.push_back({here.approached + 1, here.ones + step});
      self(self);
      path.pop_back();
    }
  };
  walk(walk);
  return best;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++count;
  return count;
}

TEST(Build, ConstantFunctionGivesEmptyGraph) {
  const auto instance = ProblemInstance::create(
      R(1, 2), testing::repeat(R(0), 3), AnonymousFunctionSpec(3, {false, false, false, false}));
  const auto graph = build(instance);
  EXPECT_TRUE(graph.empty());
  EXPECT_TRUE(graph.end_nodes().empty());
}

TEST(Build, ConsensusFour) {
  const auto graph = build(testing::example2());
  EXPECT_EQ(states_of(graph), (std::vector<InfoState>{{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 2}, {3, 0}, {3, 3}}));
  EXPECT_EQ(end_states(graph), (std::vector<InfoState>{{3, 0}, {3, 3}}));
  EXPECT_EQ(graph.edge_count(), 6u);
}

TEST(Build, ParityKeepsEveryStateBelowLastLayer) {
  for (int n = 1; n <= 8; ++n) {
    const auto instance =
        ProblemInstance::create(R(1, 2), testing::repeat(R(1, 10), n), AnonymousFunctionSpec::parity(n));
    const auto graph = build(instance);
    EXPECT_EQ(graph.size(), static_cast<std::size_t>(n * (n + 1) / 2));
    const auto ends = end_states(graph);
    ASSERT_EQ(ends.size(), static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) EXPECT_EQ(ends[static_cast<std::size_t>(k)], (InfoState{n - 1, k}));
  }
}

TEST(MaxCountPath, Example2) {
  const auto graph = build(testing::example2());
  const auto three = max_count_path(graph, 3, {3, 0});
  EXPECT_EQ(three.count, 3);
  EXPECT_EQ(three.path, (std::vector<InfoState>{{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
  EXPECT_EQ(max_count_path(graph, 4, {3, 0}).count, 4);
  EXPECT_EQ(max_count_path(graph, 2, {3, 0}).count, 0);
}

TEST(MaxCountPath, UnknownTarget) {
  const auto graph = build(testing::example2());
  try {
    max_count_path(graph, 3, {2, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TargetNotInGraph);
  }
}

TEST(MaxCountPath, TiesPreferLowerPredecessor) {
  // Parity: every node has weight 1, so every root path ties.
  const auto instance =
      ProblemInstance::create(R(1, 2), testing::repeat(R(0), 4), AnonymousFunctionSpec::parity(4));
  const auto path = max_count_path(build(instance), 4, {3, 2});
  EXPECT_EQ(path.count, 4);
  EXPECT_EQ(path.path, (std::vector<InfoState>{{0, 0}, {1, 0}, {2, 1}, {3, 2}}));
}

TEST(ExportDot, EmptyGraph) {
  const auto instance = ProblemInstance::create(
      R(1, 2), testing::repeat(R(0), 2), AnonymousFunctionSpec(2, {true, true, true}), {}, "flat");
  EXPECT_EQ(export_dot(build(instance)), "// instance: flat\ndigraph G { }\n");
}

TEST(ExportDot, ConsensusFour) {
  const auto dot = export_dot(build(testing::example2()));
  EXPECT_EQ(count_of(dot, "[label="), 7u);
  EXPECT_EQ(count_of(dot, " -> "), 6u);
  EXPECT_EQ(count_of(dot, "peripheries=2"), 2u);
  EXPECT_NE(dot.find("s_3_0 [label=\"(3,0)\\nP=1/1\\nc=4\", peripheries=2]"), std::string::npos);
  EXPECT_NE(dot.find("// instance: example2"), std::string::npos);
}

TEST(ExportDot, ParityThree) {
  const auto instance =
      ProblemInstance::create(R(1, 2), testing::repeat(R(1, 10), 3), AnonymousFunctionSpec::parity(3));
  const auto dot = export_dot(build(instance));
  EXPECT_EQ(count_of(dot, "[label="), 6u);
  EXPECT_EQ(count_of(dot, " -> "), 6u);
  for (const char* name : {"s_0_0", "s_1_0", "s_1_1", "s_2_0", "s_2_1", "s_2_2"}) {
    EXPECT_NE(dot.find(std::string(name) + " [label"), std::string::npos) << name;
  }
}

TEST(ExportDot, UndefinedLabel) {
  const auto dot = export_dot(build(testing::example1()));
  EXPECT_NE(dot.find("s_0_0 [label=\"(0,0)\\nP=63/256\\nc=⊥\"]"), std::string::npos);
  EXPECT_EQ(dot, export_dot(build(testing::example1())));
}

// Structural properties -------------------------------------------------------------

TEST(GraphProperties, EndNodesAndPredecessorClosureOnCorpus) {
  for (const auto& instance : random_corpus({.count = 150, .max_agents = 14, .seed = 31})) {
    const auto graph = build(instance);
    const int n = instance.n();
    EXPECT_LE(graph.size(), static_cast<std::size_t>(n * (n + 1) / 2 + 1));
    if (graph.empty()) {
      EXPECT_TRUE(determine({0, 0}, instance.fn()).has_value());
      continue;
    }
    EXPECT_EQ(graph.nodes().front().state, (InfoState{0, 0}));
    for (std::size_t v = 0; v < graph.size(); ++v) {
      const auto& s = graph.nodes()[v].state;
      EXPECT_FALSE(graph.nodes()[v].determined.has_value());
      if (s.approached > 0) EXPECT_FALSE(graph.predecessors(v).empty()) << to_string(s);
      for (auto w : graph.successors(v)) {
        EXPECT_EQ(graph.nodes()[w].state.approached, s.approached + 1);
      }
    }
    for (auto v : graph.end_nodes()) EXPECT_EQ(graph.nodes()[v].state.approached, n - 1);
    // Every undetermined state is in the graph.
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k <= i; ++k) {
        EXPECT_EQ(graph.contains({i, k}), !determine({i, k}, instance.fn()).has_value());
      }
    }
  }
}

TEST(GraphProperties, CountsGrowWithRankBoundAndWitnessesAreGenuine) {
  for (const auto& instance : random_corpus({.count = 80, .max_agents = 10, .seed = 32})) {
    const auto graph = build(instance);
    for (auto end : graph.end_nodes()) {
      const auto target = graph.nodes()[end].state;
      int previous = 0;
      for (int j = 1; j <= instance.n(); ++j) {
        const auto result = max_count_path(graph, j, target);
        EXPECT_GE(result.count, previous);
        previous = result.count;
        ASSERT_FALSE(result.path.empty());
        EXPECT_EQ(result.path.front(), (InfoState{0, 0}));
        EXPECT_EQ(result.path.back(), target);
        int weight = 0;
        for (std::size_t step = 0; step < result.path.size(); ++step) {
          weight += rank_weight(graph.node(result.path[step]), j);
          if (step == 0) continue;
          const auto& a = result.path[step - 1];
          const auto& b = result.path[step];
          EXPECT_EQ(b.approached, a.approached + 1);
          EXPECT_TRUE(b.ones == a.ones || b.ones == a.ones + 1);
        }
        EXPECT_EQ(weight, result.count);
        EXPECT_EQ(brute_best(graph, j, target), result.count);
      }
    }
  }
}

}  // namespace
}  // namespace elicit
