#include "elicit/corpus.hpp"
#include "elicit/verify.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace elicit {
namespace {

using testing::R;

TEST(Verify, Example1HasNoAgentAtTheRoot) {
  const auto verdict = exists_appropriate(testing::example1());
  EXPECT_FALSE(verdict.exists);
  EXPECT_EQ(verdict.reason, VerdictReason::CUndefinedAt);
  EXPECT_EQ(verdict.undefined_at, (InfoState{0, 0}));
  ASSERT_TRUE(verdict.witness);
  EXPECT_EQ(verdict.witness->path, (std::vector<InfoState>{{0, 0}}));
  EXPECT_EQ(verdict.witness->violating_rank, 0);
  EXPECT_EQ(verdict.witness->count, 1);
}

TEST(Verify, Example2Exists) {
  const auto verdict = exists_appropriate(testing::example2());
  EXPECT_TRUE(verdict.exists);
  EXPECT_EQ(verdict.reason, VerdictReason::NoViolation);
  EXPECT_FALSE(verdict.witness);
}

TEST(Verify, Example3Exists) {
  EXPECT_TRUE(exists_appropriate(testing::example3()).exists);
}

TEST(Verify, CostlyConsensusFails) {
  const auto verdict = exists_appropriate(testing::costly_consensus());
  EXPECT_FALSE(verdict.exists);
  EXPECT_EQ(verdict.reason, VerdictReason::CUndefinedAt);
}

TEST(Verify, ConstantFunctionIsTrivial) {
  const auto instance = ProblemInstance::create(R(3, 4), testing::repeat(R(1, 2), 3),
                                                AnonymousFunctionSpec(3, {true, true, true, true}));
  const auto verdict = exists_appropriate(instance);
  EXPECT_TRUE(verdict.exists);
  EXPECT_EQ(verdict.reason, VerdictReason::Trivial);
  EXPECT_FALSE(verdict.witness);
}

TEST(Verify, PigeonholeWitness) {
  // Consensus over 4: layers 0-2 need cost <= 1/4 but only two agents have it.
  const auto instance = ProblemInstance::create(R(1, 2), {R(0), R(0), R(3, 10), R(3, 10)},
                                                AnonymousFunctionSpec::consensus(4));
  const auto verdict = exists_appropriate(instance);
  EXPECT_FALSE(verdict.exists);
  EXPECT_EQ(verdict.reason, VerdictReason::PigeonholePath);
  ASSERT_TRUE(verdict.witness);
  EXPECT_EQ(verdict.witness->violating_rank, 2);
  EXPECT_EQ(verdict.witness->count, 3);
  EXPECT_EQ(verdict.witness->path, (std::vector<InfoState>{{0, 0}, {1, 0}, {2, 0}, {3, 0}}));
}

TEST(Verify, SingleAgent) {
  const auto ok = ProblemInstance::create(R(1, 2), {R(1, 4)}, AnonymousFunctionSpec::unanimity(1));
  EXPECT_TRUE(exists_appropriate(ok).exists);
  const auto boundary = ProblemInstance::create(R(1, 2), {R(1, 2)}, AnonymousFunctionSpec::unanimity(1));
  EXPECT_TRUE(exists_appropriate(boundary).exists);  // weak inequality
  const auto costly = ProblemInstance::create(R(1, 2), {R(3, 5)}, AnonymousFunctionSpec::unanimity(1));
  EXPECT_FALSE(exists_appropriate(costly).exists);
  const auto at_threshold =
      ProblemInstance::create(R(3, 5), {R(2, 5)}, AnonymousFunctionSpec::unanimity(1));
  EXPECT_TRUE(exists_appropriate(at_threshold).exists);  // c = (1 - q) exactly
}

TEST(VerifyProperties, WitnessInvariants) {
  for (const auto& instance : random_corpus({.count = 200, .max_agents = 10, .seed = 41})) {
    const auto graph = build(instance);
    const auto verdict = exists_appropriate(graph);
    EXPECT_EQ(verdict.witness.has_value(), !verdict.exists);
    if (verdict.reason == VerdictReason::Trivial) EXPECT_TRUE(graph.empty());
    if (verdict.reason == VerdictReason::CUndefinedAt) {
      ASSERT_TRUE(graph.contains(*verdict.undefined_at));
      EXPECT_FALSE(graph.node(*verdict.undefined_at).c_of_v.has_value());
    }
    if (verdict.reason == VerdictReason::PigeonholePath) {
      const auto& w = *verdict.witness;
      int counted = 0;
      for (const auto& s : w.path) counted += rank_weight(graph.node(s), w.violating_rank);
      EXPECT_EQ(counted, w.count);
      EXPECT_GT(w.count, w.violating_rank);
      EXPECT_EQ(w.path.back().approached, instance.n() - 1);
    }
  }
}

TEST(VerifyProperties, PermutingAgentsKeepsVerdicts) {
  std::mt19937_64 rng(42);
  for (const auto& instance : random_corpus({.count = 100, .max_agents = 9, .seed = 43})) {
    auto costs = instance.costs_in_input_order();
    std::shuffle(costs.begin(), costs.end(), rng);
    const auto shuffled = ProblemInstance::create(instance.q(), costs, instance.fn());
    EXPECT_EQ(shuffled.costs(), instance.costs());
    const auto a = exists_appropriate(instance);
    const auto b = exists_appropriate(shuffled);
    EXPECT_EQ(a.exists, b.exists);
    EXPECT_EQ(a.reason, b.reason);
  }
}

TEST(VerifyProperties, LoweringACostNeverBreaksExistence) {
  std::mt19937_64 rng(44);
  for (const auto& instance : random_corpus({.count = 200, .max_agents = 9, .seed = 45})) {
    auto costs = instance.costs_in_input_order();
    const auto j = std::uniform_int_distribution<std::size_t>(0, costs.size() - 1)(rng);
    costs[j] = costs[j] * R(std::uniform_int_distribution<int>(0, 3)(rng), 4);
    const auto cheaper = ProblemInstance::create(instance.q(), costs, instance.fn());
    if (exists_appropriate(instance).exists) EXPECT_TRUE(exists_appropriate(cheaper).exists);
  }
}

}  // namespace
}  // namespace elicit
