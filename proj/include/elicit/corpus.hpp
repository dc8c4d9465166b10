#pragma once

#include "elicit/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace elicit {

/// Random instances for cross-checking: each ones-count maps to 1 by a fair
/// coin (constants are kept), costs are k/64 with k uniform in
/// 0..max_cost_64ths, q is drawn from `qs`.
struct CorpusOptions {
  std::size_t count = 200;
  int min_agents = 1;
  int max_agents = 10;
  std::vector<Rational> qs = {Rational(1, 2), Rational(3, 5), Rational(3, 4)};
  std::uint64_t seed = 0;
  int max_cost_64ths = 63;
};

ProblemInstance random_instance(std::mt19937_64& rng, int n, const Rational& q,
                                std::string name = {}, int max_cost_64ths = 63);

std::vector<ProblemInstance> random_corpus(const CorpusOptions& options);

}  // namespace elicit
