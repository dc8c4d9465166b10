#include "elicit/corpus.hpp"

namespace elicit {

ProblemInstance random_instance(std::mt19937_64& rng, int n, const Rational& q,
                                std::string name, int max_cost_64ths) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> sixty_fourths(0, max_cost_64ths);
  std::vector<bool> table;
  for (int w = 0; w <= n; ++w) table.push_back(coin(rng));
  std::vector<Rational> costs;
  for (int j = 0; j < n; ++j) costs.emplace_back(sixty_fourths(rng), 64);
  for (auto& c : costs) c.canonicalize();
  return ProblemInstance::create(q, std::move(costs), AnonymousFunctionSpec(n, std::move(table)),
                                 {}, std::move(name));
}

std::vector<ProblemInstance> random_corpus(const CorpusOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> agents(options.min_agents, options.max_agents);
  std::uniform_int_distribution<std::size_t> pick_q(0, options.qs.size() - 1);
  std::vector<ProblemInstance> corpus;
  corpus.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    const int n = agents(rng);
    const auto& q = options.qs[pick_q(rng)];
    corpus.push_back(random_instance(rng, n, q,
                                     "corpus-" + std::to_string(options.seed) + "-" + std::to_string(i),
                                     options.max_cost_64ths));
  }
  return corpus;
}

}  // namespace elicit
