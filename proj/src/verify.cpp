#include "elicit/verify.hpp"

namespace elicit {

const char* to_string(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::Trivial: return "trivial";
    case VerdictReason::CUndefinedAt: return "c_undefined_at";
    case VerdictReason::PigeonholePath: return "pigeonhole_path";
    case VerdictReason::NoViolation: return "no_violation";
  }
  return "unknown";
}

Verdict exists_appropriate(const ProblemInstance& instance) {
  return exists_appropriate(build(instance));
}

Verdict exists_appropriate(const StateGraph& graph) {
  Verdict verdict;
  if (graph.empty()) {
    verdict.exists = true;
    verdict.reason = VerdictReason::Trivial;
    return verdict;
  }

  for (const auto& node : graph.nodes()) {
    if (node.c_of_v) continue;
    verdict.exists = false;
    verdict.reason = VerdictReason::CUndefinedAt;
    verdict.undefined_at = node.state;
    // Nobody may serve this node: one node against rank bound 0.
    verdict.witness = VerdictWitness{root_path(graph, node.state), 0, 1};
    return verdict;
  }

  const int n = graph.n();
  std::vector<std::vector<int>> counts;
  counts.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) counts.push_back(max_counts(graph, j));

  for (std::size_t end : graph.end_nodes()) {
    for (int j = 1; j <= n; ++j) {
      if (counts[static_cast<std::size_t>(j - 1)][end] <= j) continue;
      auto path = max_count_path(graph, j, graph.nodes()[end].state);
      verdict.exists = false;
      verdict.reason = VerdictReason::PigeonholePath;
      verdict.witness = VerdictWitness{std::move(path.path), j, path.count};
      return verdict;
    }
  }

  verdict.exists = true;
  verdict.reason = VerdictReason::NoViolation;
  return verdict;
}

}  // namespace elicit
