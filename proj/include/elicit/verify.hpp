#pragma once

#include "elicit/graph.hpp"

#include <optional>
#include <vector>

namespace elicit {

enum class VerdictReason {
  /// Constant function: the empty mechanism already knows the value.
  Trivial,
  /// Some reachable undetermined state has no agent willing to compute.
  CUndefinedAt,
  /// Some root-to-end path holds more than j nodes that only ranks <= j serve.
  PigeonholePath,
  /// No violation found; an appropriate mechanism exists.
  NoViolation,
};

const char* to_string(VerdictReason reason);

struct VerdictWitness {
  std::vector<InfoState> path;
  int violating_rank = 0;
  int count = 0;
};

struct Verdict {
  bool exists = false;
  VerdictReason reason = VerdictReason::Trivial;
  /// The state named by CUndefinedAt.
  std::optional<InfoState> undefined_at;
  /// Present iff exists is false.
  std::optional<VerdictWitness> witness;
};

/// Decides whether a q-appropriate sequential mechanism exists. Runs in
/// O(n^4): every end-node against every rank bound over an O(n^2) DAG.
Verdict exists_appropriate(const ProblemInstance& instance);
Verdict exists_appropriate(const StateGraph& graph);

}  // namespace elicit
