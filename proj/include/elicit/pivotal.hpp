#pragma once

#include "elicit/model.hpp"

#include <optional>
#include <vector>

namespace elicit {

/// Determined(bit) when every reachable final ones-count yields the same
/// value; nullopt while the value is still open.
using Determination = std::optional<bool>;

/// Everything the incentive analysis needs to know about one state.
struct NodeLabel {
  InfoState state;
  Determination determined;
  /// P(Z | v): probability that the next approached agent flips G, given
  /// truthful replies from all others.
  Rational pivotal_prob;
  /// (1 - q) * P(Z | v). An agent computes iff its cost is at most this.
  Rational threshold;
  /// Largest 1-based cost rank that is still willing to compute; nullopt if
  /// even the cheapest agent is not.
  std::optional<int> c_of_v;
};

bool is_valid(const InfoState& state, int n);

Determination determine(const InfoState& state, const AnonymousFunctionSpec& fn);

/// Binomial-sum evaluation. Throws Error(StateExhausted) when i = n.
Rational pivotal_prob(const InfoState& state, const ProblemInstance& instance);

Rational threshold(const InfoState& state, const ProblemInstance& instance);

/// Largest rank whose cost does not exceed the given threshold.
std::optional<int> c_of(const Rational& threshold, const std::vector<Rational>& sorted_costs);
std::optional<int> c_of(const InfoState& state, const ProblemInstance& instance);

NodeLabel label(const InfoState& state, const ProblemInstance& instance);

/// Labels of every state (i, k) with i < n, indexed [i][k]. Shares one
/// binomial table across states.
class LabelTable {
public:
  explicit LabelTable(const ProblemInstance& instance);

  const NodeLabel& at(const InfoState& state) const;
  int n() const { return n_; }

private:
  int n_;
  std::vector<std::vector<NodeLabel>> rows_;
};

}  // namespace elicit
