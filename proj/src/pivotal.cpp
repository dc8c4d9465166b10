#include "elicit/pivotal.hpp"

#include "elicit/error.hpp"

#include <algorithm>

namespace elicit {

namespace {

void require_valid(const InfoState& state, int n) {
  if (!is_valid(state, n)) {
    throw Error(ErrorCode::InvalidArgument,
                "invalid state " + to_string(state) + " for n = " + std::to_string(n));
  }
}

/// Row `others` of Pascal's triangle.
std::vector<Integer> binomial_row(int others) {
  std::vector<Integer> row(static_cast<std::size_t>(others) + 1, Integer(1));
  for (int m = 1; m < others; ++m) {
    row[static_cast<std::size_t>(m)] =
        row[static_cast<std::size_t>(m - 1)] * (others - m + 1) / m;
  }
  return row;
}

Rational pivotal_sum(const InfoState& state, const ProblemInstance& instance,
                     const std::vector<Rational>& q_pow, const std::vector<Rational>& p_pow,
                     const std::vector<Integer>& row) {
  const auto& fn = instance.fn();
  const int others = instance.n() - state.approached - 1;
  Rational total(0);
  for (int m = 0; m <= others; ++m) {
    if (fn(state.ones + m) != fn(state.ones + m + 1)) {
      total += Rational(row[static_cast<std::size_t>(m)]) * q_pow[static_cast<std::size_t>(m)] *
               p_pow[static_cast<std::size_t>(others - m)];
    }
  }
  return total;
}

std::vector<Rational> powers(const Rational& base, int count) {
  std::vector<Rational> result(static_cast<std::size_t>(count) + 1);
  result[0] = 1;
  for (int e = 1; e <= count; ++e) {
    result[static_cast<std::size_t>(e)] = result[static_cast<std::size_t>(e - 1)] * base;
  }
  return result;
}

}  // namespace

bool is_valid(const InfoState& state, int n) {
  return 0 <= state.ones && state.ones <= state.approached && state.approached <= n;
}

Determination determine(const InfoState& state, const AnonymousFunctionSpec& fn) {
  require_valid(state, fn.n());
  const int remaining = fn.n() - state.approached;
  const bool first = fn(state.ones);
  for (int w = state.ones + 1; w <= state.ones + remaining; ++w) {
    if (fn(w) != first) return std::nullopt;
  }
  return first;
}

Rational pivotal_prob(const InfoState& state, const ProblemInstance& instance) {
  require_valid(state, instance.n());
  if (state.approached == instance.n()) {
    throw Error(ErrorCode::StateExhausted,
                "state " + to_string(state) + " has no agent left to approach");
  }
  const int others = instance.n() - state.approached - 1;
  return pivotal_sum(state, instance, powers(instance.q(), others),
                     powers(1 - instance.q(), others), binomial_row(others));
}

Rational threshold(const InfoState& state, const ProblemInstance& instance) {
  return (1 - instance.q()) * pivotal_prob(state, instance);
}

std::optional<int> c_of(const Rational& threshold, const std::vector<Rational>& sorted_costs) {
  const auto end = std::upper_bound(sorted_costs.begin(), sorted_costs.end(), threshold);
  const auto rank = static_cast<int>(end - sorted_costs.begin());
  if (rank == 0) return std::nullopt;
  return rank;
}

std::optional<int> c_of(const InfoState& state, const ProblemInstance& instance) {
  return c_of(threshold(state, instance), instance.costs());
}

NodeLabel label(const InfoState& state, const ProblemInstance& instance) {
  NodeLabel result;
  result.state = state;
  result.determined = determine(state, instance.fn());
  result.pivotal_prob = pivotal_prob(state, instance);
  result.threshold = (1 - instance.q()) * result.pivotal_prob;
  result.c_of_v = c_of(result.threshold, instance.costs());
  return result;
}

LabelTable::LabelTable(const ProblemInstance& instance) : n_(instance.n()) {
  const auto q_pow = powers(instance.q(), n_);
  const auto p_pow = powers(1 - instance.q(), n_);
  const Rational complement = 1 - instance.q();
  rows_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    const auto row = binomial_row(n_ - i - 1);
    auto& labels = rows_[static_cast<std::size_t>(i)];
    for (int k = 0; k <= i; ++k) {
      NodeLabel node;
      node.state = {i, k};
      node.determined = determine(node.state, instance.fn());
      node.pivotal_prob = pivotal_sum(node.state, instance, q_pow, p_pow, row);
      node.threshold = complement * node.pivotal_prob;
      node.c_of_v = c_of(node.threshold, instance.costs());
      labels.push_back(std::move(node));
    }
  }
}

const NodeLabel& LabelTable::at(const InfoState& state) const {
  if (!is_valid(state, n_) || state.approached >= n_) {
    throw Error(ErrorCode::StateExhausted, "no label for state " + to_string(state));
  }
  return rows_[static_cast<std::size_t>(state.approached)][static_cast<std::size_t>(state.ones)];
}

}  // namespace elicit
