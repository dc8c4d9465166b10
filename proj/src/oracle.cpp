#include "elicit/oracle.hpp"

#include "elicit/error.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <map>

namespace elicit {

namespace {

void require_enumerable(int count, int cap) {
  if (count > cap) {
    throw Error(ErrorCode::CapExceeded, "enumeration of " + std::to_string(count) +
                                            " secrets exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

Determination brute_determine(const InfoState& state, const AnonymousFunctionSpec& fn) {
  const int open = fn.n() - state.approached;
  require_enumerable(open, 24);
  const bool first = fn(state.ones);
  const std::uint64_t total = std::uint64_t{1} << open;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (fn(state.ones + std::popcount(mask)) != first) return std::nullopt;
  }
  return first;
}

Rational brute_pivotal(const InfoState& state, const ProblemInstance& instance,
                       int max_enumerated) {
  const int n = instance.n();
  if (state.approached >= n) {
    throw Error(ErrorCode::StateExhausted, "no agent left at " + to_string(state));
  }
  const int others = n - state.approached - 1;
  require_enumerable(others, max_enumerated);

  // Secret vector layout: [reported ones | reported zeros | approached agent | others].
  const auto& fn = instance.fn();
  std::vector<long> flips(static_cast<std::size_t>(others) + 1, 0);
  std::vector<bool> secrets(static_cast<std::size_t>(n), false);
  for (int j = 0; j < state.ones; ++j) secrets[static_cast<std::size_t>(j)] = true;
  const auto agent = static_cast<std::size_t>(state.approached);
  const std::uint64_t total = std::uint64_t{1} << others;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int b = 0; b < others; ++b) secrets[agent + 1 + static_cast<std::size_t>(b)] = (mask >> b) & 1u;
    auto evaluate = [&] {
      int ones = 0;
      for (bool s : secrets) ones += s ? 1 : 0;
      return fn(ones);
    };
    secrets[agent] = false;
    const bool with_zero = evaluate();
    secrets[agent] = true;
    const bool with_one = evaluate();
    if (with_zero != with_one) ++flips[static_cast<std::size_t>(std::popcount(mask))];
  }

  Rational total_weight(0);
  for (int m = 0; m <= others; ++m) {
    if (flips[static_cast<std::size_t>(m)] == 0) continue;
    total_weight += Rational(flips[static_cast<std::size_t>(m)]) *
                    power(instance.q(), static_cast<unsigned>(m)) *
                    power(1 - instance.q(), static_cast<unsigned>(others - m));
  }
  return total_weight;
}

namespace {

using NodePtr = std::shared_ptr<const MechanismNode>;

class MechanismEnumerator {
public:
  explicit MechanismEnumerator(const ProblemInstance& instance) : instance_(instance) {}

  /// Every earliest-halting subtree below the history. nullptr stands for a
  /// halt at a determined state.
  std::vector<NodePtr> subtrees(const Transcript& history, const RankSet& remaining) {
    const InfoState state = history.state();
    if (brute_determine(state, instance_.fn())) return {nullptr};
    std::vector<NodePtr> result;
    for (int rank : remaining.ranks()) {
      RankSet rest = remaining;
      rest.erase(rank);
      Transcript zero = history;
      zero.append(rank, false);
      Transcript one = history;
      one.append(rank, true);
      const auto on_zero = subtrees(zero, rest);
      const auto on_one = subtrees(one, rest);
      for (const auto& a : on_zero) {
        for (const auto& b : on_one) {
          result.push_back(std::make_shared<const MechanismNode>(MechanismNode{rank, a, b}));
        }
      }
    }
    return result;
  }

  /// Every reached undetermined node's agent prefers computing.
  bool passes(const MechanismNode* node, const Transcript& history) {
    const InfoState state = history.state();
    if (brute_determine(state, instance_.fn())) return true;
    if (node == nullptr) return false;
    if (instance_.cost(node->rank) > threshold(state)) return false;
    Transcript zero = history;
    zero.append(node->rank, false);
    if (!passes(node->on_zero.get(), zero)) return false;
    Transcript one = history;
    one.append(node->rank, true);
    return passes(node->on_one.get(), one);
  }

private:
  const Rational& threshold(const InfoState& state) {
    auto it = thresholds_.find(state);
    if (it == thresholds_.end()) {
      it = thresholds_.emplace(state, (1 - instance_.q()) * brute_pivotal(state, instance_)).first;
    }
    return it->second;
  }

  const ProblemInstance& instance_;
  std::map<InfoState, Rational> thresholds_;
};

NodePtr tree_from_audit(const AuditReport& report) {
  if (report.records.empty()) return nullptr;
  std::vector<std::array<std::ptrdiff_t, 2>> children(report.records.size(), {-1, -1});
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    const auto& record = report.records[i];
    children[static_cast<std::size_t>(record.parent)][record.reply_from_parent ? 1 : 0] =
        static_cast<std::ptrdiff_t>(i);
  }
  // Children always follow their parent, so build back to front.
  std::vector<NodePtr> built(report.records.size());
  for (std::size_t i = report.records.size(); i-- > 0;) {
    auto child = [&](int bit) -> NodePtr {
      const auto index = children[i][static_cast<std::size_t>(bit)];
      return index < 0 ? nullptr : built[static_cast<std::size_t>(index)];
    };
    built[i] = std::make_shared<const MechanismNode>(
        MechanismNode{report.records[i].rank, child(0), child(1)});
  }
  return built.front();
}

}  // namespace

OracleVerdict exhaustive_existence(const ProblemInstance& instance, int max_agents) {
  if (instance.n() > max_agents) {
    throw Error(ErrorCode::CapExceeded, "mechanism enumeration capped at n = " +
                                            std::to_string(max_agents));
  }
  MechanismEnumerator enumerator(instance);
  const Transcript empty;
  OracleVerdict verdict;
  for (const auto& mechanism : enumerator.subtrees(empty, RankSet::all(instance.n()))) {
    ++verdict.mechanisms_checked;
    if (enumerator.passes(mechanism.get(), empty)) {
      verdict.exists = true;
      verdict.certificate = mechanism;
      break;
    }
  }
  return verdict;
}

OracleVerdict hcf_tree_existence(const ProblemInstance& instance, int max_agents) {
  const auto report =
      audit_full_tree(instance, HcfPolicy::tabulated(instance), AuditOptions{max_agents});
  OracleVerdict verdict;
  verdict.exists = report.passed;
  verdict.mechanisms_checked = 1;
  if (report.passed) verdict.certificate = tree_from_audit(report);
  return verdict;
}

}  // namespace elicit
