#pragma once

#include "elicit/pivotal.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace elicit {

/// Agents not yet approached, by rank.
class RankSet {
public:
  RankSet() = default;
  static RankSet all(int n);

  bool contains(int rank) const {
    return rank >= 1 && rank < static_cast<int>(bits_.size()) && bits_[static_cast<std::size_t>(rank)];
  }
  void erase(int rank);
  bool empty() const { return count_ == 0; }
  int size() const { return count_; }
  /// Highest member rank that is <= bound.
  std::optional<int> highest_at_most(int bound) const;
  std::vector<int> ranks() const;

private:
  std::vector<bool> bits_;
  int count_ = 0;
};

enum class FailReason { NoEligibleAgent, ChosenIneligible, IncorrectHalt };

const char* to_string(FailReason reason);

struct Approach {
  int rank = 0;
};
struct Halt {
  bool value = false;
};
struct Fail {
  FailReason reason = FailReason::NoEligibleAgent;
};
using Decision = std::variant<Approach, Halt, Fail>;

/// A sequential mechanism (g, f) as a behavioral rule over public histories.
/// Implementations keep no state between calls.
class Policy {
public:
  virtual ~Policy() = default;
  virtual Decision next(const Transcript& transcript, const RankSet& remaining) const = 0;
};

/// One HCF step at an undetermined state: the eligible remaining agent with
/// the highest cost, ties to the highest rank.
Decision hcf_next(const ProblemInstance& instance, const InfoState& state,
                  const RankSet& remaining);

/// High Cost First. By default thresholds are evaluated on-line, only at the
/// states a run actually visits; `tabulated` precomputes every state once,
/// which pays off for full-tree audits.
class HcfPolicy : public Policy {
public:
  explicit HcfPolicy(ProblemInstance instance);
  static HcfPolicy tabulated(ProblemInstance instance);

  Decision next(const Transcript& transcript, const RankSet& remaining) const override;

  /// Number of threshold evaluations done on-line so far.
  std::size_t threshold_evaluations() const { return evaluations_->load(); }

private:
  ProblemInstance instance_;
  std::shared_ptr<const LabelTable> table_;
  std::shared_ptr<std::atomic<std::size_t>> evaluations_;
};

/// Approaches agents in a fixed rank order, halting as soon as G is known.
class FixedOrderPolicy : public Policy {
public:
  /// Ranks 1..n in ascending order when `order` is empty.
  explicit FixedOrderPolicy(ProblemInstance instance, std::vector<int> order = {});

  Decision next(const Transcript& transcript, const RankSet& remaining) const override;

private:
  ProblemInstance instance_;
  std::vector<int> order_;
};

/// An explicit mechanism: a binary tree of ranks over the reply history.
struct MechanismNode {
  int rank = 0;
  std::shared_ptr<const MechanismNode> on_zero;
  std::shared_ptr<const MechanismNode> on_one;
};

/// Follows a MechanismNode tree; halts wherever G is determined and fails
/// where the tree has no node for an undetermined state.
class TreePolicy : public Policy {
public:
  TreePolicy(ProblemInstance instance, std::shared_ptr<const MechanismNode> root);

  Decision next(const Transcript& transcript, const RankSet& remaining) const override;

private:
  ProblemInstance instance_;
  std::shared_ptr<const MechanismNode> root_;
};

struct RunResult {
  Transcript transcript;
  bool output = false;
  InfoState halted_at;
  int approached_count = 0;
  Rational total_cost_incurred;
};

/// Truthful play on the given secrets (indexed by rank - 1). Throws
/// Error(PolicyFailed) if the policy fails.
RunResult run(const ProblemInstance& instance, const Policy& policy,
              const std::vector<bool>& secrets);

/// Draws secrets iid Bernoulli(q) from a seeded mt19937_64 and runs.
RunResult sample_run(const ProblemInstance& instance, const Policy& policy, std::uint64_t seed);
std::vector<bool> sample_secrets(const ProblemInstance& instance, std::uint64_t seed);

struct AuditRecord {
  /// Record of the node this one hangs under, or -1 at the root.
  std::ptrdiff_t parent = -1;
  bool reply_from_parent = false;
  InfoState state;
  int rank = 0;
  Rational cost;
  Rational threshold;
  bool eligible = false;
};

struct AuditFailure {
  InfoState state;
  FailReason reason = FailReason::NoEligibleAgent;
  Transcript transcript;
};

struct AuditReport {
  bool passed = false;
  /// Depth-first, 0-reply subtree before the 1-reply subtree.
  std::vector<AuditRecord> records;
  std::optional<AuditFailure> failure;
  std::size_t leaves = 0;
};

struct AuditOptions {
  int max_agents = 20;
};

/// Expands the whole reply tree under truthful play and checks, at every
/// reached undetermined node, that the chosen agent prefers computing. A pass
/// certifies all-truthful-compute as a computing equilibrium. Stops at the
/// first failure. Throws Error(CapExceeded) above options.max_agents.
AuditReport audit_full_tree(const ProblemInstance& instance, const Policy& policy,
                            const AuditOptions& options = {});

/// The history leading to records[index] (not including its own approach).
Transcript transcript_to(const AuditReport& report, std::size_t index);

struct DeviationOptions {
  /// Condition on this history having been reached, with the deviating agent
  /// approached right after it. Without it the utility is ex-ante.
  std::optional<Transcript> at;
  /// Upper bound on the number of secrets enumerated.
  int max_enumerated = 12;
};

/// Exact expected utility of one agent playing `action` whenever approached,
/// everyone else truthful: P(output = G(secrets)) minus the cost when the
/// action computes and the agent is approached.
Rational deviation_utility(const ProblemInstance& instance, const Policy& policy, int rank,
                           const Action& action, const DeviationOptions& options = {});

}  // namespace elicit
