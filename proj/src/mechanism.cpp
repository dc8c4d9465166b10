#include "elicit/mechanism.hpp"

#include "elicit/error.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace elicit {

// RankSet ----------------------------------------------------------------------

RankSet RankSet::all(int n) {
  RankSet set;
  set.bits_.assign(static_cast<std::size_t>(n) + 1, true);
  set.bits_[0] = false;
  set.count_ = n;
  return set;
}

void RankSet::erase(int rank) {
  if (!contains(rank)) return;
  bits_[static_cast<std::size_t>(rank)] = false;
  --count_;
}

std::optional<int> RankSet::highest_at_most(int bound) const {
  for (int r = std::min(bound, static_cast<int>(bits_.size()) - 1); r >= 1; --r) {
    if (bits_[static_cast<std::size_t>(r)]) return r;
  }
  return std::nullopt;
}

std::vector<int> RankSet::ranks() const {
  std::vector<int> result;
  for (std::size_t r = 1; r < bits_.size(); ++r) {
    if (bits_[r]) result.push_back(static_cast<int>(r));
  }
  return result;
}

const char* to_string(FailReason reason) {
  switch (reason) {
    case FailReason::NoEligibleAgent: return "NoEligibleAgent";
    case FailReason::ChosenIneligible: return "ChosenIneligible";
    case FailReason::IncorrectHalt: return "IncorrectHalt";
  }
  return "Unknown";
}

// Policies -----------------------------------------------------------------------

namespace {

Decision pick_at_most(const std::optional<int>& c_of_v, const RankSet& remaining) {
  if (!c_of_v) return Fail{FailReason::NoEligibleAgent};
  if (auto rank = remaining.highest_at_most(*c_of_v)) return Approach{*rank};
  return Fail{FailReason::NoEligibleAgent};
}

}  // namespace

Decision hcf_next(const ProblemInstance& instance, const InfoState& state,
                  const RankSet& remaining) {
  // Costs ascend with rank, so the highest eligible rank carries the highest
  // cost and wins cost ties.
  return pick_at_most(c_of(state, instance), remaining);
}

HcfPolicy::HcfPolicy(ProblemInstance instance)
    : instance_(std::move(instance)),
      evaluations_(std::make_shared<std::atomic<std::size_t>>(0)) {}

HcfPolicy HcfPolicy::tabulated(ProblemInstance instance) {
  HcfPolicy policy(std::move(instance));
  policy.table_ = std::make_shared<const LabelTable>(policy.instance_);
  return policy;
}

Decision HcfPolicy::next(const Transcript& transcript, const RankSet& remaining) const {
  const InfoState state = transcript.state();
  if (auto value = determine(state, instance_.fn())) return Halt{*value};
  if (table_) return pick_at_most(table_->at(state).c_of_v, remaining);
  evaluations_->fetch_add(1);
  return hcf_next(instance_, state, remaining);
}

FixedOrderPolicy::FixedOrderPolicy(ProblemInstance instance, std::vector<int> order)
    : instance_(std::move(instance)), order_(std::move(order)) {
  if (order_.empty()) {
    for (int r = 1; r <= instance_.n(); ++r) order_.push_back(r);
  }
  auto sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  for (int r = 1; r <= instance_.n(); ++r) {
    if (sorted.size() != static_cast<std::size_t>(instance_.n()) ||
        sorted[static_cast<std::size_t>(r - 1)] != r) {
      throw Error(ErrorCode::InvalidArgument, "fixed order must be a permutation of the ranks");
    }
  }
}

Decision FixedOrderPolicy::next(const Transcript& transcript, const RankSet& remaining) const {
  if (auto value = determine(transcript.state(), instance_.fn())) return Halt{*value};
  for (int rank : order_) {
    if (remaining.contains(rank)) return Approach{rank};
  }
  return Fail{FailReason::NoEligibleAgent};
}

TreePolicy::TreePolicy(ProblemInstance instance, std::shared_ptr<const MechanismNode> root)
    : instance_(std::move(instance)), root_(std::move(root)) {}

Decision TreePolicy::next(const Transcript& transcript, const RankSet& /*remaining*/) const {
  if (auto value = determine(transcript.state(), instance_.fn())) return Halt{*value};
  const MechanismNode* node = root_.get();
  for (const auto& entry : transcript.entries()) {
    if (node == nullptr) break;
    node = (entry.reply ? node->on_one : node->on_zero).get();
  }
  if (node == nullptr) return Fail{FailReason::NoEligibleAgent};
  return Approach{node->rank};
}

// Execution ----------------------------------------------------------------------

namespace {

struct Replayed {
  Transcript transcript;
  bool output = false;
};

/// Drives the policy to a halt, asking `reply(rank)` for each approached
/// agent's report.
template <typename ReplyFn>
Replayed replay(const ProblemInstance& instance, const Policy& policy, ReplyFn&& reply) {
  Replayed result;
  RankSet remaining = RankSet::all(instance.n());
  for (;;) {
    const Decision decision = policy.next(result.transcript, remaining);
    if (const auto* halt = std::get_if<Halt>(&decision)) {
      result.output = halt->value;
      return result;
    }
    if (const auto* fail = std::get_if<Fail>(&decision)) {
      throw Error(ErrorCode::PolicyFailed, std::string(to_string(fail->reason)) + " at state " +
                                               to_string(result.transcript.state()));
    }
    const int rank = std::get<Approach>(decision).rank;
    if (!remaining.contains(rank)) {
      throw Error(ErrorCode::PolicyFailed,
                  "policy approached unavailable rank " + std::to_string(rank));
    }
    result.transcript.append(rank, reply(rank));
    remaining.erase(rank);
  }
}

void require_secrets(const ProblemInstance& instance, const std::vector<bool>& secrets) {
  if (secrets.size() != static_cast<std::size_t>(instance.n())) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(instance.n()) +
                                                " secrets, got " + std::to_string(secrets.size()));
  }
}

}  // namespace

RunResult run(const ProblemInstance& instance, const Policy& policy,
              const std::vector<bool>& secrets) {
  require_secrets(instance, secrets);
  auto replayed = replay(instance, policy,
                         [&](int rank) { return secrets[static_cast<std::size_t>(rank - 1)]; });
  RunResult result;
  result.halted_at = replayed.transcript.state();
  result.approached_count = static_cast<int>(replayed.transcript.size());
  result.total_cost_incurred = 0;
  for (const auto& entry : replayed.transcript.entries()) {
    result.total_cost_incurred += instance.cost(entry.rank);
  }
  result.output = replayed.output;
  result.transcript = std::move(replayed.transcript);
  return result;
}

std::vector<bool> sample_secrets(const ProblemInstance& instance, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& q = instance.q();
  std::vector<bool> secrets;
  secrets.reserve(static_cast<std::size_t>(instance.n()));
  if (q.get_den().fits_ulong_p()) {
    const unsigned long den = q.get_den().get_ui();
    const unsigned long num = q.get_num().get_ui();
    std::uniform_int_distribution<unsigned long> draw(0, den - 1);
    for (int j = 0; j < instance.n(); ++j) secrets.push_back(draw(rng) < num);
  } else {
    std::uniform_real_distribution<double> draw(0.0, 1.0);
    const double p = to_double(q);
    for (int j = 0; j < instance.n(); ++j) secrets.push_back(draw(rng) < p);
  }
  return secrets;
}

RunResult sample_run(const ProblemInstance& instance, const Policy& policy, std::uint64_t seed) {
  return run(instance, policy, sample_secrets(instance, seed));
}

// Full-tree audit -------------------------------------------------------------------

namespace {

class TreeAuditor {
public:
  TreeAuditor(const ProblemInstance& instance, const Policy& policy)
      : instance_(instance), policy_(policy), labels_(instance) {}

  AuditReport run() {
    Transcript transcript;
    explore(transcript, RankSet::all(instance_.n()), -1, false);
    report_.passed = !report_.failure.has_value();
    return std::move(report_);
  }

private:
  void fail(const Transcript& transcript, FailReason reason) {
    report_.failure = AuditFailure{transcript.state(), reason, transcript};
  }

  void explore(Transcript& transcript, RankSet remaining, std::ptrdiff_t parent, bool reply) {
    if (report_.failure) return;
    const InfoState state = transcript.state();
    const Determination determined = determine(state, instance_.fn());
    const Decision decision = policy_.next(transcript, remaining);

    if (const auto* halt = std::get_if<Halt>(&decision)) {
      ++report_.leaves;
      if (!determined || *determined != halt->value) fail(transcript, FailReason::IncorrectHalt);
      return;
    }
    if (const auto* failed = std::get_if<Fail>(&decision)) {
      fail(transcript, failed->reason);
      return;
    }
    if (determined) {
      // Earliest halting is part of the contract.
      fail(transcript, FailReason::IncorrectHalt);
      return;
    }

    const int rank = std::get<Approach>(decision).rank;
    if (!remaining.contains(rank)) {
      throw Error(ErrorCode::PolicyFailed,
                  "policy approached unavailable rank " + std::to_string(rank));
    }
    const auto& node = labels_.at(state);
    AuditRecord record;
    record.parent = parent;
    record.reply_from_parent = reply;
    record.state = state;
    record.rank = rank;
    record.cost = instance_.cost(rank);
    record.threshold = node.threshold;
    record.eligible = record.cost <= record.threshold;
    const bool eligible = record.eligible;
    report_.records.push_back(std::move(record));
    if (!eligible) {
      fail(transcript, FailReason::ChosenIneligible);
      return;
    }

    const auto self = static_cast<std::ptrdiff_t>(report_.records.size() - 1);
    remaining.erase(rank);
    for (bool bit : {false, true}) {
      Transcript child = transcript;
      child.append(rank, bit);
      explore(child, remaining, self, bit);
    }
  }

  const ProblemInstance& instance_;
  const Policy& policy_;
  LabelTable labels_;
  AuditReport report_;
};

}  // namespace

AuditReport audit_full_tree(const ProblemInstance& instance, const Policy& policy,
                            const AuditOptions& options) {
  if (instance.n() > options.max_agents) {
    throw Error(ErrorCode::CapExceeded, "full-tree audit capped at n = " +
                                            std::to_string(options.max_agents) + ", got n = " +
                                            std::to_string(instance.n()));
  }
  return TreeAuditor(instance, policy).run();
}

Transcript transcript_to(const AuditReport& report, std::size_t index) {
  std::vector<Transcript::Entry> reversed;
  for (auto at = static_cast<std::ptrdiff_t>(index); report.records.at(static_cast<std::size_t>(at)).parent >= 0;) {
    const auto& record = report.records[static_cast<std::size_t>(at)];
    const auto& parent = report.records[static_cast<std::size_t>(record.parent)];
    reversed.push_back({parent.rank, record.reply_from_parent});
    at = record.parent;
  }
  Transcript transcript;
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) transcript.append(it->rank, it->reply);
  return transcript;
}

// Deviation -----------------------------------------------------------------------------

Rational deviation_utility(const ProblemInstance& instance, const Policy& policy, int rank,
                           const Action& action, const DeviationOptions& options) {
  const int n = instance.n();
  if (rank < 1 || rank > n) {
    throw Error(ErrorCode::InvalidArgument, "rank " + std::to_string(rank) + " out of range");
  }

  std::vector<bool> secrets(static_cast<std::size_t>(n), false);
  std::vector<int> free_ranks;
  if (options.at) {
    // The history must be one the policy produces, with `rank` next in line.
    RankSet remaining = RankSet::all(n);
    Transcript prefix;
    for (const auto& entry : options.at->entries()) {
      const auto decision = policy.next(prefix, remaining);
      const auto* approach = std::get_if<Approach>(&decision);
      if (approach == nullptr || approach->rank != entry.rank) {
        throw Error(ErrorCode::InvalidArgument,
                    "history is not produced by the policy at step " + std::to_string(prefix.size()));
      }
      prefix.append(entry.rank, entry.reply);
      remaining.erase(entry.rank);
      secrets[static_cast<std::size_t>(entry.rank - 1)] = entry.reply;
    }
    const auto decision = policy.next(prefix, remaining);
    const auto* approach = std::get_if<Approach>(&decision);
    if (approach == nullptr || approach->rank != rank) {
      throw Error(ErrorCode::InvalidArgument, "rank " + std::to_string(rank) +
                                                  " is not approached after the given history");
    }
    free_ranks = remaining.ranks();
  } else {
    free_ranks = RankSet::all(n).ranks();
  }

  const int free_count = static_cast<int>(free_ranks.size());
  if (free_count > options.max_enumerated) {
    throw Error(ErrorCode::CapExceeded, "deviation enumeration capped at " +
                                            std::to_string(options.max_enumerated) + " secrets");
  }

  // Outcomes depend on the secrets; weights only on how many free secrets are
  // 1, so tally by that count and weight once at the end.
  std::vector<long> correct(static_cast<std::size_t>(free_count) + 1, 0);
  std::vector<long> charged(static_cast<std::size_t>(free_count) + 1, 0);
  const int fixed_ones = static_cast<int>(std::count(secrets.begin(), secrets.end(), true));
  const std::uint64_t total = std::uint64_t{1} << free_count;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int b = 0; b < free_count; ++b) {
      secrets[static_cast<std::size_t>(free_ranks[static_cast<std::size_t>(b)] - 1)] = (mask >> b) & 1u;
    }
    const int free_ones = std::popcount(mask);
    bool deviator_approached = false;
    const auto replayed = replay(instance, policy, [&](int r) {
      const bool secret = secrets[static_cast<std::size_t>(r - 1)];
      if (r != rank) return secret;
      deviator_approached = true;
      return action.reported_bit(secret);
    });
    if (replayed.output == instance.fn()(fixed_ones + free_ones)) ++correct[static_cast<std::size_t>(free_ones)];
    if (deviator_approached && action.compute) ++charged[static_cast<std::size_t>(free_ones)];
  }

  const Rational& q = instance.q();
  const Rational p = 1 - q;
  const Rational& cost = instance.cost(rank);
  Rational utility(0);
  for (int m = 0; m <= free_count; ++m) {
    const Rational weight = power(q, static_cast<unsigned>(m)) * power(p, static_cast<unsigned>(free_count - m));
    utility += weight * (Rational(correct[static_cast<std::size_t>(m)]) -
                         cost * Rational(charged[static_cast<std::size_t>(m)]));
  }
  return utility;
}

}  // namespace elicit
