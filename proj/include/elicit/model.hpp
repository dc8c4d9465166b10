#pragma once

#include "elicit/rational.hpp"

#include <array>
#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

/// An anonymous boolean function of n bits, given by the ones-counts that map
/// to 1.
class AnonymousFunctionSpec {
public:
  AnonymousFunctionSpec() = default;

  /// Throws Error(BadFunctionTable) unless the table has n+1 entries.
  AnonymousFunctionSpec(int n, std::vector<bool> ones_to_one, std::string name = {});

  static AnonymousFunctionSpec majority(int n);
  static AnonymousFunctionSpec consensus(int n);
  static AnonymousFunctionSpec parity(int n);
  static AnonymousFunctionSpec unanimity(int n);
  /// Builds W directly; every count must lie in [0, n].
  static AnonymousFunctionSpec from_ones_counts(int n, const std::vector<int>& counts,
                                                std::string name = {});
  /// One of "majority", "consensus", "parity", "unanimity".
  static std::optional<AnonymousFunctionSpec> named(std::string_view name, int n);

  int n() const { return n_; }
  const std::vector<bool>& table() const { return table_; }
  const std::string& name() const { return name_; }

  bool operator()(int ones) const { return table_.at(static_cast<std::size_t>(ones)); }
  bool is_constant() const;
  std::vector<int> ones_counts() const;

  bool operator==(const AnonymousFunctionSpec& other) const {
    return n_ == other.n_ && table_ == other.table_;
  }

private:
  int n_ = 0;
  std::vector<bool> table_;
  std::string name_;
};

/// Node (i, k) of the state graph: i agents approached, k of them replied 1.
struct InfoState {
  int approached = 0;
  int ones = 0;

  auto operator<=>(const InfoState&) const = default;
};

std::string to_string(const InfoState& state);

/// A validated multi-party computation game. Costs are normalized by value and
/// sorted ascending; ranks are 1-based positions in that order.
class ProblemInstance {
public:
  /// Costs and agent ids are in user order. Sorting is stable, so equal-cost
  /// agents keep their relative input order.
  static ProblemInstance create(Rational q, std::vector<Rational> costs,
                                AnonymousFunctionSpec fn,
                                std::vector<std::string> agent_ids = {},
                                std::string name = {}, bool allow_low_q = false);

  int n() const { return static_cast<int>(costs_.size()); }
  const Rational& q() const { return q_; }
  const std::vector<Rational>& costs() const { return costs_; }
  const Rational& cost(int rank) const { return costs_.at(static_cast<std::size_t>(rank - 1)); }
  /// rank -> 1-based position in the user's agent list.
  const std::vector<int>& original_index() const { return original_index_; }
  int original_position(int rank) const { return original_index_.at(static_cast<std::size_t>(rank - 1)); }
  int rank_of_position(int position) const;
  /// Agent ids in user order.
  const std::vector<std::string>& agent_ids() const { return agent_ids_; }
  const std::string& agent_id(int rank) const;
  /// Throws Error(InvalidArgument) if no agent has this id.
  int rank_of_agent(std::string_view id) const;
  const AnonymousFunctionSpec& fn() const { return fn_; }
  const std::string& name() const { return name_; }

  /// Costs in user order.
  std::vector<Rational> costs_in_input_order() const;

  bool operator==(const ProblemInstance& other) const;

private:
  friend ProblemInstance normalize_low_q(const ProblemInstance& instance);

  Rational q_;
  std::vector<Rational> costs_;
  std::vector<int> original_index_;
  std::vector<std::string> agent_ids_;
  AnonymousFunctionSpec fn_;
  std::string name_;
};

/// Relabels 0 <-> 1 so that q' = 1 - q >= 1/2. Identity when q >= 1/2.
ProblemInstance normalize_low_q(const ProblemInstance& instance);

struct IngestOptions {
  /// Accept q < 1/2 and apply normalize_low_q.
  bool normalize = false;
};

/// Parses the JSON instance document.
ProblemInstance ingest(std::string_view document, const IngestOptions& options = {});
ProblemInstance ingest_file(const std::filesystem::path& path, const IngestOptions& options = {});

/// Serializes back to the instance document format (user agent order, costs
/// already divided by values).
std::string emit(const ProblemInstance& instance);

enum class Report { Zero, One, TruthfulValue, FalseValue };

struct Action {
  bool compute = true;
  Report report = Report::TruthfulValue;

  bool operator==(const Action&) const = default;

  static constexpr Action truthful() { return {true, Report::TruthfulValue}; }
  bool is_truthful() const { return compute && report == Report::TruthfulValue; }
  bool reported_bit(bool secret) const;
};

/// The six legal actions, truthful-compute last.
const std::array<Action, 6>& all_actions();
std::string to_string(const Action& action);
/// Accepts the names produced by to_string(Action).
std::optional<Action> parse_action(std::string_view name);

/// The public history: who was approached, in order, and what they replied.
class Transcript {
public:
  struct Entry {
    int rank = 0;
    bool reply = false;

    bool operator==(const Entry&) const = default;
  };

  Transcript() = default;

  /// Throws Error(InvalidArgument) if the rank was already approached.
  void append(int rank, bool reply);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(int rank) const;
  InfoState state() const { return {static_cast<int>(entries_.size()), ones_}; }

  bool operator==(const Transcript& other) const { return entries_ == other.entries_; }

private:
  std::vector<Entry> entries_;
  int ones_ = 0;
};

}  // namespace elicit
