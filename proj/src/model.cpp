#include "elicit/model.hpp"

#include "elicit/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace elicit {

using json = nlohmann::json;

// AnonymousFunctionSpec --------------------------------------------------------

AnonymousFunctionSpec::AnonymousFunctionSpec(int n, std::vector<bool> ones_to_one,
                                             std::string name)
    : n_(n), table_(std::move(ones_to_one)), name_(std::move(name)) {
  if (n_ < 0 || table_.size() != static_cast<std::size_t>(n_) + 1) {
    throw Error(ErrorCode::BadFunctionTable,
                "function table has " + std::to_string(table_.size()) +
                    " entries, expected n+1 = " + std::to_string(n_ + 1));
  }
}

AnonymousFunctionSpec AnonymousFunctionSpec::majority(int n) {
  std::vector<bool> table(static_cast<std::size_t>(n) + 1, false);
  for (int w = (n + 2) / 2; w <= n; ++w) table[static_cast<std::size_t>(w)] = true;
  return {n, std::move(table), "majority"};
}

AnonymousFunctionSpec AnonymousFunctionSpec::consensus(int n) {
  std::vector<bool> table(static_cast<std::size_t>(n) + 1, false);
  table.front() = true;
  table.back() = true;
  return {n, std::move(table), "consensus"};
}

AnonymousFunctionSpec AnonymousFunctionSpec::parity(int n) {
  std::vector<bool> table(static_cast<std::size_t>(n) + 1, false);
  for (int w = 1; w <= n; w += 2) table[static_cast<std::size_t>(w)] = true;
  return {n, std::move(table), "parity"};
}

AnonymousFunctionSpec AnonymousFunctionSpec::unanimity(int n) {
  std::vector<bool> table(static_cast<std::size_t>(n) + 1, false);
  table.back() = true;
  return {n, std::move(table), "unanimity"};
}

AnonymousFunctionSpec AnonymousFunctionSpec::from_ones_counts(int n,
                                                              const std::vector<int>& counts,
                                                              std::string name) {
  if (n < 0) throw Error(ErrorCode::BadFunctionTable, "negative agent count");
  std::vector<bool> table(static_cast<std::size_t>(n) + 1, false);
  for (int w : counts) {
    if (w < 0 || w > n) {
      throw Error(ErrorCode::BadFunctionTable,
                  "ones count " + std::to_string(w) + " outside [0, " + std::to_string(n) + "]");
    }
    table[static_cast<std::size_t>(w)] = true;
  }
  return {n, std::move(table), std::move(name)};
}

std::optional<AnonymousFunctionSpec> AnonymousFunctionSpec::named(std::string_view name, int n) {
  if (name == "majority") return majority(n);
  if (name == "consensus") return consensus(n);
  if (name == "parity") return parity(n);
  if (name == "unanimity") return unanimity(n);
  return std::nullopt;
}

bool AnonymousFunctionSpec::is_constant() const {
  return std::adjacent_find(table_.begin(), table_.end(), std::not_equal_to<>()) == table_.end();
}

std::vector<int> AnonymousFunctionSpec::ones_counts() const {
  std::vector<int> counts;
  for (int w = 0; w <= n_; ++w) {
    if (table_[static_cast<std::size_t>(w)]) counts.push_back(w);
  }
  return counts;
}

std::string to_string(const InfoState& state) {
  return "(" + std::to_string(state.approached) + "," + std::to_string(state.ones) + ")";
}

// ProblemInstance ---------------------------------------------------------------

ProblemInstance ProblemInstance::create(Rational q, std::vector<Rational> costs,
                                        AnonymousFunctionSpec fn,
                                        std::vector<std::string> agent_ids, std::string name,
                                        bool allow_low_q) {
  const int n = static_cast<int>(costs.size());
  if (n < 1) throw Error(ErrorCode::MalformedDocument, "at least one agent is required");
  if (fn.n() != n) {
    throw Error(ErrorCode::BadFunctionTable,
                "function table has " + std::to_string(fn.table().size()) +
                    " entries, expected n+1 = " + std::to_string(n + 1));
  }
  const Rational half(1, 2);
  if (q <= 0 || q >= 1 || (!allow_low_q && q < half)) {
    throw Error(ErrorCode::QOutOfRange, "q = " + to_string(q) + " outside [1/2, 1)");
  }
  for (std::size_t j = 0; j < costs.size(); ++j) {
    if (costs[j] < 0 || costs[j] >= 1) {
      throw Error(ErrorCode::CostOutOfRange,
                  "cost of agent " + std::to_string(j + 1) + " = " + to_string(costs[j]) +
                      " outside [0, 1)");
    }
  }
  if (agent_ids.empty()) {
    for (int j = 1; j <= n; ++j) agent_ids.push_back(std::to_string(j));
  }
  if (agent_ids.size() != costs.size()) {
    throw Error(ErrorCode::MalformedDocument, "agent_ids must have one entry per agent");
  }
  if (std::set<std::string>(agent_ids.begin(), agent_ids.end()).size() != agent_ids.size()) {
    throw Error(ErrorCode::MalformedDocument, "agent_ids must be distinct");
  }

  std::vector<int> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return costs[static_cast<std::size_t>(a)] < costs[static_cast<std::size_t>(b)]; });

  ProblemInstance instance;
  instance.q_ = std::move(q);
  instance.fn_ = std::move(fn);
  instance.agent_ids_ = std::move(agent_ids);
  instance.name_ = std::move(name);
  for (int position : order) {
    instance.costs_.push_back(costs[static_cast<std::size_t>(position)]);
    instance.original_index_.push_back(position + 1);
  }
  if (instance.q_ < half) return normalize_low_q(instance);
  return instance;
}

int ProblemInstance::rank_of_position(int position) const {
  const auto it = std::find(original_index_.begin(), original_index_.end(), position);
  if (it == original_index_.end()) {
    throw Error(ErrorCode::InvalidArgument, "no agent at position " + std::to_string(position));
  }
  return static_cast<int>(it - original_index_.begin()) + 1;
}

const std::string& ProblemInstance::agent_id(int rank) const {
  return agent_ids_.at(static_cast<std::size_t>(original_position(rank) - 1));
}

int ProblemInstance::rank_of_agent(std::string_view id) const {
  const auto it = std::find(agent_ids_.begin(), agent_ids_.end(), id);
  if (it == agent_ids_.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown agent id \"" + std::string(id) + "\"");
  }
  return rank_of_position(static_cast<int>(it - agent_ids_.begin()) + 1);
}

std::vector<Rational> ProblemInstance::costs_in_input_order() const {
  std::vector<Rational> result(costs_.size());
  for (std::size_t r = 0; r < costs_.size(); ++r) {
    result[static_cast<std::size_t>(original_index_[r] - 1)] = costs_[r];
  }
  return result;
}

bool ProblemInstance::operator==(const ProblemInstance& other) const {
  return q_ == other.q_ && costs_ == other.costs_ && original_index_ == other.original_index_ &&
         agent_ids_ == other.agent_ids_ && fn_ == other.fn_ && name_ == other.name_;
}

ProblemInstance normalize_low_q(const ProblemInstance& instance) {
  if (instance.q_ >= Rational(1, 2)) return instance;
  ProblemInstance mirrored = instance;
  mirrored.q_ = 1 - instance.q_;
  const auto& table = instance.fn_.table();
  std::vector<bool> flipped(table.rbegin(), table.rend());
  mirrored.fn_ = AnonymousFunctionSpec(instance.fn_.n(), std::move(flipped), instance.fn_.name());
  return mirrored;
}

// Document format -----------------------------------------------------------------

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, what);
}

Rational rational_field(const json& value, const std::string& field) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  malformed(field + ": expected \"num/den\" string or integer");
}

std::vector<Rational> rational_list(const json& value, const std::string& field, int n) {
  if (!value.is_array()) malformed(field + ": expected an array");
  if (value.size() != static_cast<std::size_t>(n)) {
    malformed(field + ": expected " + std::to_string(n) + " entries, got " +
              std::to_string(value.size()));
  }
  std::vector<Rational> result;
  for (const auto& item : value) result.push_back(rational_field(item, field));
  return result;
}

AnonymousFunctionSpec function_field(const json& value, int n) {
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (auto spec = AnonymousFunctionSpec::named(name, n)) return *spec;
    malformed("function: unknown name \"" + name + "\"");
  }
  auto table_from = [n](const json& list) {
    std::vector<bool> table;
    for (const auto& entry : list) {
      if (!entry.is_boolean()) malformed("function table entries must be booleans");
      table.push_back(entry.get<bool>());
    }
    return AnonymousFunctionSpec(n, std::move(table));
  };
  if (value.is_array()) return table_from(value);
  if (value.is_object() && value.size() == 1) {
    if (value.contains("ones_counts")) {
      const auto& counts = value["ones_counts"];
      if (!counts.is_array()) malformed("function.ones_counts: expected an array");
      std::vector<int> ws;
      for (const auto& w : counts) {
        if (!w.is_number_integer()) malformed("function.ones_counts: expected integers");
        ws.push_back(w.get<int>());
      }
      return AnonymousFunctionSpec::from_ones_counts(n, ws);
    }
    if (value.contains("ones_to_one")) {
      if (!value["ones_to_one"].is_array()) malformed("function.ones_to_one: expected an array");
      return table_from(value["ones_to_one"]);
    }
  }
  malformed("function: expected a name, a boolean table or {\"ones_counts\": [...]}");
}

}  // namespace

ProblemInstance ingest(std::string_view document, const IngestOptions& options) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("instance document must be a JSON object");

  static const std::set<std::string> known = {"n", "q", "costs", "values", "agent_ids",
                                              "function", "name"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) malformed("unknown field \"" + key + "\"");
  }
  for (const char* required : {"n", "q", "costs", "function"}) {
    if (!doc.contains(required)) malformed(std::string("missing field \"") + required + "\"");
  }

  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1 ||
      doc["n"].get<long>() > 1'000'000) {
    malformed("n: expected a positive integer");
  }
  const int n = doc["n"].get<int>();
  const Rational q = rational_field(doc["q"], "q");
  auto costs = rational_list(doc["costs"], "costs", n);

  if (doc.contains("values")) {
    const auto values = rational_list(doc["values"], "values", n);
    for (std::size_t j = 0; j < costs.size(); ++j) {
      if (values[j] <= 0) {
        throw Error(ErrorCode::CostOutOfRange,
                    "value of agent " + std::to_string(j + 1) + " must be positive");
      }
      costs[j] /= values[j];
    }
  }

  std::vector<std::string> ids;
  if (doc.contains("agent_ids")) {
    const auto& list = doc["agent_ids"];
    if (!list.is_array() || list.size() != static_cast<std::size_t>(n)) {
      malformed("agent_ids: expected " + std::to_string(n) + " strings");
    }
    for (const auto& id : list) {
      if (!id.is_string()) malformed("agent_ids: expected strings");
      ids.push_back(id.get<std::string>());
    }
  }

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) malformed("name: expected a string");
    name = doc["name"].get<std::string>();
  }

  return ProblemInstance::create(q, std::move(costs), function_field(doc["function"], n),
                                 std::move(ids), std::move(name), options.normalize);
}

ProblemInstance ingest_file(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto instance = ingest(buffer.str(), options);
  if (instance.name().empty()) {
    return ProblemInstance::create(instance.q(), instance.costs_in_input_order(), instance.fn(),
                                   instance.agent_ids(), path.stem().string());
  }
  return instance;
}

std::string emit(const ProblemInstance& instance) {
  json doc = json::object();
  if (!instance.name().empty()) doc["name"] = instance.name();
  doc["n"] = instance.n();
  doc["q"] = to_string(instance.q());
  json costs = json::array();
  for (const auto& c : instance.costs_in_input_order()) costs.push_back(to_string(c));
  doc["costs"] = costs;
  doc["agent_ids"] = instance.agent_ids();

  const auto& fn = instance.fn();
  const auto expanded = AnonymousFunctionSpec::named(fn.name(), fn.n());
  if (expanded && *expanded == fn) {
    doc["function"] = fn.name();
  } else {
    doc["function"] = json{{"ones_counts", fn.ones_counts()}};
  }
  return doc.dump(2);
}

// Actions ------------------------------------------------------------------------

bool Action::reported_bit(bool secret) const {
  switch (report) {
    case Report::Zero: return false;
    case Report::One: return true;
    case Report::TruthfulValue: return secret;
    case Report::FalseValue: return !secret;
  }
  return secret;
}

const std::array<Action, 6>& all_actions() {
  static const std::array<Action, 6> actions = {{
      {false, Report::Zero},
      {false, Report::One},
      {true, Report::Zero},
      {true, Report::One},
      {true, Report::FalseValue},
      {true, Report::TruthfulValue},
  }};
  return actions;
}

std::string to_string(const Action& action) {
  std::string prefix = action.compute ? "compute-" : "guess-";
  switch (action.report) {
    case Report::Zero: return prefix + "report-0";
    case Report::One: return prefix + "report-1";
    case Report::TruthfulValue: return prefix + "truthful";
    case Report::FalseValue: return prefix + "false";
  }
  return prefix;
}

std::optional<Action> parse_action(std::string_view name) {
  for (const auto& action : all_actions()) {
    if (to_string(action) == name) return action;
  }
  return std::nullopt;
}

// Transcript ----------------------------------------------------------------------

void Transcript::append(int rank, bool reply) {
  if (contains(rank)) {
    throw Error(ErrorCode::InvalidArgument,
                "rank " + std::to_string(rank) + " approached twice");
  }
  entries_.push_back({rank, reply});
  if (reply) ++ones_;
}

bool Transcript::contains(int rank) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [rank](const Entry& e) { return e.rank == rank; });
}

}  // namespace elicit
