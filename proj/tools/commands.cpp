#include "commands.hpp"

#include "elicit/error.hpp"
#include "elicit/graph.hpp"
#include "elicit/mechanism.hpp"
#include "elicit/oracle.hpp"
#include "elicit/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace elicit::cli {

namespace {

using json = nlohmann::json;

struct CommonArgs {
  std::string instance_path;
  bool normalize = false;
  bool json_output = false;
};

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("instance", args.instance_path, "Instance file (JSON)")->required();
  cmd.add_flag("--normalize", args.normalize, "Accept q < 1/2 by relabeling 0 and 1");
  cmd.add_flag("--json", args.json_output, "Machine-readable output");
}

ProblemInstance load(const CommonArgs& args) {
  return ingest_file(args.instance_path, IngestOptions{args.normalize});
}

json state_json(const InfoState& s) { return json::array({s.approached, s.ones}); }

std::string c_text(const std::optional<int>& c) { return c ? std::to_string(*c) : "undefined"; }

json c_json(const std::optional<int>& c) { return c ? json(*c) : json(nullptr); }

std::string decimal(const Rational& value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << to_double(value);
  return out.str();
}

std::string header(const ProblemInstance& instance) {
  return "instance: " + (instance.name().empty() ? std::string("unnamed") : instance.name()) +
         " (n=" + std::to_string(instance.n()) + ", q=" + to_string(instance.q()) + ")\n";
}

/// Parses a 0/1 string.
std::vector<bool> parse_bits(const std::string& text, const std::string& what) {
  std::vector<bool> bits;
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw Error(ErrorCode::InvalidArgument, what + " must be a string of 0 and 1");
    }
    bits.push_back(ch == '1');
  }
  return bits;
}

std::unique_ptr<Policy> make_policy(const ProblemInstance& instance, const std::string& name) {
  if (name == "hcf") return std::make_unique<HcfPolicy>(instance);
  if (name == "fixed") return std::make_unique<FixedOrderPolicy>(instance);
  throw Error(ErrorCode::InvalidArgument, "unknown mechanism \"" + name + "\"");
}

// verify -----------------------------------------------------------------------------

int cmd_verify(const CommonArgs& args, bool witness, std::ostream& out) {
  const auto instance = load(args);
  const auto graph = build(instance);
  const auto verdict = exists_appropriate(graph);

  if (args.json_output) {
    json doc;
    doc["exists"] = verdict.exists;
    if (verdict.reason == VerdictReason::CUndefinedAt) {
      doc["reason"] = json{{"c_undefined_at", state_json(*verdict.undefined_at)}};
    } else {
      doc["reason"] = to_string(verdict.reason);
    }
    if (verdict.witness) {
      json path = json::array();
      for (const auto& s : verdict.witness->path) path.push_back(state_json(s));
      doc["witness"] = {{"path", path}, {"j", verdict.witness->violating_rank},
                        {"count", verdict.witness->count}};
    } else {
      doc["witness"] = nullptr;
    }
    out << doc.dump() << "\n";
  } else {
    out << header(instance);
    out << (verdict.exists ? "appropriate mechanism EXISTS\n"
                           : "appropriate mechanism does NOT exist\n");
    out << "reason: " << to_string(verdict.reason);
    if (verdict.undefined_at) out << " " << to_string(*verdict.undefined_at);
    out << "\n";
    if (witness && verdict.witness) {
      out << "witness: rank bound j=" << verdict.witness->violating_rank
          << ", nodes with c <= j: " << verdict.witness->count << "\n";
      for (const auto& s : verdict.witness->path) {
        const auto& node = graph.node(s);
        const bool counted = rank_weight(node, verdict.witness->violating_rank) == 1 ||
                             (!node.c_of_v && verdict.reason == VerdictReason::CUndefinedAt &&
                              s == *verdict.undefined_at);
        out << "  " << std::left << std::setw(10) << to_string(s) << " c=" << c_text(node.c_of_v)
            << (counted ? "  *" : "") << "\n";
      }
    }
  }
  return verdict.exists ? kSuccess : kNegative;
}

// hcf -------------------------------------------------------------------------------

int cmd_hcf(const CommonArgs& args, const std::optional<std::string>& secrets_text,
            const std::optional<std::uint64_t>& seed, std::ostream& out) {
  const auto instance = load(args);
  std::vector<bool> secrets;
  if (secrets_text) {
    const auto by_position = parse_bits(*secrets_text, "--secrets");
    if (by_position.size() != static_cast<std::size_t>(instance.n())) {
      throw Error(ErrorCode::InvalidArgument,
                  "--secrets needs " + std::to_string(instance.n()) + " bits");
    }
    secrets.resize(by_position.size());
    for (int r = 1; r <= instance.n(); ++r) {
      secrets[static_cast<std::size_t>(r - 1)] =
          by_position[static_cast<std::size_t>(instance.original_position(r) - 1)];
    }
  } else {
    secrets = sample_secrets(instance, seed.value_or(0));
  }

  const HcfPolicy policy(instance);
  RunResult result;
  try {
    result = run(instance, policy, secrets);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PolicyFailed) throw;
    if (args.json_output) {
      out << json{{"failed", e.what()}}.dump() << "\n";
    } else {
      out << header(instance) << "HCF failed: " << e.what() << "\n";
    }
    return kNegative;
  }

  json steps = json::array();
  Transcript prefix;
  for (const auto& entry : result.transcript.entries()) {
    const auto state = prefix.state();
    steps.push_back({{"agent", instance.agent_id(entry.rank)},
                     {"reply", entry.reply ? 1 : 0},
                     {"state", state_json(state)},
                     {"cost", to_string(instance.cost(entry.rank))},
                     {"threshold", to_string(threshold(state, instance))}});
    prefix.append(entry.rank, entry.reply);
  }

  if (args.json_output) {
    out << json{{"transcript", steps},
                {"output", result.output ? 1 : 0},
                {"halted_at", state_json(result.halted_at)},
                {"approached", result.approached_count},
                {"total_cost", to_string(result.total_cost_incurred)}}
               .dump()
        << "\n";
    return kSuccess;
  }

  out << header(instance);
  out << std::left << std::setw(6) << "step" << std::setw(10) << "agent" << std::setw(7) << "reply"
      << std::setw(10) << "state" << "threshold\n";
  int step = 1;
  for (const auto& s : steps) {
    out << std::left << std::setw(6) << step++ << std::setw(10) << s["agent"].get<std::string>()
        << std::setw(7) << s["reply"].get<int>() << std::setw(10)
        << ("(" + std::to_string(s["state"][0].get<int>()) + "," +
            std::to_string(s["state"][1].get<int>()) + ")")
        << s["threshold"].get<std::string>() << "\n";
  }
  out << "output: " << (result.output ? 1 : 0) << " (halted at " << to_string(result.halted_at)
      << ", " << result.approached_count << " approached, total cost "
      << to_string(result.total_cost_incurred) << ")\n";
  return kSuccess;
}

// audit -------------------------------------------------------------------------------

int cmd_audit(const CommonArgs& args, const std::string& mechanism, int cap, bool list_records,
              std::ostream& out) {
  const auto instance = load(args);
  std::unique_ptr<Policy> policy;
  if (mechanism == "hcf") {
    policy = std::make_unique<HcfPolicy>(HcfPolicy::tabulated(instance));
  } else {
    policy = make_policy(instance, mechanism);
  }
  const auto report = audit_full_tree(instance, *policy, AuditOptions{cap});

  auto history_text = [&](std::size_t index) {
    std::string text;
    const auto history = transcript_to(report, index);
    for (const auto& e : history.entries()) {
      text += instance.agent_id(e.rank) + "=" + (e.reply ? "1" : "0") + " ";
    }
    if (!text.empty()) text.pop_back();
    return text;
  };

  if (args.json_output) {
    json records = json::array();
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      const auto& r = report.records[i];
      records.push_back({{"parent", r.parent},
                         {"reply_from_parent", r.reply_from_parent ? 1 : 0},
                         {"state", state_json(r.state)},
                         {"agent", instance.agent_id(r.rank)},
                         {"cost", to_string(r.cost)},
                         {"threshold", to_string(r.threshold)},
                         {"eligible", r.eligible}});
    }
    json doc{{"passed", report.passed}, {"leaves", report.leaves}, {"records", records}};
    if (report.failure) {
      doc["failure"] = {{"state", state_json(report.failure->state)},
                        {"reason", to_string(report.failure->reason)}};
    } else {
      doc["failure"] = nullptr;
    }
    out << doc.dump() << "\n";
  } else {
    out << header(instance);
    out << "mechanism: " << mechanism << "\n";
    out << "audit " << (report.passed ? "PASSED" : "FAILED") << " (" << report.records.size()
        << " reached nodes, " << report.leaves << " leaves)\n";
    if (report.failure) {
      out << "failure: " << to_string(report.failure->reason) << " at "
          << to_string(report.failure->state) << "\n";
    }
    if (list_records) {
      for (std::size_t i = 0; i < report.records.size(); ++i) {
        const auto& r = report.records[i];
        out << "  " << std::left << std::setw(8) << to_string(r.state) << " agent "
            << std::setw(6) << instance.agent_id(r.rank) << " cost " << std::setw(8)
            << to_string(r.cost) << " threshold " << std::setw(12) << to_string(r.threshold)
            << (r.eligible ? " ok" : " INELIGIBLE") << "  [" << history_text(i) << "]\n";
      }
    }
  }
  return report.passed ? kSuccess : kNegative;
}

// pivotal ----------------------------------------------------------------------------

int cmd_pivotal(const CommonArgs& args, std::ostream& out) {
  const auto instance = load(args);
  const auto graph = build(instance);
  if (args.json_output) {
    json rows = json::array();
    for (const auto& node : graph.nodes()) {
      rows.push_back({{"state", state_json(node.state)},
                      {"pivotal_prob", to_string(node.pivotal_prob)},
                      {"threshold", to_string(node.threshold)},
                      {"c", c_json(node.c_of_v)}});
    }
    out << json{{"nodes", rows}}.dump() << "\n";
    return kSuccess;
  }
  out << header(instance);
  out << std::left << std::setw(10) << "state" << std::setw(24) << "P(Z|v)" << std::setw(24)
      << "threshold" << "c(v)\n";
  for (const auto& node : graph.nodes()) {
    out << std::left << std::setw(10) << to_string(node.state) << std::setw(24)
        << to_string(node.pivotal_prob) << std::setw(24) << to_string(node.threshold)
        << c_text(node.c_of_v) << "\n";
  }
  if (graph.empty()) out << "(no undetermined states)\n";
  return kSuccess;
}

// graph --------------------------------------------------------------------------------

int cmd_graph(const CommonArgs& args, const std::string& output_path, std::ostream& out) {
  const auto instance = load(args);
  const auto graph = build(instance);
  std::string text;
  if (args.json_output) {
    json nodes = json::array();
    json edges = json::array();
    json ends = json::array();
    for (std::size_t v = 0; v < graph.size(); ++v) {
      const auto& node = graph.nodes()[v];
      nodes.push_back({{"state", state_json(node.state)},
                       {"pivotal_prob", to_string(node.pivotal_prob)},
                       {"c", c_json(node.c_of_v)}});
      for (std::size_t w : graph.successors(v)) {
        edges.push_back({state_json(node.state), state_json(graph.nodes()[w].state)});
      }
    }
    for (std::size_t v : graph.end_nodes()) ends.push_back(state_json(graph.nodes()[v].state));
    text = json{{"nodes", nodes}, {"edges", edges}, {"end_nodes", ends}}.dump() + "\n";
  } else {
    text = export_dot(graph);
  }
  if (output_path.empty() || output_path == "-") {
    out << text;
  } else {
    std::ofstream file(output_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + output_path);
    file << text;
  }
  return kSuccess;
}

// deviate ----------------------------------------------------------------------------

int cmd_deviate(const CommonArgs& args, const std::string& agent, const std::string& action_name,
                const std::string& mechanism, const std::optional<std::string>& at, int cap,
                std::ostream& out) {
  const auto instance = load(args);
  const auto action = parse_action(action_name);
  if (!action) throw Error(ErrorCode::InvalidArgument, "unknown action \"" + action_name + "\"");
  const int rank = instance.rank_of_agent(agent);
  std::unique_ptr<Policy> policy;
  if (mechanism == "hcf") {
    policy = std::make_unique<HcfPolicy>(HcfPolicy::tabulated(instance));
  } else {
    policy = make_policy(instance, mechanism);
  }

  DeviationOptions options;
  options.max_enumerated = cap;
  if (at) {
    // Replies along the mechanism's own path; the approached agents follow.
    Transcript history;
    RankSet remaining = RankSet::all(instance.n());
    for (bool reply : parse_bits(*at, "--at")) {
      const auto decision = policy->next(history, remaining);
      const auto* approach = std::get_if<Approach>(&decision);
      if (approach == nullptr) {
        throw Error(ErrorCode::InvalidArgument, "mechanism stops before the end of --at");
      }
      history.append(approach->rank, reply);
      remaining.erase(approach->rank);
    }
    options.at = history;
  }

  const auto utility = deviation_utility(instance, *policy, rank, *action, options);
  const auto truthful = deviation_utility(instance, *policy, rank, Action::truthful(), options);
  if (args.json_output) {
    out << json{{"agent", agent},
                {"action", to_string(*action)},
                {"utility", to_string(utility)},
                {"truthful_utility", to_string(truthful)},
                {"conditional", at.has_value()}}
               .dump()
        << "\n";
  } else {
    out << header(instance);
    out << "agent " << agent << " (rank " << rank << ", cost " << to_string(instance.cost(rank))
        << ")" << (at ? " after replies " + *at : std::string(" ex-ante")) << "\n";
    out << to_string(*action) << ": " << to_string(utility) << " (~" << decimal(utility) << ")\n";
    out << "compute-truthful: " << to_string(truthful) << " (~" << decimal(truthful) << ")\n";
  }
  return kSuccess;
}

// oracle -----------------------------------------------------------------------------

int cmd_oracle(const CommonArgs& args, const std::string& mode, std::ostream& out) {
  const auto instance = load(args);
  json doc{{"mode", mode}};
  bool agree = true;
  std::ostringstream text;

  if (mode == "pivotal") {
    std::size_t checked = 0;
    json mismatches = json::array();
    for (int i = 0; i < instance.n(); ++i) {
      for (int k = 0; k <= i; ++k) {
        const InfoState s{i, k};
        const auto formula = pivotal_prob(s, instance);
        const auto brute = brute_pivotal(s, instance);
        ++checked;
        if (formula != brute) {
          mismatches.push_back(
              {{"state", state_json(s)}, {"formula", to_string(formula)}, {"brute", to_string(brute)}});
        }
      }
    }
    agree = mismatches.empty();
    doc["states_checked"] = checked;
    doc["mismatches"] = mismatches;
    text << "pivotal: " << checked << " states, " << mismatches.size() << " mismatches\n";
  } else if (mode == "mechanisms" || mode == "hcf-tree") {
    const auto verdict = exists_appropriate(instance);
    const auto oracle =
        mode == "mechanisms" ? exhaustive_existence(instance) : hcf_tree_existence(instance);
    agree = oracle.exists == verdict.exists;
    doc["verify_exists"] = verdict.exists;
    doc["oracle_exists"] = oracle.exists;
    doc["mechanisms_checked"] = oracle.mechanisms_checked;
    text << mode << ": verify says " << (verdict.exists ? "exists" : "does not exist")
         << ", oracle says " << (oracle.exists ? "exists" : "does not exist") << " ("
         << oracle.mechanisms_checked << " mechanisms checked)\n";
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown oracle mode \"" + mode + "\"");
  }

  doc["agree"] = agree;
  if (args.json_output) {
    out << doc.dump() << "\n";
  } else {
    out << header(instance) << text.str() << (agree ? "AGREE\n" : "MISMATCH\n");
  }
  return agree ? kSuccess : kNegative;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument:
    case ErrorCode::QOutOfRange:
    case ErrorCode::CostOutOfRange:
    case ErrorCode::BadFunctionTable:
    case ErrorCode::InvalidArgument:
    case ErrorCode::CapExceeded:
      return kUsageError;
    default:
      return kInternalError;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential information elicitation: existence checks, HCF runs and audits"};
  app.name("elicit");
  app.require_subcommand(1);

  CommonArgs verify_args, hcf_args, audit_args, pivotal_args, graph_args, deviate_args, oracle_args;

  auto* verify_cmd = app.add_subcommand("verify", "Decide whether an appropriate mechanism exists");
  add_common(*verify_cmd, verify_args);
  bool witness = false;
  verify_cmd->add_flag("--witness", witness, "Print the violating path with c labels");

  auto* hcf_cmd = app.add_subcommand("hcf", "Run the HCF mechanism on one secret vector");
  add_common(*hcf_cmd, hcf_args);
  std::optional<std::string> secrets;
  std::optional<std::uint64_t> seed;
  auto* secrets_opt = hcf_cmd->add_option("--secrets", secrets, "Secrets in agent order, e.g. 0101");
  auto* seed_opt = hcf_cmd->add_option("--seed", seed, "Draw secrets from the prior with this seed");
  secrets_opt->excludes(seed_opt);

  auto* audit_cmd = app.add_subcommand("audit", "Audit the full reply tree for a computing equilibrium");
  add_common(*audit_cmd, audit_args);
  std::string audit_mechanism = "hcf";
  int audit_cap = 20;
  bool list_records = false;
  audit_cmd->add_option("--mechanism", audit_mechanism, "hcf or fixed")
      ->check(CLI::IsMember({"hcf", "fixed"}));
  audit_cmd->add_option("--cap", audit_cap, "Largest n to expand");
  audit_cmd->add_flag("--records", list_records, "List every reached node");

  auto* pivotal_cmd = app.add_subcommand("pivotal", "Tabulate P(Z|v), thresholds and c(v)");
  add_common(*pivotal_cmd, pivotal_args);

  auto* graph_cmd = app.add_subcommand("graph", "Export the reduced state graph as DOT");
  add_common(*graph_cmd, graph_args);
  std::string graph_output;
  graph_cmd->add_option("-o,--output", graph_output, "Output file (default: standard output)");

  auto* deviate_cmd = app.add_subcommand("deviate", "Expected utility of a unilateral deviation");
  add_common(*deviate_cmd, deviate_args);
  std::string agent, action_name, deviate_mechanism = "hcf";
  std::optional<std::string> at;
  int deviate_cap = 12;
  deviate_cmd->add_option("--agent", agent, "Agent id")->required();
  deviate_cmd->add_option("--action", action_name,
                          "guess-report-0, guess-report-1, compute-report-0, compute-report-1, "
                          "compute-false or compute-truthful")
      ->required();
  deviate_cmd->add_option("--mechanism", deviate_mechanism, "hcf or fixed")
      ->check(CLI::IsMember({"hcf", "fixed"}));
  deviate_cmd->add_option("--at", at,
                          "Condition on the mechanism's path with these replies (e.g. 000)");
  deviate_cmd->add_option("--cap", deviate_cap, "Largest number of secrets to enumerate");

  auto* oracle_cmd = app.add_subcommand("oracle", "Cross-check the analytic engine by brute force");
  add_common(*oracle_cmd, oracle_args);
  std::string mode;
  oracle_cmd->add_option("--mode", mode, "pivotal, mechanisms or hcf-tree")
      ->required()
      ->check(CLI::IsMember({"pivotal", "mechanisms", "hcf-tree"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(verify_args, witness, out);
    if (hcf_cmd->parsed()) return cmd_hcf(hcf_args, secrets, seed, out);
    if (audit_cmd->parsed()) {
      return cmd_audit(audit_args, audit_mechanism, audit_cap, list_records, out);
    }
    if (pivotal_cmd->parsed()) return cmd_pivotal(pivotal_args, out);
    if (graph_cmd->parsed()) return cmd_graph(graph_args, graph_output, out);
    if (deviate_cmd->parsed()) {
      return cmd_deviate(deviate_args, agent, action_name, deviate_mechanism, at, deviate_cap, out);
    }
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_args, mode, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace elicit::cli
