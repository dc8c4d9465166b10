#include "elicit/graph.hpp"

#include "elicit/error.hpp"

#include <algorithm>
#include <sstream>

namespace elicit {

StateGraph build(const ProblemInstance& instance) {
  StateGraph graph;
  graph.n_ = instance.n();
  graph.name_ = instance.name();
  const int n = instance.n();
  graph.lookup_.assign(static_cast<std::size_t>(n), {});

  if (determine({0, 0}, instance.fn())) return graph;

  // Undetermined states only exist below layer n; their predecessors are
  // undetermined too, so each layer is generated from the previous one.
  const LabelTable labels(instance);
  for (int i = 0; i < n; ++i) {
    auto& row = graph.lookup_[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(i) + 1, 0);
    for (int k = 0; k <= i; ++k) {
      const auto& node = labels.at({i, k});
      if (node.determined) continue;
      graph.nodes_.push_back(node);
      row[static_cast<std::size_t>(k)] = graph.nodes_.size();
    }
  }

  graph.successors_.assign(graph.nodes_.size(), {});
  graph.predecessors_.assign(graph.nodes_.size(), {});
  for (std::size_t index = 0; index < graph.nodes_.size(); ++index) {
    const auto& s = graph.nodes_[index].state;
    for (int step = 0; step <= 1; ++step) {
      if (auto child = graph.index_of({s.approached + 1, s.ones + step})) {
        graph.successors_[index].push_back(*child);
        graph.predecessors_[*child].push_back(index);
      }
    }
    if (graph.successors_[index].empty()) graph.end_nodes_.push_back(index);
  }
  return graph;
}

std::optional<std::size_t> StateGraph::index_of(const InfoState& state) const {
  if (!is_valid(state, n_) || state.approached >= n_) return std::nullopt;
  const auto& row = lookup_[static_cast<std::size_t>(state.approached)];
  if (row.empty()) return std::nullopt;
  const auto slot = row[static_cast<std::size_t>(state.ones)];
  if (slot == 0) return std::nullopt;
  return slot - 1;
}

const NodeLabel& StateGraph::node(const InfoState& state) const {
  const auto index = index_of(state);
  if (!index) throw Error(ErrorCode::TargetNotInGraph, to_string(state) + " is not in the graph");
  return nodes_[*index];
}

std::size_t StateGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& out : successors_) total += out.size();
  return total;
}

int rank_weight(const NodeLabel& node, int rank_bound) {
  return node.c_of_v && *node.c_of_v <= rank_bound ? 1 : 0;
}

std::vector<int> max_counts(const StateGraph& graph, int rank_bound) {
  std::vector<int> best(graph.size(), 0);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    int incoming = 0;
    for (std::size_t p : graph.predecessors(v)) incoming = std::max(incoming, best[p]);
    best[v] = incoming + rank_weight(graph.nodes()[v], rank_bound);
  }
  return best;
}

CountedPath max_count_path(const StateGraph& graph, int rank_bound, const InfoState& target) {
  auto index = graph.index_of(target);
  if (!index) throw Error(ErrorCode::TargetNotInGraph, to_string(target) + " is not in the graph");

  const auto best = max_counts(graph, rank_bound);
  CountedPath result;
  result.count = best[*index];

  // Predecessors are listed in increasing index order, i.e. (i-1, k-1) first,
  // so the first maximum is the lexicographically smaller one.
  std::size_t v = *index;
  result.path.push_back(graph.nodes()[v].state);
  while (!graph.predecessors(v).empty()) {
    const auto& preds = graph.predecessors(v);
    std::size_t chosen = preds.front();
    for (std::size_t p : preds) {
      if (best[p] > best[chosen]) chosen = p;
    }
    v = chosen;
    result.path.push_back(graph.nodes()[v].state);
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

std::vector<InfoState> root_path(const StateGraph& graph, const InfoState& target) {
  auto index = graph.index_of(target);
  if (!index) throw Error(ErrorCode::TargetNotInGraph, to_string(target) + " is not in the graph");
  std::vector<InfoState> path{graph.nodes()[*index].state};
  for (std::size_t v = *index; !graph.predecessors(v).empty();) {
    v = graph.predecessors(v).front();
    path.push_back(graph.nodes()[v].state);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

std::string node_name(const InfoState& s) {
  return "s_" + std::to_string(s.approached) + "_" + std::to_string(s.ones);
}

}  // namespace

std::string export_dot(const StateGraph& graph) {
  std::ostringstream out;
  out << "// instance: " << (graph.name().empty() ? "unnamed" : graph.name()) << "\n";
  if (graph.empty()) {
    out << "digraph G { }\n";
    return out.str();
  }
  out << "digraph G {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=circle];\n";
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const auto& node = graph.nodes()[v];
    const bool end = graph.successors(v).empty();
    out << "  " << node_name(node.state) << " [label=\"" << to_string(node.state)
        << "\\nP=" << to_string(node.pivotal_prob) << "\\nc="
        << (node.c_of_v ? std::to_string(*node.c_of_v) : std::string("⊥")) << "\""
        << (end ? ", peripheries=2" : "") << "];\n";
  }
  for (std::size_t v = 0; v < graph.size(); ++v) {
    for (std::size_t w : graph.successors(v)) {
      out << "  " << node_name(graph.nodes()[v].state) << " -> "
          << node_name(graph.nodes()[w].state) << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace elicit
