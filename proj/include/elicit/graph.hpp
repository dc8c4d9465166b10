#pragma once

#include "elicit/pivotal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace elicit {

/// The reduced state DAG: every undetermined (i, k), with edges to the
/// undetermined successors (i+1, k) and (i+1, k+1).
///
/// Nodes are stored in lexicographic (i, k) order, which is also a
/// topological order.
class StateGraph {
public:
  StateGraph() = default;

  const std::vector<NodeLabel>& nodes() const { return nodes_; }
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  int n() const { return n_; }

  /// Index into nodes(), or nullopt if the state is not in the graph.
  std::optional<std::size_t> index_of(const InfoState& state) const;
  bool contains(const InfoState& state) const { return index_of(state).has_value(); }
  const NodeLabel& node(const InfoState& state) const;

  const std::vector<std::size_t>& successors(std::size_t index) const { return successors_[index]; }
  const std::vector<std::size_t>& predecessors(std::size_t index) const { return predecessors_[index]; }
  std::size_t edge_count() const;

  /// Nodes without a successor inside the graph, in k-ascending order.
  const std::vector<std::size_t>& end_nodes() const { return end_nodes_; }

  const std::string& name() const { return name_; }

private:
  friend StateGraph build(const ProblemInstance& instance);

  int n_ = 0;
  std::string name_;
  std::vector<NodeLabel> nodes_;
  std::vector<std::vector<std::size_t>> successors_;
  std::vector<std::vector<std::size_t>> predecessors_;
  std::vector<std::size_t> end_nodes_;
  /// [i][k] -> index + 1, 0 when absent.
  std::vector<std::vector<std::size_t>> lookup_;
};

StateGraph build(const ProblemInstance& instance);

struct CountedPath {
  int count = 0;
  std::vector<InfoState> path;
};

/// 1 if the node's c(v) is defined and at most rank_bound, else 0.
int rank_weight(const NodeLabel& node, int rank_bound);

/// Best weight of a root path ending at each node, for one rank bound.
/// Indexed like graph.nodes().
std::vector<int> max_counts(const StateGraph& graph, int rank_bound);

/// Heaviest root-to-target path under rank_weight. Ties go to the
/// lexicographically smaller predecessor. Throws Error(TargetNotInGraph).
CountedPath max_count_path(const StateGraph& graph, int rank_bound, const InfoState& target);

/// Lexicographically smallest root path to the target.
std::vector<InfoState> root_path(const StateGraph& graph, const InfoState& target);

/// Graphviz rendering, byte-stable for a given graph.
std::string export_dot(const StateGraph& graph);

}  // namespace elicit
