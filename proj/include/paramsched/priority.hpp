#pragma once

#include <algorithm>
#include <numeric>
#include <string_view>
#include <vector>

#include "paramsched/model.hpp"

namespace paramsched {

enum class PriorityKind { UpwardRanking, CPoPRanking, ArbitraryTopological };

inline constexpr PriorityKind all_priority_kinds[] = {
    PriorityKind::UpwardRanking, PriorityKind::CPoPRanking, PriorityKind::ArbitraryTopological};

inline std::string_view to_string(PriorityKind k) {
  switch (k) {
    case PriorityKind::UpwardRanking: return "UpwardRanking";
    case PriorityKind::CPoPRanking: return "CPoPRanking";
    case PriorityKind::ArbitraryTopological: return "ArbitraryTopological";
  }
  return "?";
}

/// Per-task ranks, indexed by task index. A table filled by only one of the
/// rank functions leaves the other vector empty.
struct RankTables {
  std::vector<double> upward;
  std::vector<double> downward;
};

/// Priority per task index; higher values schedule earlier.
struct PriorityMap {
  std::vector<double> value;
};

// Mean execution time of a task over all nodes.
inline double mean_exec_time(const ProblemInstance& inst, std::size_t task) {
  const auto& net = inst.network;
  double inv = 0.0;
  for (std::size_t v = 0; v < net.size(); ++v) inv += 1.0 / net.speed(v);
  return inst.task_graph.cost(task) * inv / static_cast<double>(net.size());
}

// Mean of 1/strength over unordered pairs of distinct nodes; 0 on a
// single-node network.
inline double mean_inverse_strength(const Network& net) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < net.size(); ++a)
    for (std::size_t b = a + 1; b < net.size(); ++b) {
      sum += 1.0 / net.strength(a, b);
      ++pairs;
    }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

inline RankTables upward_rank(const ProblemInstance& inst) {
  const auto& g = inst.task_graph;
  const double inv_strength = mean_inverse_strength(inst.network);
  RankTables r;
  r.upward.assign(g.size(), 0.0);
  const auto& topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    double tail = 0.0;
    for (const auto& s : g.successors(*it))
      tail = std::max(tail, s.size * inv_strength + r.upward[s.task]);
    r.upward[*it] = mean_exec_time(inst, *it) + tail;
  }
  return r;
}

inline RankTables downward_rank(const ProblemInstance& inst) {
  const auto& g = inst.task_graph;
  const double inv_strength = mean_inverse_strength(inst.network);
  RankTables r;
  r.downward.assign(g.size(), 0.0);
  for (auto t : g.topological_order()) {
    double head = 0.0;
    for (const auto& p : g.predecessors(t))
      head = std::max(head, r.downward[p.task] + mean_exec_time(inst, p.task) +
                                p.size * inv_strength);
    r.downward[t] = head;
  }
  return r;
}

inline RankTables rank_tables(const ProblemInstance& inst) {
  return {upward_rank(inst).upward, downward_rank(inst).downward};
}

inline PriorityMap priority_map(const ProblemInstance& inst, PriorityKind kind) {
  const auto& g = inst.task_graph;
  PriorityMap m;
  switch (kind) {
    case PriorityKind::UpwardRanking:
      m.value = upward_rank(inst).upward;
      break;
    case PriorityKind::CPoPRanking: {
      auto r = rank_tables(inst);
      m.value.resize(g.size());
      for (std::size_t t = 0; t < g.size(); ++t) m.value[t] = r.upward[t] + r.downward[t];
      break;
    }
    case PriorityKind::ArbitraryTopological: {
      m.value.resize(g.size());
      const auto& pos = g.topological_position();
      for (std::size_t t = 0; t < g.size(); ++t)
        m.value[t] = static_cast<double>(g.size() - pos[t]);
      break;
    }
  }
  return m;
}

/// Strict total order over tasks: higher priority first, then earlier
/// topological position, then task id.
inline bool higher_priority(const TaskGraph& g, const PriorityMap& p, std::size_t a,
                            std::size_t b) {
  if (p.value[a] != p.value[b]) return p.value[a] > p.value[b];
  const auto& pos = g.topological_position();
  if (pos[a] != pos[b]) return pos[a] < pos[b];
  return a < b;
}

/// All task indices sorted by `higher_priority`.
inline std::vector<std::size_t> priority_order(const TaskGraph& g, const PriorityMap& p) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::sort(order, [&](auto a, auto b) { return higher_priority(g, p, a, b); });
  return order;
}

/// Indices of tasks whose rank_u + rank_d reaches the maximum (relative
/// tolerance 1e-9), in topological order.
inline std::vector<std::size_t> critical_path_indices(const ProblemInstance& inst) {
  const auto& g = inst.task_graph;
  if (g.empty()) return {};
  auto r = rank_tables(inst);
  double best = 0.0;
  for (std::size_t t = 0; t < g.size(); ++t) best = std::max(best, r.upward[t] + r.downward[t]);
  std::vector<std::size_t> out;
  for (auto t : g.topological_order())
    if (r.upward[t] + r.downward[t] >= best - 1e-9 * best) out.push_back(t);
  return out;
}

inline std::vector<TaskId> critical_path_tasks(const ProblemInstance& inst) {
  std::vector<TaskId> out;
  for (auto t : critical_path_indices(inst)) out.push_back(inst.task_graph.id(t));
  return out;
}

}  // namespace paramsched
