#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "paramsched/model.hpp"
#include "paramsched/priority.hpp"
#include "paramsched/selection.hpp"

namespace paramsched {

/// One point of the 3 x 3 x 2 x 2 x 2 component space.
struct SchedulerConfig {
  PriorityKind initial_priority = PriorityKind::UpwardRanking;
  CompareKind compare = CompareKind::EFT;
  bool append_only = false;
  bool critical_path = false;
  bool sufferage = false;

  friend bool operator==(const SchedulerConfig&, const SchedulerConfig&) = default;
};

inline std::string_view priority_abbrev(PriorityKind k) {
  switch (k) {
    case PriorityKind::UpwardRanking: return "UR";
    case PriorityKind::CPoPRanking: return "CR";
    case PriorityKind::ArbitraryTopological: return "AT";
  }
  return "?";
}

/// Canonical name, e.g. "EFT_Ins_UR_Suf" or "EST_App_CP_AT".
inline std::string canonical_name(const SchedulerConfig& c) {
  std::string name(to_string(c.compare));
  name += c.append_only ? "_App" : "_Ins";
  if (c.critical_path) name += "_CP";
  name += '_';
  name += priority_abbrev(c.initial_priority);
  if (c.sufferage) name += "_Suf";
  return name;
}

/// Literature name for the configurations that have one.
inline std::optional<std::string> alias_of(const SchedulerConfig& c) {
  if (c.critical_path) return std::nullopt;
  using enum PriorityKind;
  if (c.initial_priority == UpwardRanking && c.compare == CompareKind::EFT && !c.append_only &&
      !c.sufferage)
    return "HEFT";
  if (c.initial_priority != ArbitraryTopological || !c.append_only) return std::nullopt;
  if (c.compare == CompareKind::EFT) return c.sufferage ? "Sufferage" : "MCT";
  if (c.compare == CompareKind::Quickest && !c.sufferage) return "MET";
  return std::nullopt;
}

struct NamedConfig {
  std::string name;
  std::optional<std::string> alias;
  SchedulerConfig config;
};

/// All 72 configurations, ordered by (priority, compare, append_only,
/// critical_path, sufferage).
inline std::vector<NamedConfig> enumerate_configs() {
  std::vector<NamedConfig> out;
  out.reserve(72);
  for (auto p : all_priority_kinds)
    for (auto c : all_compare_kinds)
      for (bool app : {false, true})
        for (bool cp : {false, true})
          for (bool suf : {false, true}) {
            SchedulerConfig cfg{p, c, app, cp, suf};
            out.push_back({canonical_name(cfg), alias_of(cfg), cfg});
          }
  return out;
}

/// Accepts canonical names and aliases.
inline std::optional<SchedulerConfig> parse_scheduler_name(std::string_view name) {
  for (const auto& nc : enumerate_configs())
    if (nc.name == name || (nc.alias && *nc.alias == name)) return nc.config;
  return std::nullopt;
}

struct NodeChoice {
  std::size_t best = 0;
  Window best_window;
  std::optional<std::size_t> second;
  std::optional<Window> second_window;
};

/// Best and runner-up nodes for `task` among `candidates` under `kind`.
/// The first candidate wins ties.
inline NodeChoice best_two_nodes(const ProblemInstance& inst, const PartialSchedule& partial,
                                 std::size_t task, std::span<const std::size_t> candidates,
                                 CompareKind kind, WindowFinder find_window) {
  if (candidates.empty()) throw precondition_error("best_two_nodes: no candidate nodes");
  NodeChoice c;
  c.best = candidates.front();
  c.best_window = find_window(inst, partial, c.best, task);
  for (auto u : candidates.subspan(1)) {
    Window w = find_window(inst, partial, u, task);
    if (compare(kind, w, c.best_window) < 0) {
      c.second = c.best;
      c.second_window = c.best_window;
      c.best = u;
      c.best_window = w;
    } else if (!c.second || compare(kind, w, *c.second_window) < 0) {
      c.second = u;
      c.second_window = w;
    }
  }
  return c;
}

/// Schedule plus the order in which tasks were committed.
struct ScheduleTrace {
  Schedule schedule;
  std::vector<std::size_t> commit_order;
};

namespace detail {

inline double sufferage_value(CompareKind kind, const NodeChoice& c) {
  return c.second_window ? compare(kind, *c.second_window, c.best_window) : 0.0;
}

}  // namespace detail

// Each iteration takes the highest-priority task among those whose
// predecessors are all placed, so the commit order is always topological.
// With sufferage enabled the runner-up ready task competes for the slot and
// the loser stays queued. Critical-path tasks are restricted to the fastest
// node, which makes their sufferage 0.
inline ScheduleTrace schedule_with_trace(const ProblemInstance& inst,
                                         const SchedulerConfig& config) {
  const auto& g = inst.task_graph;
  const auto& net = inst.network;
  if (net.empty()) throw invalid_instance("network has no nodes");

  const auto priority = priority_map(inst, config.initial_priority);
  std::vector<std::size_t> rank(g.size());
  {
    auto order = priority_order(g, priority);
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  }

  std::vector<std::size_t> all_nodes(net.size());
  for (std::size_t v = 0; v < net.size(); ++v) all_nodes[v] = v;

  std::vector<bool> pinned(g.size(), false);
  std::size_t reserved = 0;
  if (config.critical_path) {
    for (std::size_t v = 1; v < net.size(); ++v)
      if (net.speed(v) > net.speed(reserved)) reserved = v;
    for (auto t : critical_path_indices(inst)) pinned[t] = true;
  }
  const std::size_t reserved_only[] = {reserved};
  auto candidates_for = [&](std::size_t t) -> std::span<const std::size_t> {
    if (pinned[t]) return reserved_only;
    return all_nodes;
  };

  auto by_rank = [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; };
  std::set<std::size_t, decltype(by_rank)> ready(by_rank);
  std::vector<std::size_t> waiting(g.size());
  for (std::size_t t = 0; t < g.size(); ++t) {
    waiting[t] = g.predecessors(t).size();
    if (waiting[t] == 0) ready.insert(t);
  }

  const WindowFinder find = window_finder(config.append_only);
  PartialSchedule partial(inst);
  while (!ready.empty()) {
    std::size_t task = *ready.begin();
    NodeChoice choice = best_two_nodes(inst, partial, task, candidates_for(task), config.compare, find);

    if (config.sufferage && ready.size() >= 2) {
      std::size_t other = *std::next(ready.begin());
      NodeChoice other_choice =
          best_two_nodes(inst, partial, other, candidates_for(other), config.compare, find);
      if (detail::sufferage_value(config.compare, other_choice) >
          detail::sufferage_value(config.compare, choice)) {
        task = other;
        choice = other_choice;
      }
    }

    partial.add(task, choice.best, choice.best_window.start, choice.best_window.end);
    ready.erase(task);
    for (const auto& s : g.successors(task))
      if (--waiting[s.task] == 0) ready.insert(s.task);
  }

  return {partial.to_schedule(inst), partial.insertion_order()};
}

inline Schedule schedule(const ProblemInstance& inst, const SchedulerConfig& config) {
  return schedule_with_trace(inst, config).schedule;
}

}  // namespace paramsched
