#pragma once

#include <algorithm>
#include <string_view>

#include "paramsched/model.hpp"

namespace paramsched {

/// Candidate execution interval of one task on one node.
struct Window {
  double start = 0.0;
  double end = 0.0;

  double duration() const noexcept { return end - start; }
  friend bool operator==(const Window&, const Window&) = default;
};

enum class CompareKind { EFT, EST, Quickest };

inline constexpr CompareKind all_compare_kinds[] = {CompareKind::EFT, CompareKind::EST,
                                                    CompareKind::Quickest};

inline std::string_view to_string(CompareKind k) {
  switch (k) {
    case CompareKind::EFT: return "EFT";
    case CompareKind::EST: return "EST";
    case CompareKind::Quickest: return "Quickest";
  }
  return "?";
}

// Negative iff `a` is strictly better than `b`.
inline double compare(CompareKind kind, const Window& a, const Window& b) {
  switch (kind) {
    case CompareKind::EFT: return a.end - b.end;
    case CompareKind::EST: return a.start - b.start;
    case CompareKind::Quickest: return a.duration() - b.duration();
  }
  return 0.0;
}

/// Earliest window after the last task already placed on `node`.
inline Window open_window_append_only(const ProblemInstance& inst,
                                      const PartialSchedule& partial, std::size_t node,
                                      std::size_t task) {
  double start = std::max(partial.node_finish(node),
                          data_available_time(inst, partial, task, node));
  return {start, start + exec_time(inst, task, node)};
}

/// Earliest idle window on `node` long enough for `task`, including the gap
/// before the first placed task. Falls back to appending.
inline Window open_window_insertion(const ProblemInstance& inst, const PartialSchedule& partial,
                                    std::size_t node, std::size_t task) {
  const double dat = data_available_time(inst, partial, task, node);
  const double duration = exec_time(inst, task, node);
  double free_from = 0.0;
  for (const auto& slot : partial.on_node(node)) {
    double start = std::max(free_from, dat);
    if (start + duration <= slot.start) return {start, start + duration};
    free_from = std::max(free_from, slot.end);
  }
  double start = std::max(free_from, dat);
  return {start, start + duration};
}

using WindowFinder = Window (*)(const ProblemInstance&, const PartialSchedule&, std::size_t,
                                std::size_t);

inline WindowFinder window_finder(bool append_only) {
  return append_only ? &open_window_append_only : &open_window_insertion;
}

inline Window open_window_append_only(const ProblemInstance& inst, const Schedule& partial,
                                      const NodeId& node, const TaskId& task) {
  return open_window_append_only(inst, PartialSchedule::from_schedule(inst, partial),
                                 inst.network.index_of(node), inst.task_graph.index_of(task));
}

inline Window open_window_insertion(const ProblemInstance& inst, const Schedule& partial,
                                    const NodeId& node, const TaskId& task) {
  return open_window_insertion(inst, PartialSchedule::from_schedule(inst, partial),
                               inst.network.index_of(node), inst.task_graph.index_of(task));
}

}  // namespace paramsched
