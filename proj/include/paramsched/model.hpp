#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace paramsched {

// Errors ------------------------------------------------------------------

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown task, node or dependency identifier.
class lookup_error : public error {
 public:
  using error::error;
};

// A caller broke an operation's precondition (e.g. unscheduled predecessor).
class precondition_error : public error {
 public:
  using error::error;
};

// Structural problem with an instance: cycle, nonpositive weight, missing link.
class invalid_instance : public error {
 public:
  using error::error;
};

class cycle_error : public invalid_instance {
 public:
  using invalid_instance::invalid_instance;
};

// Identifiers -------------------------------------------------------------

// Opaque identifier ordered lexicographically on its string form. The tag
// keeps task and node ids from being mixed up.
template <class Tag>
struct basic_id {
  std::string value;

  basic_id() = default;
  basic_id(std::string v) : value(std::move(v)) {}
  basic_id(const char* v) : value(v) {}

  friend auto operator<=>(const basic_id&, const basic_id&) = default;
  friend bool operator==(const basic_id&, const basic_id&) = default;
};

using TaskId = basic_id<struct task_tag>;
using NodeId = basic_id<struct node_tag>;

// Task graph --------------------------------------------------------------

struct Task {
  TaskId id;
  double cost = 1.0;
};

struct Dependency {
  TaskId src;
  TaskId dst;
  double size = 1.0;
};

/// Weighted DAG of tasks and data dependencies.
///
/// Tasks are stored sorted by id, so a task's index is also its rank in the
/// deterministic id order. Construction validates every structural
/// invariant (positive weights, known endpoints, acyclicity) and throws
/// `invalid_instance` / `cycle_error` otherwise.
class TaskGraph {
 public:
  struct Edge {
    std::size_t task;
    double size;
  };

  TaskGraph() = default;

  TaskGraph(std::vector<Task> tasks, std::vector<Dependency> deps) {
    std::ranges::sort(tasks, {}, &Task::id);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (i > 0 && tasks[i].id == tasks[i - 1].id)
        throw invalid_instance("duplicate task id '" + tasks[i].id.value + "'");
      if (!(tasks[i].cost > 0.0) || !std::isfinite(tasks[i].cost))
        throw invalid_instance("task '" + tasks[i].id.value + "' has nonpositive cost");
    }
    tasks_ = std::move(tasks);
    succ_.resize(tasks_.size());
    pred_.resize(tasks_.size());

    for (const auto& d : deps) {
      auto s = find(d.src);
      auto t = find(d.dst);
      if (!s || !t)
        throw invalid_instance("dependency " + d.src.value + "->" + d.dst.value +
                               " references an unknown task");
      if (*s == *t) throw cycle_error("self dependency on '" + d.src.value + "'");
      if (!(d.size > 0.0) || !std::isfinite(d.size))
        throw invalid_instance("dependency " + d.src.value + "->" + d.dst.value +
                               " has nonpositive size");
      if (edge_index_.contains({*s, *t}))
        throw invalid_instance("duplicate dependency " + d.src.value + "->" + d.dst.value);
      edge_index_.emplace(std::pair{*s, *t}, d.size);
      succ_[*s].push_back({*t, d.size});
      pred_[*t].push_back({*s, d.size});
    }
    for (auto& v : succ_) std::ranges::sort(v, {}, &Edge::task);
    for (auto& v : pred_) std::ranges::sort(v, {}, &Edge::task);
    compute_topological_order();
  }

  std::size_t size() const noexcept { return tasks_.size(); }
  bool empty() const noexcept { return tasks_.empty(); }
  std::size_t dep_count() const noexcept { return edge_index_.size(); }

  const TaskId& id(std::size_t i) const { return tasks_.at(i).id; }
  double cost(std::size_t i) const { return tasks_.at(i).cost; }
  const std::vector<Task>& tasks() const noexcept { return tasks_; }

  std::optional<std::size_t> find(const TaskId& id) const {
    auto it = std::ranges::lower_bound(tasks_, id, {}, &Task::id);
    if (it == tasks_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - tasks_.begin());
  }

  std::size_t index_of(const TaskId& id) const {
    if (auto i = find(id)) return *i;
    throw lookup_error("unknown task '" + id.value + "'");
  }

  std::span<const Edge> successors(std::size_t i) const { return succ_.at(i); }
  std::span<const Edge> predecessors(std::size_t i) const { return pred_.at(i); }

  bool has_dep(std::size_t src, std::size_t dst) const {
    return edge_index_.contains({src, dst});
  }

  double data_size(std::size_t src, std::size_t dst) const {
    auto it = edge_index_.find({src, dst});
    if (it == edge_index_.end())
      throw lookup_error("no dependency " + id(src).value + "->" + id(dst).value);
    return it->second;
  }

  /// Dependencies in (src, dst) index order.
  std::vector<Dependency> deps() const {
    std::vector<Dependency> out;
    out.reserve(edge_index_.size());
    for (const auto& [key, size] : edge_index_)
      out.push_back({id(key.first), id(key.second), size});
    return out;
  }

  /// Kahn's order with the ready set ordered by task id.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

  /// Position of each task within topological_order().
  const std::vector<std::size_t>& topological_position() const noexcept { return topo_pos_; }

 private:
  void compute_topological_order() {
    std::vector<std::size_t> indegree(size());
    for (std::size_t i = 0; i < size(); ++i) indegree[i] = pred_[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < size(); ++i)
      if (indegree[i] == 0) ready.push(i);
    topo_.clear();
    topo_.reserve(size());
    while (!ready.empty()) {
      auto t = ready.top();
      ready.pop();
      topo_.push_back(t);
      for (const auto& e : succ_[t])
        if (--indegree[e.task] == 0) ready.push(e.task);
    }
    if (topo_.size() != size()) throw cycle_error("task graph contains a cycle");
    topo_pos_.assign(size(), 0);
    for (std::size_t k = 0; k < topo_.size(); ++k) topo_pos_[topo_[k]] = k;
  }

  std::vector<Task> tasks_;
  std::vector<std::vector<Edge>> succ_;
  std::vector<std::vector<Edge>> pred_;
  std::map<std::pair<std::size_t, std::size_t>, double> edge_index_;
  std::vector<std::size_t> topo_;
  std::vector<std::size_t> topo_pos_;
};

// Network -----------------------------------------------------------------

struct Node {
  NodeId id;
  double speed = 1.0;
};

struct Link {
  NodeId u;
  NodeId v;
  double strength = 1.0;
};

/// Complete undirected network of compute nodes. Nodes are sorted by id;
/// every unordered pair of distinct nodes must carry exactly one link.
class Network {
 public:
  Network() = default;

  Network(std::vector<Node> nodes, std::vector<Link> links) {
    std::ranges::sort(nodes, {}, &Node::id);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i > 0 && nodes[i].id == nodes[i - 1].id)
        throw invalid_instance("duplicate node id '" + nodes[i].id.value + "'");
      if (!(nodes[i].speed > 0.0) || !std::isfinite(nodes[i].speed))
        throw invalid_instance("node '" + nodes[i].id.value + "' has nonpositive speed");
    }
    nodes_ = std::move(nodes);
    const auto n = nodes_.size();
    strength_.assign(n * n, 0.0);
    for (const auto& l : links) {
      auto a = find(l.u);
      auto b = find(l.v);
      if (!a || !b)
        throw invalid_instance("link " + l.u.value + "-" + l.v.value +
                               " references an unknown node");
      if (*a == *b) throw invalid_instance("self link on '" + l.u.value + "'");
      if (!(l.strength > 0.0) || !std::isfinite(l.strength))
        throw invalid_instance("link " + l.u.value + "-" + l.v.value +
                               " has nonpositive strength");
      if (strength_[*a * n + *b] != 0.0)
        throw invalid_instance("duplicate link " + l.u.value + "-" + l.v.value);
      strength_[*a * n + *b] = l.strength;
      strength_[*b * n + *a] = l.strength;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (strength_[i * n + j] == 0.0)
          throw invalid_instance("missing link " + nodes_[i].id.value + "-" +
                                 nodes_[j].id.value + " (network must be complete)");
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const NodeId& id(std::size_t i) const { return nodes_.at(i).id; }
  double speed(std::size_t i) const { return nodes_.at(i).speed; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  /// Link strength between two distinct nodes.
  double strength(std::size_t a, std::size_t b) const {
    if (a >= size() || b >= size()) throw lookup_error("node index out of range");
    if (a == b) throw precondition_error("strength is undefined for a node and itself");
    return strength_[a * size() + b];
  }

  std::optional<std::size_t> find(const NodeId& id) const {
    auto it = std::ranges::lower_bound(nodes_, id, {}, &Node::id);
    if (it == nodes_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
  }

  std::size_t index_of(const NodeId& id) const {
    if (auto i = find(id)) return *i;
    throw lookup_error("unknown node '" + id.value + "'");
  }

  /// One link per unordered pair, (i < j) order.
  std::vector<Link> links() const {
    std::vector<Link> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        out.push_back({id(i), id(j), strength_[i * size() + j]});
    return out;
  }

  Network with_scaled_strengths(double factor) const {
    auto ls = links();
    for (auto& l : ls) l.strength *= factor;
    return Network(nodes_, std::move(ls));
  }

 private:
  std::vector<Node> nodes_;
  std::vector<double> strength_;
};

struct ProblemInstance {
  Network network;
  TaskGraph task_graph;
};

// Schedules ---------------------------------------------------------------

struct ScheduleEntry {
  TaskId task;
  NodeId node;
  double start = 0.0;
  double end = 0.0;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;
};

// Timing primitives -------------------------------------------------------

inline double exec_time(const ProblemInstance& inst, std::size_t task, std::size_t node) {
  return inst.task_graph.cost(task) / inst.network.speed(node);
}

inline double exec_time(const ProblemInstance& inst, const TaskId& task, const NodeId& node) {
  return exec_time(inst, inst.task_graph.index_of(task), inst.network.index_of(node));
}

/// Transfer time of `size` data units between two nodes; zero on the same node.
inline double transfer_time(const Network& net, double size, std::size_t src, std::size_t dst) {
  if (src == dst) return 0.0;
  return size / net.strength(src, dst);
}

inline double comm_time(const ProblemInstance& inst, std::size_t src_task,
                        std::size_t dst_task, std::size_t src_node, std::size_t dst_node) {
  return transfer_time(inst.network, inst.task_graph.data_size(src_task, dst_task), src_node,
                       dst_node);
}

inline double comm_time(const ProblemInstance& inst, const std::pair<TaskId, TaskId>& dep,
                        const NodeId& src, const NodeId& dst) {
  const auto& g = inst.task_graph;
  return comm_time(inst, g.index_of(dep.first), g.index_of(dep.second),
                   inst.network.index_of(src), inst.network.index_of(dst));
}

inline double makespan(const Schedule& s) {
  double m = 0.0;
  for (const auto& e : s.entries) m = std::max(m, e.end);
  return m;
}

/// Index-based schedule under construction. Per-node slot lists are kept
/// sorted by start time so the window finders can scan gaps directly.
class PartialSchedule {
 public:
  struct Slot {
    std::size_t task;
    std::size_t node;
    double start;
    double end;
  };

  PartialSchedule() = default;
  explicit PartialSchedule(const ProblemInstance& inst)
      : assigned_(inst.task_graph.size()), per_node_(inst.network.size()) {}

  /// Throws precondition_error on a task scheduled twice, lookup_error on
  /// unknown ids.
  static PartialSchedule from_schedule(const ProblemInstance& inst, const Schedule& s) {
    PartialSchedule p(inst);
    for (const auto& e : s.entries) {
      auto t = inst.task_graph.index_of(e.task);
      auto n = inst.network.index_of(e.node);
      if (p.is_scheduled(t))
        throw precondition_error("task '" + e.task.value + "' appears more than once");
      p.add(t, n, e.start, e.end);
    }
    return p;
  }

  bool is_scheduled(std::size_t task) const { return assigned_.at(task).has_value(); }

  const Slot& slot(std::size_t task) const {
    const auto& a = assigned_.at(task);
    if (!a) throw precondition_error("task index " + std::to_string(task) + " is not scheduled");
    return *a;
  }

  std::span<const Slot> on_node(std::size_t node) const { return per_node_.at(node); }

  /// Latest end time on a node, 0 when the node is idle.
  double node_finish(std::size_t node) const {
    double f = 0.0;
    for (const auto& s : per_node_.at(node)) f = std::max(f, s.end);
    return f;
  }

  void add(std::size_t task, std::size_t node, double start, double end) {
    if (is_scheduled(task))
      throw precondition_error("task index " + std::to_string(task) + " already scheduled");
    Slot s{task, node, start, end};
    assigned_.at(task) = s;
    auto& lane = per_node_.at(node);
    auto pos = std::ranges::upper_bound(lane, start, {}, &Slot::start);
    lane.insert(pos, s);
    order_.push_back(task);
  }

  std::size_t scheduled_count() const noexcept { return order_.size(); }

  /// Tasks in the order they were added.
  const std::vector<std::size_t>& insertion_order() const noexcept { return order_; }

  Schedule to_schedule(const ProblemInstance& inst) const {
    Schedule out;
    out.entries.reserve(order_.size());
    for (auto t : order_) {
      const auto& s = *assigned_[t];
      out.entries.push_back(
          {inst.task_graph.id(s.task), inst.network.id(s.node), s.start, s.end});
    }
    return out;
  }

 private:
  std::vector<std::optional<Slot>> assigned_;
  std::vector<std::vector<Slot>> per_node_;
  std::vector<std::size_t> order_;
};

/// Earliest time all input data of `task` can be present on `node`.
inline double data_available_time(const ProblemInstance& inst, const PartialSchedule& partial,
                                  std::size_t task, std::size_t node) {
  double dat = 0.0;
  for (const auto& p : inst.task_graph.predecessors(task)) {
    if (!partial.is_scheduled(p.task))
      throw precondition_error("predecessor '" + inst.task_graph.id(p.task).value + "' of '" +
                               inst.task_graph.id(task).value + "' is not scheduled");
    const auto& s = partial.slot(p.task);
    dat = std::max(dat, s.end + transfer_time(inst.network, p.size, s.node, node));
  }
  return dat;
}

inline double data_available_time(const ProblemInstance& inst, const Schedule& partial,
                                  const TaskId& task, const NodeId& node) {
  return data_available_time(inst, PartialSchedule::from_schedule(inst, partial),
                             inst.task_graph.index_of(task), inst.network.index_of(node));
}

// Validation --------------------------------------------------------------

enum class ViolationKind {
  UnscheduledTask,
  DuplicateTask,
  WrongDuration,
  NodeOverlap,
  PrecedenceViolation,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::UnscheduledTask: return "UnscheduledTask";
    case ViolationKind::DuplicateTask: return "DuplicateTask";
    case ViolationKind::WrongDuration: return "WrongDuration";
    case ViolationKind::NodeOverlap: return "NodeOverlap";
    case ViolationKind::PrecedenceViolation: return "PrecedenceViolation";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::string detail;
};

namespace detail {

inline double time_tolerance(double magnitude) { return 1e-9 * std::max(1.0, std::abs(magnitude)); }

inline std::string describe(const ScheduleEntry& e) {
  return "(" + e.task.value + " on " + e.node.value + " [" + std::to_string(e.start) + ", " +
         std::to_string(e.end) + "])";
}

}  // namespace detail

/// Checks every validity rule and reports all violations found. Entries
/// naming unknown tasks or nodes raise lookup_error.
inline std::vector<Violation> validate_schedule(const ProblemInstance& inst,
                                                const Schedule& schedule) {
  const auto& g = inst.task_graph;
  const auto& net = inst.network;
  std::vector<Violation> out;

  struct Resolved {
    std::size_t task;
    std::size_t node;
  };
  std::vector<Resolved> resolved;
  resolved.reserve(schedule.entries.size());
  for (const auto& e : schedule.entries)
    resolved.push_back({g.index_of(e.task), net.index_of(e.node)});

  // First occurrence of each task, used for precedence checks.
  std::vector<std::optional<std::size_t>> first(g.size());
  for (std::size_t k = 0; k < resolved.size(); ++k) {
    auto t = resolved[k].task;
    if (first[t]) {
      out.push_back({ViolationKind::DuplicateTask,
                     "task " + g.id(t).value + " scheduled again as " +
                         detail::describe(schedule.entries[k])});
    } else {
      first[t] = k;
    }
  }
  for (auto t : g.topological_order())
    if (!first[t]) out.push_back({ViolationKind::UnscheduledTask, "task " + g.id(t).value + " is not scheduled"});

  for (std::size_t k = 0; k < resolved.size(); ++k) {
    const auto& e = schedule.entries[k];
    double expected = exec_time(inst, resolved[k].task, resolved[k].node);
    if (!(std::abs(e.end - e.start - expected) <= detail::time_tolerance(expected)) ||
        e.start < 0.0)
      out.push_back({ViolationKind::WrongDuration,
                     detail::describe(e) + " should last " + std::to_string(expected)});
  }

  for (std::size_t a = 0; a < resolved.size(); ++a) {
    for (std::size_t b = a + 1; b < resolved.size(); ++b) {
      if (resolved[a].node != resolved[b].node) continue;
      const auto& x = schedule.entries[a];
      const auto& y = schedule.entries[b];
      double tol = detail::time_tolerance(std::max(x.end, y.end));
      if (x.start < y.end - tol && y.start < x.end - tol)
        out.push_back({ViolationKind::NodeOverlap,
                       detail::describe(x) + " overlaps " + detail::describe(y)});
    }
  }

  for (std::size_t k = 0; k < resolved.size(); ++k) {
    const auto& e = schedule.entries[k];
    auto t = resolved[k].task;
    for (const auto& p : g.predecessors(t)) {
      if (!first[p.task]) continue;
      const auto& pe = schedule.entries[*first[p.task]];
      double ready = pe.end + transfer_time(net, p.size, resolved[*first[p.task]].node, resolved[k].node);
      if (e.start < ready - detail::time_tolerance(ready))
        out.push_back({ViolationKind::PrecedenceViolation,
                       detail::describe(e) + " starts before data from " + detail::describe(pe) +
                           " arrives at " + std::to_string(ready)});
    }
  }
  return out;
}

}  // namespace paramsched
