#pragma once

// Test-only helpers: small instance builders, a random instance generator
// that does not share code with the library's dataset generator, and
// brute-force oracles for rank and path properties.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "paramsched/paramsched.hpp"

namespace paramsched::testing {

inline Network uniform_network(std::size_t n, double speed = 1.0, double strength = 1.0) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({"n" + std::to_string(i + 1), speed});
  std::vector<Link> links;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) links.push_back({nodes[i].id, nodes[j].id, strength});
  return Network(nodes, links);
}

inline Network network_with_speeds(const std::vector<double>& speeds, double strength = 1.0) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < speeds.size(); ++i) nodes.push_back({"n" + std::to_string(i + 1), speeds[i]});
  std::vector<Link> links;
  for (std::size_t i = 0; i < speeds.size(); ++i)
    for (std::size_t j = i + 1; j < speeds.size(); ++j) links.push_back({nodes[i].id, nodes[j].id, strength});
  return Network(nodes, links);
}

/// Chain A -> B with c(A)=1, c(B)=2, size 1 on two unit nodes.
inline ProblemInstance chain_ab() {
  return {uniform_network(2), TaskGraph({{"A", 1.0}, {"B", 2.0}}, {{"A", "B", 1.0}})};
}

struct RandomInstanceOptions {
  std::size_t min_tasks = 1;
  std::size_t max_tasks = 8;
  std::size_t min_nodes = 1;
  std::size_t max_nodes = 4;
  double edge_probability = 0.35;
};

/// Random DAG over a shuffled id order (so id order differs from any
/// topological order) on a random complete network. Speeds sometimes come
/// from a small discrete set to create ties.
inline ProblemInstance random_instance(std::mt19937_64& rng, const RandomInstanceOptions& opt = {}) {
  auto uniform_size = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto uniform_real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  const std::size_t nt = uniform_size(opt.min_tasks, opt.max_tasks);
  const std::size_t nn = uniform_size(opt.min_nodes, opt.max_nodes);

  std::vector<std::string> names;
  for (std::size_t i = 0; i < nt; ++i) names.push_back("t" + std::to_string(i));
  std::shuffle(names.begin(), names.end(), rng);

  std::vector<Task> tasks;
  for (const auto& n : names) tasks.push_back({n, uniform_real(0.1, 2.0)});
  std::vector<Dependency> deps;
  std::bernoulli_distribution edge(opt.edge_probability);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = i + 1; j < nt; ++j)
      if (edge(rng)) deps.push_back({names[i], names[j], uniform_real(0.1, 2.0)});

  const bool discrete = std::bernoulli_distribution(0.3)(rng);
  const double choices[] = {0.5, 1.0, 1.0, 2.0};
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < nn; ++i)
    nodes.push_back({"v" + std::to_string(i), discrete ? choices[uniform_size(0, 3)] : uniform_real(0.25, 2.0)});
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::vector<Link> links;
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = i + 1; j < nn; ++j) links.push_back({nodes[i].id, nodes[j].id, uniform_real(0.2, 3.0)});
  return {Network(nodes, links), TaskGraph(tasks, deps)};
}

// Mean-estimate weights recomputed from first principles.
inline double mean_weight(const ProblemInstance& inst, std::size_t t) {
  double s = 0.0;
  for (const auto& n : inst.network.nodes()) s += inst.task_graph.cost(t) / n.speed;
  return s / static_cast<double>(inst.network.size());
}

inline double mean_edge_weight(const ProblemInstance& inst, std::size_t a, std::size_t b) {
  const auto links = inst.network.links();
  if (links.empty()) return 0.0;
  double s = 0.0;
  for (const auto& l : links) s += inst.task_graph.data_size(a, b) / l.strength;
  return s / static_cast<double>(links.size());
}

/// Every maximal path (source to sink) by explicit enumeration.
inline std::vector<std::vector<std::size_t>> all_maximal_paths(const TaskGraph& g) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::function<void(std::size_t)> walk = [&](std::size_t t) {
    path.push_back(t);
    if (g.successors(t).empty()) out.push_back(path);
    for (const auto& s : g.successors(t)) walk(s.task);
    path.pop_back();
  };
  for (std::size_t t = 0; t < g.size(); ++t)
    if (g.predecessors(t).empty()) walk(t);
  return out;
}

inline double path_length(const ProblemInstance& inst, const std::vector<std::size_t>& path) {
  double len = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    len += mean_weight(inst, path[k]);
    if (k + 1 < path.size()) len += mean_edge_weight(inst, path[k], path[k + 1]);
  }
  return len;
}

/// Longest weighted path starting at `t`, by enumeration.
inline double longest_path_from(const ProblemInstance& inst, std::size_t t) {
  double best = 0.0;
  std::vector<std::size_t> path;
  std::function<void(std::size_t)> walk = [&](std::size_t u) {
    path.push_back(u);
    if (inst.task_graph.successors(u).empty()) best = std::max(best, path_length(inst, path));
    for (const auto& s : inst.task_graph.successors(u)) walk(s.task);
    path.pop_back();
  };
  walk(t);
  return best;
}

inline bool near(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace paramsched::testing
