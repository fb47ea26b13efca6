#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "paramsched/io.hpp"
#include "paramsched/model.hpp"

namespace paramsched {

/// Seedable generator with portable distributions. The engine's output
/// sequence is fixed by the standard; the distributions are written out
/// here because the standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal(double mean, double stddev) {
    // Marsaglia polar method, one value per call.
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return mean + stddev * u * std::sqrt(-2.0 * std::log(s) / s);
  }

 private:
  std::mt19937_64 engine_;
};

/// Independent per-index seed (splitmix64 finalizer over seed and index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Gaussian(1, 1/3) redrawn until it falls in (0, 2].
inline double sample_weight(Rng& rng) {
  for (;;) {
    double x = rng.normal(1.0, 1.0 / 3.0);
    if (x > 0.0 && x <= 2.0) return x;
  }
}

namespace detail {

inline std::string padded_id(char prefix, std::size_t i, std::size_t count) {
  std::size_t width = 3;
  for (std::size_t c = count > 0 ? count - 1 : 0; c >= 1000; c /= 10) ++width;
  std::string digits = std::to_string(i);
  return std::string(1, prefix) + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace detail

enum class TreeDirection { In, Out };

/// Perfect `branching`-ary tree with `levels` levels, numbered breadth-first
/// from the root. Out-trees point root to leaves, in-trees leaves to root.
inline TaskGraph gen_tree(Rng& rng, TreeDirection direction, int levels, int branching) {
  if (levels < 1 || branching < 1) throw precondition_error("gen_tree: levels and branching must be >= 1");
  std::size_t count = 0;
  for (std::size_t i = 0, width = 1; i < static_cast<std::size_t>(levels); ++i, width *= branching)
    count += width;

  std::vector<Task> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) tasks.push_back({detail::padded_id('t', i, count), sample_weight(rng)});

  std::vector<Dependency> deps;
  for (std::size_t child = 1; child < count; ++child) {
    std::size_t parent = (child - 1) / branching;
    const auto& p = tasks[parent].id;
    const auto& c = tasks[child].id;
    double size = sample_weight(rng);
    if (direction == TreeDirection::Out)
      deps.push_back({p, c, size});
    else
      deps.push_back({c, p, size});
  }
  return TaskGraph(std::move(tasks), std::move(deps));
}

inline TaskGraph gen_tree(Rng& rng, TreeDirection direction) {
  int levels = static_cast<int>(rng.uniform_int(2, 4));
  int branching = static_cast<int>(rng.uniform_int(2, 3));
  return gen_tree(rng, direction, levels, branching);
}

/// Parallel chains of the given lengths between a shared source and sink.
inline TaskGraph gen_chains(Rng& rng, const std::vector<int>& lengths) {
  std::size_t count = 2;
  for (int len : lengths) {
    if (len < 1) throw precondition_error("gen_chains: chain length must be >= 1");
    count += static_cast<std::size_t>(len);
  }
  std::vector<Task> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) tasks.push_back({detail::padded_id('t', i, count), sample_weight(rng)});

  const TaskId source = tasks.front().id;
  const TaskId sink = tasks.back().id;
  std::vector<Dependency> deps;
  std::size_t next = 1;
  for (int len : lengths) {
    TaskId prev = source;
    for (int k = 0; k < len; ++k, ++next) {
      deps.push_back({prev, tasks[next].id, sample_weight(rng)});
      prev = tasks[next].id;
    }
    deps.push_back({prev, sink, sample_weight(rng)});
  }
  return TaskGraph(std::move(tasks), std::move(deps));
}

inline TaskGraph gen_chains(Rng& rng) {
  auto k = rng.uniform_int(2, 5);
  std::vector<int> lengths;
  for (std::int64_t i = 0; i < k; ++i) lengths.push_back(static_cast<int>(rng.uniform_int(2, 5)));
  return gen_chains(rng, lengths);
}

/// Complete network with `count` nodes and random speeds/strengths.
inline Network gen_network(Rng& rng, std::size_t count) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < count; ++i) nodes.push_back({detail::padded_id('n', i, count), sample_weight(rng)});
  std::vector<Link> links;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) links.push_back({nodes[i].id, nodes[j].id, sample_weight(rng)});
  return Network(std::move(nodes), std::move(links));
}

inline Network gen_network(Rng& rng) { return gen_network(rng, static_cast<std::size_t>(rng.uniform_int(3, 5))); }

// CCR ---------------------------------------------------------------------

/// Mean communication time over (dependency, ordered distinct node pair)
/// divided by mean execution time over (task, node).
inline double ccr(const ProblemInstance& inst) {
  const auto& g = inst.task_graph;
  const auto& net = inst.network;
  if (g.dep_count() == 0) throw precondition_error("ccr: task graph has no dependencies");
  if (net.size() < 2) throw precondition_error("ccr: network needs at least two nodes");
  if (g.empty()) throw precondition_error("ccr: empty task graph");

  double size_sum = 0.0;
  for (const auto& d : g.deps()) size_sum += d.size;
  double inv_strength = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < net.size(); ++a)
    for (std::size_t b = 0; b < net.size(); ++b)
      if (a != b) {
        inv_strength += 1.0 / net.strength(a, b);
        ++pairs;
      }
  double comm = (size_sum / static_cast<double>(g.dep_count())) * (inv_strength / static_cast<double>(pairs));

  double cost_sum = 0.0;
  for (const auto& t : g.tasks()) cost_sum += t.cost;
  double inv_speed = 0.0;
  for (std::size_t v = 0; v < net.size(); ++v) inv_speed += 1.0 / net.speed(v);
  double comp = (cost_sum / static_cast<double>(g.size())) * (inv_speed / static_cast<double>(net.size()));
  return comm / comp;
}

inline ProblemInstance scale_to_ccr(const ProblemInstance& inst, double target) {
  if (!(target > 0.0) || !std::isfinite(target)) throw precondition_error("scale_to_ccr: target must be positive");
  double current = ccr(inst);
  return {inst.network.with_scaled_strengths(current / target), inst.task_graph};
}

// Datasets ----------------------------------------------------------------

enum class GraphKind { InTrees, OutTrees, Chains };

inline std::string_view to_string(GraphKind k) {
  switch (k) {
    case GraphKind::InTrees: return "in_trees";
    case GraphKind::OutTrees: return "out_trees";
    case GraphKind::Chains: return "chains";
  }
  return "?";
}

inline std::optional<GraphKind> parse_graph_kind(std::string_view s) {
  if (s == "in_trees") return GraphKind::InTrees;
  if (s == "out_trees") return GraphKind::OutTrees;
  if (s == "chains") return GraphKind::Chains;
  return std::nullopt;
}

struct GenParams {
  GraphKind kind = GraphKind::InTrees;
  std::uint64_t seed = 0;
  std::size_t count = 100;
  double target_ccr = 1.0;
};

struct Dataset {
  std::string name;
  GenParams params;
  std::vector<ProblemInstance> instances;
};

inline std::string dataset_name(GraphKind kind, double target_ccr) {
  return std::string(to_string(kind)) + "_ccr_" + format_number(target_ccr);
}

/// Instance `index` of a dataset; depends only on (params, index).
inline ProblemInstance gen_instance(const GenParams& params, std::size_t index) {
  Rng rng(derive_seed(params.seed, index));
  Network net = gen_network(rng);
  TaskGraph graph;
  switch (params.kind) {
    case GraphKind::InTrees: graph = gen_tree(rng, TreeDirection::In); break;
    case GraphKind::OutTrees: graph = gen_tree(rng, TreeDirection::Out); break;
    case GraphKind::Chains: graph = gen_chains(rng); break;
  }
  return scale_to_ccr({std::move(net), std::move(graph)}, params.target_ccr);
}

inline Dataset gen_dataset(const GenParams& params) {
  if (params.count < 1) throw precondition_error("gen_dataset: count must be >= 1");
  Dataset d{dataset_name(params.kind, params.target_ccr), params, {}};
  d.instances.reserve(params.count);
  for (std::size_t i = 0; i < params.count; ++i) d.instances.push_back(gen_instance(params, i));
  return d;
}

inline std::string instance_file_name(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return "instance_" + digits + ".json";
}

/// Writes `manifest.json` and one `instance_NNN.json` per instance.
inline void write_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw error("cannot create '" + dir.string() + "': " + ec.message());
  nlohmann::ordered_json manifest = {{"name", d.name},
                                     {"kind", std::string(to_string(d.params.kind))},
                                     {"target_ccr", d.params.target_ccr},
                                     {"seed", d.params.seed},
                                     {"count", d.instances.size()}};
  write_json_file(dir / "manifest.json", manifest);
  for (std::size_t i = 0; i < d.instances.size(); ++i)
    write_json_file(dir / instance_file_name(i), to_json(d.instances[i]));
}

inline Dataset read_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw format_error("'" + dir.string() + "' is not a directory");
  auto m = read_json_file(dir / "manifest.json");
  Dataset d;
  try {
    d.name = m.at("name").get<std::string>();
    auto kind = parse_graph_kind(m.at("kind").get<std::string>());
    if (!kind) throw format_error("manifest: unknown kind");
    d.params = {*kind, m.at("seed").get<std::uint64_t>(), m.at("count").get<std::size_t>(),
                m.at("target_ccr").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw format_error("'" + (dir / "manifest.json").string() + "': " + e.what());
  }
  for (std::size_t i = 0; i < d.params.count; ++i) d.instances.push_back(load_instance(dir / instance_file_name(i)));
  return d;
}

}  // namespace paramsched
