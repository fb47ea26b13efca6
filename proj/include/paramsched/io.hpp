#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"
#include "paramsched/model.hpp"

namespace paramsched {

// Malformed input file (bad JSON, missing field, unreadable file).
class format_error : public error {
 public:
  using error::error;
};

/// Shortest decimal string that round-trips to `x`.
inline std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw error("cannot format number");
  return std::string(buf, end);
}

inline double parse_number(std::string_view s) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || end != s.data() + s.size())
    throw format_error("not a number: '" + std::string(s) + "'");
  return x;
}

// Instance and schedule JSON ----------------------------------------------

inline nlohmann::ordered_json to_json(const ProblemInstance& inst) {
  using nlohmann::ordered_json;
  ordered_json nodes = ordered_json::array();
  for (const auto& n : inst.network.nodes()) nodes.push_back({{"id", n.id.value}, {"speed", n.speed}});
  ordered_json links = ordered_json::array();
  for (const auto& l : inst.network.links())
    links.push_back({{"u", l.u.value}, {"v", l.v.value}, {"strength", l.strength}});
  ordered_json tasks = ordered_json::array();
  for (const auto& t : inst.task_graph.tasks()) tasks.push_back({{"id", t.id.value}, {"cost", t.cost}});
  ordered_json deps = ordered_json::array();
  for (const auto& d : inst.task_graph.deps())
    deps.push_back({{"src", d.src.value}, {"dst", d.dst.value}, {"size", d.size}});
  return {{"network", {{"nodes", nodes}, {"links", links}}},
          {"task_graph", {{"tasks", tasks}, {"deps", deps}}}};
}

inline nlohmann::ordered_json to_json(const Schedule& s) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& e : s.entries)
    entries.push_back({{"task", e.task.value}, {"node", e.node.value}, {"start", e.start}, {"end", e.end}});
  return {{"entries", entries}};
}

template <class Json>
ProblemInstance instance_from_json(const Json& j) {
  try {
    std::vector<Node> nodes;
    for (const auto& n : j.at("network").at("nodes"))
      nodes.push_back({n.at("id").template get<std::string>(), n.at("speed").template get<double>()});
    std::vector<Link> links;
    for (const auto& l : j.at("network").at("links"))
      links.push_back({l.at("u").template get<std::string>(), l.at("v").template get<std::string>(),
                       l.at("strength").template get<double>()});
    std::vector<Task> tasks;
    for (const auto& t : j.at("task_graph").at("tasks"))
      tasks.push_back({t.at("id").template get<std::string>(), t.at("cost").template get<double>()});
    std::vector<Dependency> deps;
    for (const auto& d : j.at("task_graph").at("deps"))
      deps.push_back({d.at("src").template get<std::string>(), d.at("dst").template get<std::string>(),
                      d.at("size").template get<double>()});
    return {Network(std::move(nodes), std::move(links)),
            TaskGraph(std::move(tasks), std::move(deps))};
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("instance JSON: ") + e.what());
  }
}

template <class Json>
Schedule schedule_from_json(const Json& j) {
  try {
    Schedule s;
    for (const auto& e : j.at("entries"))
      s.entries.push_back({e.at("task").template get<std::string>(),
                           e.at("node").template get<std::string>(),
                           e.at("start").template get<double>(), e.at("end").template get<double>()});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("schedule JSON: ") + e.what());
  }
}

// Files -------------------------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw error("write failed for '" + path.string() + "'");
}

inline nlohmann::ordered_json read_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw format_error("'" + path.string() + "': " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline ProblemInstance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

inline Schedule load_schedule(const std::filesystem::path& path) {
  return schedule_from_json(read_json_file(path));
}

}  // namespace paramsched
