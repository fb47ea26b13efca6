// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"

#ifndef PARAMSCHED_CLI_PATH
#error "PARAMSCHED_CLI_PATH must point at the paramsched executable"
#endif

using namespace paramsched;
namespace fs = std::filesystem;
namespace pt = paramsched::testing;

namespace {

constexpr double oracle_rel_tol = 1e-9;
constexpr double ccr_rel_tol = 1e-9;
constexpr double cardinality_budget_s = 1.0;
constexpr double validity_budget_s = 120.0;
constexpr double oracle_budget_s = 60.0;

constexpr GraphKind kinds[] = {GraphKind::InTrees, GraphKind::OutTrees, GraphKind::Chains};
constexpr double ccrs[] = {0.2, 0.5, 1.0, 2.0, 5.0};

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::size_t fastest_node(const Network& net) {
  std::size_t best = 0;
  for (std::size_t v = 1; v < net.size(); ++v)
    if (net.speed(v) > net.speed(best)) best = v;
  return best;
}

Outcome config_cardinality() {
  Outcome o;
  auto t0 = clock_type::now();
  auto configs = enumerate_configs();
  if (configs.size() != 72) o.fail("expected 72 configs, got " + std::to_string(configs.size()));
  std::set<std::string> names;
  std::set<std::tuple<int, int, bool, bool, bool>> rows;
  for (const auto& nc : configs) {
    names.insert(nc.name);
    const auto& c = nc.config;
    rows.insert({static_cast<int>(c.initial_priority), static_cast<int>(c.compare), c.append_only, c.critical_path,
                 c.sufferage});
    if (parse_scheduler_name(nc.name) != c) o.fail(nc.name + " does not parse back");
  }
  if (names.size() != 72 || rows.size() != 72) o.fail("names or parameter rows are not unique");

  const std::map<std::string, SchedulerConfig> aliases{
      {"HEFT", {PriorityKind::UpwardRanking, CompareKind::EFT, false, false, false}},
      {"MCT", {PriorityKind::ArbitraryTopological, CompareKind::EFT, true, false, false}},
      {"MET", {PriorityKind::ArbitraryTopological, CompareKind::Quickest, true, false, false}},
      {"Sufferage", {PriorityKind::ArbitraryTopological, CompareKind::EFT, true, false, true}},
  };
  std::size_t aliased = 0;
  for (const auto& nc : configs)
    if (nc.alias) {
      ++aliased;
      auto it = aliases.find(*nc.alias);
      if (it == aliases.end() || it->second != nc.config) o.fail("alias " + *nc.alias + " maps to the wrong row");
    }
  for (const auto& [alias, cfg] : aliases)
    if (parse_scheduler_name(alias) != cfg) o.fail("alias " + alias + " does not parse");
  if (aliased != 4) o.fail("expected 4 aliased configs");
  if (seconds_since(t0) > cardinality_budget_s) o.fail("over time budget");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(configs.size()) + " configs, " +
              std::to_string(aliased) + " aliases";
  return o;
}

Outcome universal_validity() {
  Outcome o;
  auto t0 = clock_type::now();
  auto configs = enumerate_configs();
  std::size_t checked = 0;
  for (auto kind : kinds)
    for (double c : ccrs) {
      auto d = gen_dataset({kind, 2024, 10, c});
      for (const auto& inst : d.instances)
        for (const auto& nc : configs) {
          auto v = validate_schedule(inst, schedule(inst, nc.config));
          ++checked;
          if (!v.empty()) o.fail(d.name + " " + nc.name + ": " + to_string(v.front().kind) + " " + v.front().detail);
        }
    }
  const double secs = seconds_since(t0);
  if (checked != 10800) o.fail("checked " + std::to_string(checked) + " schedules");
  if (secs > validity_budget_s) o.fail("over time budget");
  if (o.pass) o.detail = std::to_string(checked) + " schedules valid in " + format_number(secs) + " s";
  return o;
}

Outcome oracle_dominance() {
  Outcome o;
  auto t0 = clock_type::now();
  auto configs = enumerate_configs();
  std::mt19937_64 rng(31337);
  std::size_t optimal_hits = 0;
  for (int i = 0; i < 200; ++i) {
    auto inst = pt::random_instance(rng, {.min_tasks = 1, .max_tasks = 5, .min_nodes = 1, .max_nodes = 3});
    const double opt = brute_force_min_makespan(inst);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& nc : configs) {
      const double m = makespan(schedule(inst, nc.config));
      best = std::min(best, m);
      if (m < opt * (1.0 - oracle_rel_tol))
        o.fail(nc.name + " beat the oracle on instance " + std::to_string(i));
    }
    if (best <= opt * (1.0 + oracle_rel_tol)) ++optimal_hits;
  }
  if (optimal_hits == 0) o.fail("best-of-72 never reached the oracle");
  if (seconds_since(t0) > oracle_budget_s) o.fail("over time budget");
  if (o.pass) o.detail = "best-of-72 optimal on " + std::to_string(optimal_hits) + "/200 instances";
  return o;
}

Outcome ratio_floor(const std::vector<RatioRow>& rows) {
  Outcome o;
  std::map<std::pair<std::string, std::size_t>, double> min_ratio;
  for (const auto& r : rows) {
    if (r.makespan_ratio < 1.0 || r.runtime_ratio < 1.0) o.fail(r.scheduler + " has a ratio below 1");
    auto [it, fresh] = min_ratio.try_emplace({r.dataset, r.instance_index}, r.makespan_ratio);
    if (!fresh) it->second = std::min(it->second, r.makespan_ratio);
  }
  for (const auto& [key, m] : min_ratio)
    if (m != 1.0) o.fail(key.first + "#" + std::to_string(key.second) + " minimum makespan ratio " + format_number(m));
  if (o.pass) o.detail = std::to_string(rows.size()) + " rows over " + std::to_string(min_ratio.size()) + " instances";
  return o;
}

Outcome quickest_invariant() {
  Outcome o;
  std::mt19937_64 rng(55);
  std::size_t placements = 0;
  for (int i = 0; i < 100; ++i) {
    auto inst = pt::random_instance(rng, {.max_tasks = 12});
    const double top = inst.network.speed(fastest_node(inst.network));
    for (const auto& nc : enumerate_configs()) {
      if (nc.config.compare != CompareKind::Quickest) continue;
      for (const auto& e : schedule(inst, nc.config).entries) {
        ++placements;
        if (inst.network.speed(inst.network.index_of(e.node)) != top)
          o.fail(nc.name + " placed " + e.task.value + " on a slower node");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(placements) + " placements on maximal-speed nodes";
  return o;
}

Outcome critical_path_invariant() {
  Outcome o;
  std::mt19937_64 rng(66);
  std::size_t pinned = 0;
  for (int i = 0; i < 100; ++i) {
    auto inst = pt::random_instance(rng, {.max_tasks = 12});
    const NodeId fast = inst.network.id(fastest_node(inst.network));
    auto cp = critical_path_tasks(inst);
    for (const auto& nc : enumerate_configs()) {
      if (!nc.config.critical_path) continue;
      auto s = schedule(inst, nc.config);
      for (const auto& t : cp) {
        auto it = std::ranges::find(s.entries, t, &ScheduleEntry::task);
        ++pinned;
        if (it == s.entries.end() || it->node != fast) o.fail(nc.name + " moved critical task " + t.value);
      }
    }
  }
  if (o.pass) o.detail = std::to_string(pinned) + " critical-path placements pinned";
  return o;
}

Outcome priority_contract() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    auto inst = pt::random_instance(rng, {.max_tasks = 14, .edge_probability = 0.4});
    const auto& g = inst.task_graph;
    auto ur = priority_map(inst, PriorityKind::UpwardRanking);
    for (std::size_t t = 0; t < g.size(); ++t)
      for (const auto& s : g.successors(t))
        if (!(ur.value[t] > ur.value[s.task])) o.fail("upward rank does not decrease along an edge");
    for (auto kind : all_priority_kinds) {
      SchedulerConfig cfg{kind, CompareKind::EFT, false, false, false};
      auto trace = schedule_with_trace(inst, cfg);
      std::vector<std::size_t> pos(g.size());
      for (std::size_t k = 0; k < trace.commit_order.size(); ++k) pos[trace.commit_order[k]] = k;
      if (trace.commit_order.size() != g.size()) o.fail("commit order misses tasks");
      for (std::size_t t = 0; t < g.size(); ++t)
        for (const auto& s : g.successors(t))
          if (pos[t] >= pos[s.task]) o.fail(std::string(to_string(kind)) + " order is not topological");
    }
  }
  if (o.pass) o.detail = "300 traces topological, upward rank strictly decreasing";
  return o;
}

Outcome ccr_scaling() {
  Outcome o;
  std::mt19937_64 rng(88);
  int done = 0;
  while (done < 100) {
    auto inst = pt::random_instance(rng, {.min_tasks = 2, .min_nodes = 2, .edge_probability = 0.6});
    if (inst.task_graph.dep_count() == 0) continue;
    ++done;
    for (double c : ccrs) {
      const double got = ccr(scale_to_ccr(inst, c));
      if (!pt::near(got, c, ccr_rel_tol)) o.fail("target " + format_number(c) + " gave " + format_number(got));
    }
  }
  if (o.pass) o.detail = "500 scalings within 1e-9 relative";
  return o;
}

Outcome pareto_correctness() {
  Outcome o;
  std::mt19937_64 rng(99);
  for (int set = 0; set < 1000; ++set) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 80)(rng);
    // Coarse grid for half the sets so ties and duplicates occur.
    const bool coarse = set % 2 == 0;
    std::uniform_int_distribution<int> grid(0, 12);
    std::uniform_real_distribution<double> fine(1.0, 3.0);
    std::vector<ParetoPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
      double x = coarse ? 1.0 + grid(rng) / 6.0 : fine(rng);
      double y = coarse ? 1.0 + grid(rng) / 6.0 : fine(rng);
      pts.push_back({"s" + std::to_string(i), x, y, false});
    }
    auto front = pareto_front(pts);
    for (std::size_t i = 0; i < n; ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < n; ++j)
        dominated |= pts[j].mean_makespan_ratio < pts[i].mean_makespan_ratio &&
                     pts[j].mean_runtime_ratio < pts[i].mean_runtime_ratio;
      if (front[i].pareto_optimal == dominated || front[i].scheduler != pts[i].scheduler)
        o.fail("set " + std::to_string(set) + " point " + std::to_string(i) + " disagrees");
    }
  }
  if (o.pass) o.detail = "1000 point sets agree with the pairwise check";
  return o;
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PARAMSCHED_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::vector<std::string> makespan_columns(const fs::path& csv) {
  std::vector<std::string> out;
  for (const auto& line : paramsched::detail::lines(read_text_file(csv))) {
    auto f = paramsched::detail::split(line, ',');
    out.push_back(f[0] + "," + f[1] + "," + f[2] + "," + f[3] + "," + f[5]);
  }
  return out;
}

Outcome determinism(const fs::path& work) {
  Outcome o;
  fs::path runs[2] = {work / "run_a", work / "run_b"};
  for (const auto& r : runs) {
    fs::create_directories(r);
    if (cli("generate --kind out_trees --ccr 2 --count 5 --seed 7 --out \"" + (r / "data").string() + "\"") != 0 ||
        cli("benchmark --datasets \"" + (r / "data").string() + "\" --repeats 1 --jobs 2 --out \"" +
            (r / "results.csv").string() + "\"") != 0) {
      o.fail("CLI invocation failed");
      return o;
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(runs[0] / "data")) {
    auto twin = runs[1] / "data" / entry.path().filename();
    ++files;
    if (!fs::exists(twin) || read_text_file(entry.path()) != read_text_file(twin))
      o.fail(entry.path().filename().string() + " differs");
  }
  if (makespan_columns(runs[0] / "results.csv") != makespan_columns(runs[1] / "results.csv"))
    o.fail("makespan columns differ");
  if (o.pass) o.detail = std::to_string(files) + " dataset files identical, makespan columns identical";
  return o;
}

struct Pipeline {
  std::vector<RatioRow> ratios;
  Outcome outcome;
};

Pipeline full_pipeline(const fs::path& work) {
  Pipeline p;
  auto& o = p.outcome;
  std::vector<Dataset> datasets;
  for (auto kind : kinds)
    for (double c : ccrs) {
      auto d = gen_dataset({kind, 4242, 4, c});
      write_dataset(d, work / d.name);
      datasets.push_back(read_dataset(work / d.name));
    }
  auto configs = enumerate_configs();
  auto records = run_benchmark(datasets, configs, {1, 2});
  write_text_file(work / "results.csv", write_results_csv(records));
  auto reread = read_results_csv(read_text_file(work / "results.csv"));
  if (reread.size() != records.size()) o.fail("results CSV lost rows");
  p.ratios = compute_ratios(reread);

  std::map<std::string, std::set<std::string>> per_dataset;
  for (const auto& r : p.ratios) per_dataset[r.dataset].insert(r.scheduler);
  for (const auto& [name, schedulers] : per_dataset)
    if (schedulers.size() != 72) o.fail(name + " has " + std::to_string(schedulers.size()) + " schedulers");
  if (per_dataset.size() != datasets.size()) o.fail("datasets missing from results");

  auto points = pareto_front(mean_ratios_by_scheduler(p.ratios));
  write_text_file(work / "pareto.csv", write_pareto_csv(points));
  write_text_file(work / "pareto.svg", write_pareto_svg(points, "all datasets"));
  auto effects = component_effects(p.ratios);
  write_text_file(work / "effects.csv", write_effects_csv(effects));
  auto cells = interaction_effects(p.ratios, "compare", "ccr");
  write_text_file(work / "interactions.csv", write_interactions_csv(cells));

  const auto optimal = std::ranges::count_if(points, &ParetoPoint::pareto_optimal);
  if (points.size() != 72 || optimal == 0) o.fail("pareto table malformed");
  if (effects.size() != 12) o.fail("expected 12 effect rows, got " + std::to_string(effects.size()));
  if (cells.size() != 15) o.fail("expected 15 compare x ccr cells, got " + std::to_string(cells.size()));
  auto check_csv = [&](const char* file, std::size_t rows) {
    auto lines = paramsched::detail::lines(read_text_file(work / file));
    if (lines.size() != rows + 1) o.fail(std::string(file) + " has the wrong row count");
    const auto cols = paramsched::detail::split(lines.front(), ',').size();
    for (const auto& l : lines)
      if (paramsched::detail::split(l, ',').size() != cols) o.fail(std::string(file) + " is ragged");
  };
  check_csv("pareto.csv", 72);
  check_csv("effects.csv", 12);
  check_csv("interactions.csv", 15);
  auto svg = read_text_file(work / "pareto.svg");
  if (!svg.starts_with("<svg") || svg.find("</svg>") == std::string::npos) o.fail("pareto.svg malformed");
  if (o.pass)
    o.detail = std::to_string(datasets.size()) + " datasets x 72 schedulers, " + std::to_string(optimal) +
               " pareto-optimal, 12 effect rows, 15 interaction cells";
  return p;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "paramsched_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  int failures = 0;
  auto report = [&](int id, const char* title, auto&& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << title << "): " << o.detail << std::endl;
  };

  Pipeline pipeline;
  try {
    pipeline = full_pipeline(work / "pipeline");
  } catch (const std::exception& e) {
    pipeline.outcome.fail(std::string("exception: ") + e.what());
  }

  report(1, "config cardinality", config_cardinality);
  report(2, "universal validity", universal_validity);
  report(3, "oracle dominance", oracle_dominance);
  report(4, "ratio floor", [&] {
    if (pipeline.ratios.empty()) {
      Outcome o;
      o.fail("no ratios from the pipeline");
      return o;
    }
    return ratio_floor(pipeline.ratios);
  });
  report(5, "quickest invariant", quickest_invariant);
  report(6, "critical-path invariant", critical_path_invariant);
  report(7, "priority contract", priority_contract);
  report(8, "ccr scaling", ccr_scaling);
  report(9, "pareto correctness", pareto_correctness);
  report(10, "determinism", [&] { return determinism(work / "determinism"); });
  report(11, "end-to-end pipeline", [&] { return pipeline.outcome; });

  fs::remove_all(work);
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << 11 - failures << "/11" << std::endl;
  return failures ? 1 : 0;
}
