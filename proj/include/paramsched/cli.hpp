#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paramsched/bench.hpp"
#include "paramsched/datagen.hpp"
#include "paramsched/io.hpp"
#include "paramsched/scheduler.hpp"

namespace paramsched::cli {

// Exit statuses.
inline constexpr int exit_ok = 0;
inline constexpr int exit_domain = 1;
inline constexpr int exit_usage = 2;

namespace detail {

inline void list_names(std::ostream& out) {
  for (const auto& nc : enumerate_configs()) {
    out << nc.name;
    if (nc.alias) out << " (" << *nc.alias << ")";
    out << '\n';
  }
}

inline std::vector<NamedConfig> select_schedulers(const std::string& names, std::ostream& err) {
  auto all = enumerate_configs();
  if (names == "all") return all;
  std::vector<NamedConfig> out;
  for (const auto& name : paramsched::detail::split(names, ',')) {
    auto cfg = parse_scheduler_name(name);
    if (!cfg) {
      err << "unknown scheduler '" << name << "'; valid names:\n";
      list_names(err);
      return {};
    }
    out.push_back(*std::ranges::find(all, *cfg, &NamedConfig::config));
  }
  return out;
}

struct GenerateArgs {
  std::string kind;
  double ccr = 1.0;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string out;
};

struct ScheduleArgs {
  std::string instance, scheduler, out;
};

struct ValidateArgs {
  std::string instance, schedule;
};

struct BenchmarkArgs {
  std::vector<std::string> datasets;
  std::string schedulers = "all";
  std::size_t repeats = 3;
  std::size_t jobs = 1;
  std::string out;
};

struct AnalyzeArgs {
  std::string results, mode, params, out, dataset;
};

inline int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  auto kind = parse_graph_kind(a.kind);
  GenParams params{*kind, a.seed, a.count, a.ccr};
  auto dataset = gen_dataset(params);
  write_dataset(dataset, a.out);
  out << "wrote " << dataset.instances.size() << " instances of " << dataset.name << " to " << a.out << '\n';
  return exit_ok;
}

inline int cmd_schedule(const ScheduleArgs& a, std::ostream& out, std::ostream& err) {
  auto cfg = parse_scheduler_name(a.scheduler);
  if (!cfg) {
    err << "unknown scheduler '" << a.scheduler << "'; valid names:\n";
    list_names(err);
    return exit_domain;
  }
  auto inst = load_instance(a.instance);
  auto s = schedule(inst, *cfg);
  write_json_file(a.out, to_json(s));
  out << format_number(makespan(s)) << '\n';
  return exit_ok;
}

inline int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  auto inst = load_instance(a.instance);
  auto s = load_schedule(a.schedule);
  auto violations = validate_schedule(inst, s);
  for (const auto& v : violations) out << to_string(v.kind) << ": " << v.detail << '\n';
  return violations.empty() ? exit_ok : exit_domain;
}

inline int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out, std::ostream& err) {
  auto configs = select_schedulers(a.schedulers, err);
  if (configs.empty()) return exit_domain;
  std::vector<Dataset> datasets;
  for (const auto& dir : a.datasets) datasets.push_back(read_dataset(dir));
  auto records = run_benchmark(datasets, configs, {a.repeats, a.jobs});
  write_text_file(a.out, write_results_csv(records));
  auto failed = std::ranges::count_if(records, [](const auto& r) { return !r.ok(); });
  out << "wrote " << records.size() << " records to " << a.out;
  if (failed) out << " (" << failed << " failed)";
  out << '\n';
  return static_cast<std::size_t>(failed) == records.size() ? exit_domain : exit_ok;
}

inline int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  auto records = read_results_csv(read_text_file(a.results));
  auto ratios = compute_ratios(records);
  if (a.mode == "ratios") {
    write_text_file(a.out, write_results_csv(records));
  } else if (a.mode == "pareto") {
    auto points = pareto_front(mean_ratios_by_scheduler(ratios, a.dataset));
    write_text_file(a.out, write_pareto_csv(points));
    auto svg = std::filesystem::path(a.out).replace_extension(".svg");
    write_text_file(svg, write_pareto_svg(points, a.dataset.empty() ? "all datasets" : a.dataset));
  } else if (a.mode == "effects") {
    write_text_file(a.out, write_effects_csv(component_effects(ratios, a.dataset)));
  } else if (a.mode == "interactions") {
    auto params = paramsched::detail::split(a.params, ',');
    if (params.size() != 2) {
      err << "--params must name exactly two parameters, e.g. compare,ccr\n";
      return exit_usage;
    }
    write_text_file(a.out, write_interactions_csv(interaction_effects(ratios, params[0], params[1], a.dataset)));
  } else {
    err << "unknown mode '" << a.mode << "'\n";
    return exit_usage;
  }
  out << "wrote " << a.out << '\n';
  return exit_ok;
}

}  // namespace detail

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Parametric list scheduling for heterogeneous task graphs", "paramsched"};
  app.require_subcommand(1);

  detail::GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a random dataset directory");
  generate->add_option("--kind", gen.kind, "Task graph family")
      ->required()
      ->check(CLI::IsMember({"in_trees", "out_trees", "chains"}));
  generate->add_option("--ccr", gen.ccr, "Target communication-to-computation ratio")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--count", gen.count, "Number of instances")->required()->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Random seed")->required();
  generate->add_option("--out", gen.out, "Output directory")->required();

  detail::ScheduleArgs sch;
  auto* schedule_cmd = app.add_subcommand("schedule", "Schedule one instance and write the schedule JSON");
  schedule_cmd->add_option("--instance", sch.instance)->required();
  schedule_cmd->add_option("--scheduler", sch.scheduler, "Canonical name or alias")->required();
  schedule_cmd->add_option("--out", sch.out)->required();

  detail::ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Check a schedule against an instance");
  validate->add_option("--instance", val.instance)->required();
  validate->add_option("--schedule", val.schedule)->required();

  detail::BenchmarkArgs bench;
  auto* benchmark = app.add_subcommand("benchmark", "Run schedulers over dataset directories");
  benchmark->add_option("--datasets", bench.datasets)->required()->expected(1, -1);
  benchmark->add_option("--schedulers", bench.schedulers, "Comma-separated names or 'all'");
  benchmark->add_option("--repeats", bench.repeats, "Timed runs per pair (median)")->check(CLI::PositiveNumber);
  benchmark->add_option("--jobs", bench.jobs, "Threads for untimed scheduling")->check(CLI::PositiveNumber);
  benchmark->add_option("--out", bench.out)->required();

  detail::AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Derive ratio, pareto, effect or interaction tables");
  analyze->add_option("--results", an.results)->required();
  analyze->add_option("--mode", an.mode)
      ->required()
      ->check(CLI::IsMember({"ratios", "pareto", "effects", "interactions"}));
  analyze->add_option("--params", an.params, "Two parameters for interactions, e.g. compare,ccr");
  analyze->add_option("--dataset", an.dataset, "Restrict to one dataset");
  analyze->add_option("--out", an.out)->required();

  auto* list = app.add_subcommand("list-schedulers", "Print all 72 scheduler names");

  std::vector<const char*> argv{"paramsched"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  try {
    if (*generate) return detail::cmd_generate(gen, out);
    if (*schedule_cmd) return detail::cmd_schedule(sch, out, err);
    if (*validate) return detail::cmd_validate(val, out);
    if (*benchmark) return detail::cmd_benchmark(bench, out, err);
    if (*analyze) return detail::cmd_analyze(an, out, err);
    if (*list) {
      detail::list_names(out);
      return exit_ok;
    }
  } catch (const format_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const paramsched::error& e) {
    // Domain failures (bad instance, unknown id, confounded analysis);
    // plain paramsched::error is reserved for IO.
    err << "error: " << e.what() << '\n';
    bool io = typeid(e) == typeid(paramsched::error);
    return io ? exit_usage : exit_domain;
  }
  return exit_usage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace paramsched::cli
