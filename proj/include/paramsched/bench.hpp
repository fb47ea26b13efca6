#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "paramsched/datagen.hpp"
#include "paramsched/io.hpp"
#include "paramsched/model.hpp"
#include "paramsched/scheduler.hpp"

namespace paramsched {

// Raw results ---------------------------------------------------------------

struct BenchmarkRecord {
  std::string dataset;
  std::size_t instance_index = 0;
  std::string scheduler;
  double makespan = 0.0;
  double runtime_seconds = 0.0;
  std::string error;  // empty when the run succeeded

  bool ok() const noexcept { return error.empty(); }
};

struct BenchOptions {
  std::size_t timing_repeats = 3;
  std::size_t jobs = 1;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::ranges::sort(v);
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Runs every config on every instance. Makespans come from one run per
/// pair (parallel over `jobs` threads); runtimes are the median of
/// `timing_repeats` runs timed serially afterwards.
inline std::vector<BenchmarkRecord> run_benchmark(std::span<const Dataset> datasets,
                                                  std::span<const NamedConfig> configs,
                                                  const BenchOptions& opts = {}) {
  if (datasets.empty()) throw precondition_error("run_benchmark: no datasets");
  if (configs.empty()) throw precondition_error("run_benchmark: no schedulers");
  if (opts.timing_repeats < 1) throw precondition_error("run_benchmark: timing_repeats must be >= 1");

  struct Job {
    const ProblemInstance* instance;
    const SchedulerConfig* config;
  };
  std::vector<Job> jobs;
  std::vector<BenchmarkRecord> records;
  for (const auto& d : datasets)
    for (std::size_t i = 0; i < d.instances.size(); ++i)
      for (const auto& c : configs) {
        jobs.push_back({&d.instances[i], &c.config});
        records.push_back({d.name, i, c.name, 0.0, 0.0, {}});
      }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      try {
        records[k].makespan = makespan(schedule(*jobs[k].instance, *jobs[k].config));
      } catch (const std::exception& e) {
        records[k].error = e.what();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(opts.jobs, jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  using clock = std::chrono::steady_clock;
  std::vector<double> samples(opts.timing_repeats);
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (!records[k].ok()) continue;
    for (auto& s : samples) {
      auto t0 = clock::now();
      auto sched = schedule(*jobs[k].instance, *jobs[k].config);
      auto t1 = clock::now();
      s = std::chrono::duration<double>(t1 - t0).count();
      if (sched.entries.size() != jobs[k].instance->task_graph.size()) records[k].error = "incomplete schedule";
    }
    // A clock tick is the smallest representable runtime.
    records[k].runtime_seconds =
        std::max(detail::median(samples), std::chrono::duration<double>(clock::duration(1)).count());
  }
  return records;
}

// Ratios --------------------------------------------------------------------

struct RatioRow {
  std::string dataset;
  std::size_t instance_index = 0;
  std::string scheduler;
  double makespan_ratio = 1.0;
  double runtime_ratio = 1.0;
};

/// Normalizes each successful record by the minimum makespan and runtime
/// within its (dataset, instance) group. Failed records are skipped.
inline std::vector<RatioRow> compute_ratios(std::span<const BenchmarkRecord> records) {
  std::map<std::pair<std::string, std::size_t>, std::pair<double, double>> minima;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    auto [it, fresh] = minima.try_emplace({r.dataset, r.instance_index}, r.makespan, r.runtime_seconds);
    if (!fresh) {
      it->second.first = std::min(it->second.first, r.makespan);
      it->second.second = std::min(it->second.second, r.runtime_seconds);
    }
  }
  std::vector<RatioRow> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const auto& [ms, rt] = minima.at({r.dataset, r.instance_index});
    if (!(ms > 0.0))
      throw precondition_error("zero minimum makespan for " + r.dataset + "#" + std::to_string(r.instance_index));
    if (!(rt > 0.0))
      throw precondition_error("zero minimum runtime for " + r.dataset + "#" + std::to_string(r.instance_index));
    out.push_back({r.dataset, r.instance_index, r.scheduler, r.makespan / ms, r.runtime_seconds / rt});
  }
  return out;
}

// Results CSV -----------------------------------------------------------------

inline constexpr std::string_view results_header =
    "dataset,instance,scheduler,makespan,runtime_seconds,makespan_ratio,runtime_ratio,error";

namespace detail {

inline std::string csv_safe(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t from = 0;
  for (;;) {
    auto at = line.find(sep, from);
    out.emplace_back(line.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from));
    if (at == std::string_view::npos) break;
    from = at + 1;
  }
  return out;
}

inline std::vector<std::string> lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto& l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (!l.empty()) out.push_back(std::move(l));
  }
  return out;
}

}  // namespace detail

inline std::string write_results_csv(std::span<const BenchmarkRecord> records) {
  auto ratios = compute_ratios(records);
  std::ostringstream out;
  out << results_header << '\n';
  std::size_t k = 0;
  for (const auto& r : records) {
    out << r.dataset << ',' << r.instance_index << ',' << r.scheduler << ',';
    if (r.ok()) {
      const auto& q = ratios[k++];
      out << format_number(r.makespan) << ',' << format_number(r.runtime_seconds) << ','
          << format_number(q.makespan_ratio) << ',' << format_number(q.runtime_ratio) << ',';
    } else {
      out << ",,,," << detail::csv_safe(r.error);
    }
    out << '\n';
  }
  return out.str();
}

/// Parses a results CSV. The trailing error column is optional; ratio
/// columns are ignored since they are recomputed from the raw values.
inline std::vector<BenchmarkRecord> read_results_csv(std::string_view text) {
  auto rows = detail::lines(text);
  if (rows.empty()) throw format_error("results CSV is empty");
  auto header = detail::split(rows.front(), ',');
  if (header.size() < 7 || detail::split(results_header, ',')[6] != header[6] ||
      header[0] != "dataset" || header[2] != "scheduler" || header[3] != "makespan")
    throw format_error("results CSV: unexpected header '" + rows.front() + "'");
  std::vector<BenchmarkRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto f = detail::split(rows[i], ',');
    if (f.size() < 7) throw format_error("results CSV line " + std::to_string(i + 1) + ": too few fields");
    BenchmarkRecord r;
    r.dataset = f[0];
    r.instance_index = static_cast<std::size_t>(parse_number(f[1]));
    r.scheduler = f[2];
    if (f.size() > 7) r.error = f[7];
    if (r.ok()) {
      r.makespan = parse_number(f[3]);
      r.runtime_seconds = parse_number(f[4]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Pareto front ----------------------------------------------------------------

struct ParetoPoint {
  std::string scheduler;
  double mean_makespan_ratio = 0.0;
  double mean_runtime_ratio = 0.0;
  bool pareto_optimal = false;
};

/// Marks a point dominated iff another point is strictly lower in both
/// coordinates. Sort-and-sweep, O(n log n).
inline std::vector<ParetoPoint> pareto_front(std::vector<ParetoPoint> points) {
  std::vector<std::size_t> idx(points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::ranges::sort(idx, {}, [&](std::size_t i) { return points[i].mean_makespan_ratio; });
  double best_y = std::numeric_limits<double>::infinity();
  for (std::size_t lo = 0; lo < idx.size();) {
    std::size_t hi = lo;
    const double x = points[idx[lo]].mean_makespan_ratio;
    while (hi < idx.size() && points[idx[hi]].mean_makespan_ratio == x) ++hi;
    // best_y covers only points with strictly smaller x.
    for (std::size_t k = lo; k < hi; ++k) points[idx[k]].pareto_optimal = !(best_y < points[idx[k]].mean_runtime_ratio);
    for (std::size_t k = lo; k < hi; ++k) best_y = std::min(best_y, points[idx[k]].mean_runtime_ratio);
    lo = hi;
  }
  return points;
}

/// Mean ratios per scheduler, in first-appearance order. An empty
/// `dataset` aggregates over all datasets.
inline std::vector<ParetoPoint> mean_ratios_by_scheduler(std::span<const RatioRow> rows,
                                                         std::string_view dataset = {}) {
  std::vector<ParetoPoint> out;
  std::map<std::string, std::size_t, std::less<>> slot;
  std::vector<std::size_t> counts;
  for (const auto& r : rows) {
    if (!dataset.empty() && r.dataset != dataset) continue;
    auto [it, fresh] = slot.try_emplace(r.scheduler, out.size());
    if (fresh) {
      out.push_back({r.scheduler, 0.0, 0.0, false});
      counts.push_back(0);
    }
    out[it->second].mean_makespan_ratio += r.makespan_ratio;
    out[it->second].mean_runtime_ratio += r.runtime_ratio;
    ++counts[it->second];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].mean_makespan_ratio /= static_cast<double>(counts[i]);
    out[i].mean_runtime_ratio /= static_cast<double>(counts[i]);
  }
  return out;
}

inline std::string write_pareto_csv(std::span<const ParetoPoint> points) {
  std::ostringstream out;
  out << "scheduler,mean_makespan_ratio,mean_runtime_ratio,pareto_optimal\n";
  for (const auto& p : points)
    out << p.scheduler << ',' << format_number(p.mean_makespan_ratio) << ','
        << format_number(p.mean_runtime_ratio) << ',' << (p.pareto_optimal ? "true" : "false") << '\n';
  return out.str();
}

/// Standalone SVG scatter: runtime ratio on x, makespan ratio on y.
inline std::string write_pareto_svg(std::span<const ParetoPoint> points, std::string_view title = "") {
  constexpr double width = 640, height = 480, margin = 60;
  double x_lo = 1.0, x_hi = 1.0, y_lo = 1.0, y_hi = 1.0;
  for (const auto& p : points) {
    x_lo = std::min(x_lo, p.mean_runtime_ratio);
    x_hi = std::max(x_hi, p.mean_runtime_ratio);
    y_lo = std::min(y_lo, p.mean_makespan_ratio);
    y_hi = std::max(y_hi, p.mean_makespan_ratio);
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  auto px = [&](double x) { return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\">mean runtime ratio ["
      << format_number(x_lo) << ", " << format_number(x_hi) << "]</text>\n";
  out << "<text x=\"15\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << height / 2
      << ")\">mean makespan ratio [" << format_number(y_lo) << ", " << format_number(y_hi) << "]</text>\n";
  for (const auto& p : points) {
    out << "<circle cx=\"" << px(p.mean_runtime_ratio) << "\" cy=\"" << py(p.mean_makespan_ratio)
        << "\" r=\"4\" fill=\"" << (p.pareto_optimal ? "#1f77b4" : "#d62728") << "\"><title>" << p.scheduler
        << "</title></circle>\n";
    if (p.pareto_optimal)
      out << "<text x=\"" << px(p.mean_runtime_ratio) + 6 << "\" y=\"" << py(p.mean_makespan_ratio) - 4 << "\">"
          << p.scheduler << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

// Component effects -----------------------------------------------------------

inline constexpr std::string_view component_parameters[] = {"initial_priority", "compare", "append_only",
                                                            "critical_path", "sufferage"};

struct EffectRow {
  std::string parameter;
  std::string level;
  double mean_makespan_ratio = 0.0;
  double mean_runtime_ratio = 0.0;
};

struct InteractionRow {
  std::string parameter_a;
  std::string level_a;
  std::string parameter_b;
  std::string level_b;
  double mean_makespan_ratio = 0.0;
  double mean_runtime_ratio = 0.0;
};

namespace detail {

inline bool is_component(std::string_view p) {
  return std::ranges::find(component_parameters, p) != std::end(component_parameters);
}

inline bool is_known_parameter(std::string_view p) {
  return is_component(p) || p == "dataset_type" || p == "ccr" || p == "dataset";
}

inline std::string_view bool_level(bool b) { return b ? "true" : "false"; }

/// Levels of a parameter in presentation order.
inline std::vector<std::string> component_levels(std::string_view p) {
  if (p == "initial_priority") return {"UpwardRanking", "CPoPRanking", "ArbitraryTopological"};
  if (p == "compare") return {"EFT", "EST", "Quickest"};
  return {"false", "true"};
}

inline std::string level_of(std::string_view parameter, const RatioRow& row, const SchedulerConfig& cfg) {
  if (parameter == "initial_priority") return std::string(to_string(cfg.initial_priority));
  if (parameter == "compare") return std::string(to_string(cfg.compare));
  if (parameter == "append_only") return std::string(bool_level(cfg.append_only));
  if (parameter == "critical_path") return std::string(bool_level(cfg.critical_path));
  if (parameter == "sufferage") return std::string(bool_level(cfg.sufferage));
  if (parameter == "dataset") return row.dataset;
  auto at = row.dataset.rfind("_ccr_");
  if (parameter == "dataset_type") return at == std::string::npos ? row.dataset : row.dataset.substr(0, at);
  if (parameter == "ccr") {
    if (at == std::string::npos) throw format_error("dataset name '" + row.dataset + "' carries no CCR");
    return row.dataset.substr(at + 5);
  }
  throw precondition_error("unknown parameter '" + std::string(parameter) + "'");
}

inline std::vector<std::string> ordered_levels(std::string_view parameter, std::set<std::string> seen) {
  if (is_component(parameter)) return component_levels(parameter);
  std::vector<std::string> out(seen.begin(), seen.end());
  if (parameter == "ccr")
    std::ranges::sort(out, {}, [](const std::string& s) { return parse_number(s); });
  return out;
}

/// Rows restricted to `dataset` (all when empty), each paired with its
/// config. Throws unless every (dataset, instance) group holds each of the
/// 72 configurations exactly once.
inline std::vector<std::pair<const RatioRow*, SchedulerConfig>> balanced_rows(std::span<const RatioRow> rows,
                                                                              std::string_view dataset) {
  const auto all = enumerate_configs();
  std::vector<std::pair<const RatioRow*, SchedulerConfig>> out;
  std::map<std::pair<std::string, std::size_t>, std::vector<int>> seen;
  for (const auto& r : rows) {
    if (!dataset.empty() && r.dataset != dataset) continue;
    auto cfg = parse_scheduler_name(r.scheduler);
    if (!cfg) throw precondition_error("unknown scheduler '" + r.scheduler + "'");
    auto pos = std::ranges::find(all, *cfg, &NamedConfig::config) - all.begin();
    auto& hits = seen[{r.dataset, r.instance_index}];
    hits.resize(all.size());
    ++hits[static_cast<std::size_t>(pos)];
    out.emplace_back(&r, *cfg);
  }
  if (out.empty()) throw precondition_error("no result rows to analyze");
  for (const auto& [key, hits] : seen)
    for (std::size_t i = 0; i < hits.size(); ++i)
      if (hits[i] != 1)
        throw precondition_error("incomplete cross product: " + key.first + " instance " + std::to_string(key.second) +
                                 " has " + std::to_string(hits[i]) + " rows for " + all[i].name +
                                 "; component means would be confounded");
  return out;
}

}  // namespace detail

/// Mean ratios per level of each of the five components.
inline std::vector<EffectRow> component_effects(std::span<const RatioRow> rows, std::string_view dataset = {}) {
  auto balanced = detail::balanced_rows(rows, dataset);
  std::vector<EffectRow> out;
  for (auto parameter : component_parameters) {
    for (const auto& level : detail::component_levels(parameter)) {
      double mr = 0.0, rr = 0.0;
      std::size_t n = 0;
      for (const auto& [row, cfg] : balanced) {
        if (detail::level_of(parameter, *row, cfg) != level) continue;
        mr += row->makespan_ratio;
        rr += row->runtime_ratio;
        ++n;
      }
      out.push_back({std::string(parameter), level, mr / static_cast<double>(n), rr / static_cast<double>(n)});
    }
  }
  return out;
}

/// Cell means over every (level_a, level_b) pair. Either parameter may be a
/// component or one of "dataset_type", "ccr", "dataset".
inline std::vector<InteractionRow> interaction_effects(std::span<const RatioRow> rows, std::string_view param_a,
                                                       std::string_view param_b, std::string_view dataset = {}) {
  if (param_a == param_b) throw precondition_error("interaction needs two distinct parameters");
  for (auto p : {param_a, param_b})
    if (!detail::is_known_parameter(p)) throw precondition_error("unknown parameter '" + std::string(p) + "'");
  auto balanced = detail::balanced_rows(rows, dataset);

  std::map<std::pair<std::string, std::string>, std::tuple<double, double, std::size_t>> cells;
  std::set<std::string> seen_a, seen_b;
  for (const auto& [row, cfg] : balanced) {
    auto a = detail::level_of(param_a, *row, cfg);
    auto b = detail::level_of(param_b, *row, cfg);
    seen_a.insert(a);
    seen_b.insert(b);
    auto& [mr, rr, n] = cells[{a, b}];
    mr += row->makespan_ratio;
    rr += row->runtime_ratio;
    ++n;
  }
  std::vector<InteractionRow> out;
  for (const auto& a : detail::ordered_levels(param_a, seen_a))
    for (const auto& b : detail::ordered_levels(param_b, seen_b)) {
      auto it = cells.find({a, b});
      if (it == cells.end()) continue;
      const auto& [mr, rr, n] = it->second;
      out.push_back({std::string(param_a), a, std::string(param_b), b, mr / static_cast<double>(n),
                     rr / static_cast<double>(n)});
    }
  return out;
}

inline std::string write_effects_csv(std::span<const EffectRow> rows) {
  std::ostringstream out;
  out << "parameter,level,mean_makespan_ratio,mean_runtime_ratio\n";
  for (const auto& r : rows)
    out << r.parameter << ',' << r.level << ',' << format_number(r.mean_makespan_ratio) << ','
        << format_number(r.mean_runtime_ratio) << '\n';
  return out.str();
}

inline std::string write_interactions_csv(std::span<const InteractionRow> rows) {
  std::ostringstream out;
  out << "parameter_a,level_a,parameter_b,level_b,mean_makespan_ratio,mean_runtime_ratio\n";
  for (const auto& r : rows)
    out << r.parameter_a << ',' << r.level_a << ',' << r.parameter_b << ',' << r.level_b << ','
        << format_number(r.mean_makespan_ratio) << ',' << format_number(r.mean_runtime_ratio) << '\n';
  return out.str();
}

// Exhaustive oracle -----------------------------------------------------------

namespace detail {

struct OracleSearch {
  const ProblemInstance& inst;
  std::vector<std::optional<PartialSchedule::Slot>> placed;
  std::vector<std::vector<std::pair<double, double>>> busy;  // per node, unsorted
  std::vector<std::size_t> waiting;
  double best = std::numeric_limits<double>::infinity();

  // Earliest start >= ready where [start, start + length) meets no busy
  // interval. Only `ready` and busy ends can be such a start.
  double earliest_start(std::size_t node, double ready, double length) const {
    std::vector<double> starts{ready};
    for (const auto& [s, e] : busy[node])
      if (e > ready) starts.push_back(e);
    std::ranges::sort(starts);
    for (double s : starts) {
      bool clear = true;
      for (const auto& [bs, be] : busy[node])
        if (s < be && bs < s + length) {
          clear = false;
          break;
        }
      if (clear) return s;
    }
    return starts.back();  // unreachable: the last busy end is always clear
  }

  void search(std::size_t done, double current) {
    if (current >= best) return;
    const auto& g = inst.task_graph;
    if (done == g.size()) {
      best = current;
      return;
    }
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (placed[t] || waiting[t] != 0) continue;
      for (std::size_t v = 0; v < inst.network.size(); ++v) {
        double ready = 0.0;
        for (const auto& p : g.predecessors(t)) {
          const auto& ps = *placed[p.task];
          ready = std::max(ready, ps.end + (ps.node == v ? 0.0 : p.size / inst.network.strength(ps.node, v)));
        }
        const double length = g.cost(t) / inst.network.speed(v);
        const double start = earliest_start(v, ready, length);
        placed[t] = PartialSchedule::Slot{t, v, start, start + length};
        busy[v].emplace_back(start, start + length);
        for (const auto& s : g.successors(t)) --waiting[s.task];
        search(done + 1, std::max(current, start + length));
        for (const auto& s : g.successors(t)) ++waiting[s.task];
        busy[v].pop_back();
        placed[t].reset();
      }
    }
  }
};

}  // namespace detail

/// Minimum makespan over every task-to-node assignment and every
/// topological order, each task placed in its earliest idle window.
/// Limited to 8 tasks and 3 nodes.
inline double brute_force_min_makespan(const ProblemInstance& inst) {
  const auto& g = inst.task_graph;
  if (g.size() > 8 || inst.network.size() > 3)
    throw precondition_error("brute_force_min_makespan: instance exceeds 8 tasks / 3 nodes");
  if (g.empty()) return 0.0;
  if (inst.network.empty()) throw invalid_instance("network has no nodes");
  detail::OracleSearch s{inst, std::vector<std::optional<PartialSchedule::Slot>>(g.size()),
                         std::vector<std::vector<std::pair<double, double>>>(inst.network.size()),
                         std::vector<std::size_t>(g.size()), std::numeric_limits<double>::infinity()};
  for (std::size_t t = 0; t < g.size(); ++t) s.waiting[t] = g.predecessors(t).size();
  s.search(0, 0.0);
  return s.best;
}

}  // namespace paramsched
