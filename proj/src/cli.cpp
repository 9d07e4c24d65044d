#include "auvplan/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "auvplan/batch.hpp"
#include "auvplan/config.hpp"
#include "auvplan/io.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/path_planner.hpp"
#include "auvplan/route_planner.hpp"

namespace auvplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> synthetic_compute;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> workers;
  bool fresh_world = false;
  std::string world_dir;
  std::optional<NodeId> start;
  std::optional<NodeId> target;
  std::optional<double> budget;
};

ExperimentConfig resolve_config(const CommonFlags& f) {
  json doc = json::object();
  if (!f.config_path.empty()) {
    try {
      doc = io::read_json_file(f.config_path);
    } catch (const io::IoError& e) {
      throw ConfigError(e.what());
    }
  }
  apply_env_overrides(doc, planner_environment());
  if (f.seed) {
    doc["graph"]["seed"] = *f.seed;
    doc["field"]["seed"] = *f.seed;
    doc["mission"]["seed"] = *f.seed;
  }
  if (f.out) doc["output"]["dir"] = *f.out;
  if (f.format) doc["output"]["format"] = *f.format;
  if (f.synthetic_compute) {
    doc["mission"]["compute_time"] = "synthetic";
    doc["mission"]["synthetic_compute"] = *f.synthetic_compute;
  }
  if (f.trials) doc["batch"]["trials"] = *f.trials;
  if (f.workers) doc["batch"]["workers"] = *f.workers;
  if (f.fresh_world) doc["batch"]["fresh_world"] = true;
  if (f.start) doc["graph"]["start"] = *f.start;
  if (f.target) doc["graph"]["target"] = *f.target;
  return config_from_json(doc);
}

// Loads graph + field from a gen-world directory, or builds them from config.
World load_world(const CommonFlags& f, ExperimentConfig& cfg) {
  if (f.world_dir.empty()) return build_world(cfg);
  const fs::path dir(f.world_dir);
  const json graph_doc = io::read_json_file(dir / "graph.json");
  const json field_doc = io::read_json_file(dir / "field.json");
  if (graph_doc.contains("config") && field_doc.contains("config") && graph_doc["config"] != field_doc["config"])
    throw io::IoError("world files disagree: graph and field were generated from different configs");
  OperationGraph g = io::graph_from_json(graph_doc);
  CurrentField field = io::field_from_files(field_doc, io::read_text_file(dir / "field.csv"));
  if (field.extent_x() != g.bounds().x || field.extent_y() != g.bounds().y)
    throw io::IoError("world files disagree: field extent does not match graph bounds");
  cfg.mission.cruise_speed = g.cruise_speed();
  cfg.graph.cruise_speed = g.cruise_speed();
  return World{std::move(g), std::move(field)};
}

void write_table(const fs::path& stem, const json& config, const std::string& csv, const json& rows,
                 const std::string& format) {
  if (format == "json") {
    io::write_json_file(stem.string() + ".json", {{"config", config}, {"rows", rows}});
  } else {
    io::write_text_file(stem.string() + ".csv", io::with_config_header(config, csv));
  }
}

json csv_rows_to_json(const std::string& csv) {
  json rows = json::array();
  std::vector<std::string> header;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    const std::string line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    std::vector<std::string> cells;
    std::size_t s = 0;
    for (std::size_t c = line.find(','); ; c = line.find(',', s)) {
      cells.push_back(line.substr(s, c == std::string::npos ? std::string::npos : c - s));
      if (c == std::string::npos) break;
      s = c + 1;
    }
    if (header.empty()) {
      header = cells;
      continue;
    }
    json row = json::object();
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      json v = json::parse(cells[i], nullptr, false);
      row[header[i]] = v.is_discarded() ? json(cells[i]) : v;
    }
    rows.push_back(row);
  }
  return rows;
}

int cmd_gen_world(const CommonFlags& f) {
  ExperimentConfig cfg = resolve_config(f);
  const World w = build_world(cfg);
  const json conf = config_to_json(cfg);
  const fs::path out(cfg.output.dir);
  json graph = io::graph_to_json(w.graph);
  graph["config"] = conf;
  json header = io::field_header_to_json(w.field);
  header["config"] = conf;
  io::write_json_file(out / "graph.json", graph);
  io::write_json_file(out / "field.json", header);
  io::write_text_file(out / "field.csv", io::with_config_header(conf, io::field_to_csv(w.field)));
  std::cout << "wrote world (" << w.graph.node_count() << " nodes, " << w.graph.edge_count() << " edges, "
            << w.field.vortices().size() << " vortices) to " << out.string() << "\n";
  return kSuccess;
}

int status_code(MissionStatus s) {
  switch (s) {
    case MissionStatus::Completed:
      return kSuccess;
    case MissionStatus::Stranded:
      return kStranded;
    case MissionStatus::TimedOut:
      return kTimedOut;
  }
  return kRuntimeError;
}

int cmd_run_mission(const CommonFlags& f) {
  ExperimentConfig cfg = resolve_config(f);
  const World w = load_world(f, cfg);
  const NodeId start = resolve_start(cfg, w.graph);
  const NodeId target = resolve_target(cfg, w.graph);
  const MissionLog log = run_mission(w.graph, w.field, start, target, cfg.mission);

  const json conf = config_to_json(cfg);
  const fs::path out(cfg.output.dir);
  json doc = io::mission_log_to_json(log);
  doc["config"] = conf;
  io::write_json_file(out / "mission.json", doc);
  json timing = io::mission_timing_to_json(log);
  timing["config"] = conf;
  io::write_json_file(out / "timing.json", timing);
  const std::string edges = io::mission_edges_to_csv(log);
  write_table(out / "edges", conf, edges, csv_rows_to_json(edges), cfg.output.format);
  for (std::size_t k = 0; k < log.routes.size(); ++k) {
    if (log.routes[k].convergence.empty()) continue;
    const std::string csv = io::convergence_to_csv(log.routes[k].convergence);
    write_table(out / "convergence" / ("route_" + std::to_string(k)), conf, csv, csv_rows_to_json(csv),
                cfg.output.format);
  }
  for (std::size_t e = 0; e < log.edges.size(); ++e) {
    const std::string csv = io::convergence_to_csv(log.edges[e].convergence);
    write_table(out / "convergence" / ("path_" + std::to_string(e)), conf, csv, csv_rows_to_json(csv),
                cfg.output.format);
  }
  std::cout << "mission " << to_string(log.status) << ": " << log.edges.size() << " edges, " << log.replans
            << " re-plans, T_route " << log.route_time << " s, T_remained " << log.remaining_time << " s\n";
  if (!log.diagnostics.empty()) std::cerr << log.diagnostics << "\n";
  return status_code(log.status);
}

int cmd_run_batch(const CommonFlags& f) {
  const ExperimentConfig cfg = resolve_config(f);
  const BatchSummary s = run_batch(cfg);
  const json conf = config_to_json(cfg);
  const fs::path out(cfg.output.dir);

  std::string rows = "trial,seed,status,route_time,remaining_time,replans,edges\n";
  std::string timing = "trial,compute_time_total,mission_cost,route_plan_wall,mean_path_plan_wall\n";
  std::string pairs = "trial,index,expected_time,path_time\n";
  for (const auto& r : s.rows) {
    rows += std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' + to_string(r.status) + ',' +
            io::format_double(r.route_time) + ',' + io::format_double(r.remaining_time) + ',' +
            std::to_string(r.replans) + ',' + std::to_string(r.edges) + '\n';
    timing += std::to_string(r.trial) + ',' + io::format_double(r.compute_time_total) + ',' +
              io::format_double(r.mission_cost) + ',' + io::format_double(r.route_plan_wall) + ',' +
              io::format_double(r.mean_path_plan_wall) + '\n';
    for (std::size_t i = 0; i < r.edge_times.size(); ++i) {
      pairs += std::to_string(r.trial) + ',' + std::to_string(i) + ',' + io::format_double(r.edge_times[i].first) +
               ',' + io::format_double(r.edge_times[i].second) + '\n';
    }
  }
  auto stats_json = [](const std::map<std::string, ColumnStats>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = {{"min", v.min}, {"max", v.max}, {"mean", v.mean}, {"stddev", v.stddev}};
    return j;
  };
  write_table(out / "trials", conf, rows, csv_rows_to_json(rows), cfg.output.format);
  write_table(out / "edge_times", conf, pairs, csv_rows_to_json(pairs), cfg.output.format);
  write_table(out / "timing", conf, timing, csv_rows_to_json(timing), cfg.output.format);
  io::write_json_file(out / "summary.json", {{"config", conf},
                                             {"trials", s.rows.size()},
                                             {"aggregates", stats_json(s.aggregates)},
                                             {"mean_relative_deviation", s.mean_relative_deviation}});
  io::write_json_file(out / "timing_summary.json", {{"config", conf}, {"aggregates", stats_json(s.timing_aggregates)}});

  const auto& rem = s.aggregates.at("remaining_time");
  std::cout << "batch of " << s.rows.size() << " trials: T_remained mean " << rem.mean << " s (min " << rem.min
            << ", max " << rem.max << "), mean |T_phi - t_ij|/t_ij " << s.mean_relative_deviation << "\n";
  const auto stranded = s.trials_with(MissionStatus::Stranded);
  const auto timed_out = s.trials_with(MissionStatus::TimedOut);
  auto list = [](const char* what, const std::vector<std::size_t>& ids) {
    std::cerr << what << " trials:";
    for (auto id : ids) std::cerr << ' ' << id;
    std::cerr << "\n";
  };
  if (!stranded.empty()) list("stranded", stranded);
  if (!timed_out.empty()) list("timed out", timed_out);
  if (!stranded.empty()) return kStranded;
  if (!timed_out.empty()) return kTimedOut;
  return kSuccess;
}

int cmd_plan_route(const CommonFlags& f) {
  ExperimentConfig cfg = resolve_config(f);
  const World w = load_world(f, cfg);
  const NodeId start = resolve_start(cfg, w.graph);
  const NodeId target = resolve_target(cfg, w.graph);
  const double budget = f.budget.value_or(cfg.mission.battery_lifetime);
  foa::FoaParams params = cfg.mission.route_params;
  params.rng_seed = cfg.mission.rng_seed;
  RoutePlanOptions opts;
  opts.cost_variant = cfg.mission.cost_variant;
  opts.strict_budget = cfg.mission.strict_budget;
  const auto times = w.graph.expected_times();
  const RoutePlan plan = plan_route(w.graph, start, target, {budget, budget}, times, params, opts);

  json conf = config_to_json(cfg);
  const fs::path out(cfg.output.dir);
  json doc = io::route_to_json(plan.route, times);
  doc["infeasible_fraction"] = plan.infeasible_fraction;
  doc["evaluations"] = plan.optimization.evaluations;
  doc["budget"] = budget;
  doc["config"] = conf;
  io::write_json_file(out / "route.json", doc);
  const std::string csv = io::convergence_to_csv(plan.optimization.best_cost_history);
  write_table(out / "route_convergence", conf, csv, csv_rows_to_json(csv), cfg.output.format);
  std::cout << "route of " << plan.route.edges.size() << " edges, T_R " << plan.route.total_time << " s, cost "
            << plan.route.cost << "\n";
  return kSuccess;
}

int cmd_plan_path(const CommonFlags& f, NodeId from, NodeId to) {
  ExperimentConfig cfg = resolve_config(f);
  const World w = load_world(f, cfg);
  if (from >= w.graph.node_count() || to >= w.graph.node_count()) throw ConfigError("plan-path: node id out of range");
  foa::FoaParams params = cfg.mission.path_params;
  params.rng_seed = cfg.mission.rng_seed;
  const PathPlan plan = plan_path(w.graph.node(from).position, w.graph.node(to).position, w.field,
                                  cfg.mission.limits, cfg.mission.cruise_speed, params, cfg.mission.path_config);
  json conf = config_to_json(cfg);
  const fs::path out(cfg.output.dir);
  const std::string samples = io::path_to_csv(plan.path);
  write_table(out / "path", conf, samples, csv_rows_to_json(samples), cfg.output.format);
  json summary = io::path_summary_to_json(plan.path);
  summary["expected_time"] = distance(w.graph.node(from).position, w.graph.node(to).position) / cfg.mission.cruise_speed;
  summary["config"] = conf;
  io::write_json_file(out / "path_summary.json", summary);
  const std::string csv = io::convergence_to_csv(plan.optimization.best_cost_history);
  write_table(out / "path_convergence", conf, csv, csv_rows_to_json(csv), cfg.output.format);
  std::cout << "path T_phi " << plan.path.path_time << " s, C_phi " << plan.path.cost << "\n";
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"AUV route and local path planner with firefly optimisation"};
  app.require_subcommand(1);
  CommonFlags f;
  NodeId from = 0;
  NodeId to = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Seed for graph, field and mission streams");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--format", f.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_world = [&](CLI::App* sub) {
    sub->add_option("--world", f.world_dir, "Directory written by gen-world")->check(CLI::ExistingDirectory);
  };
  auto add_endpoints = [&](CLI::App* sub) {
    sub->add_option("--start", f.start, "Start node id");
    sub->add_option("--target", f.target, "Target node id");
  };

  auto* gen = app.add_subcommand("gen-world", "Generate a waypoint graph and current field");
  add_common(gen);

  auto* mission = app.add_subcommand("run-mission", "Run one mission with re-routing");
  add_common(mission);
  add_world(mission);
  add_endpoints(mission);
  mission->add_option("--synthetic-compute", f.synthetic_compute, "Fixed re-plan compute time in seconds");

  auto* batch = app.add_subcommand("run-batch", "Run a batch of missions");
  add_common(batch);
  batch->add_option("--trials", f.trials, "Number of missions");
  batch->add_option("--workers", f.workers, "Worker threads");
  batch->add_flag("--fresh-world", f.fresh_world, "Generate a new world for every trial");
  batch->add_option("--synthetic-compute", f.synthetic_compute, "Fixed re-plan compute time in seconds");

  auto* route = app.add_subcommand("plan-route", "Run the route planner once");
  add_common(route);
  add_world(route);
  add_endpoints(route);
  route->add_option("--budget", f.budget, "Time budget in seconds");

  auto* path = app.add_subcommand("plan-path", "Run the local path planner on one node pair");
  add_common(path);
  add_world(path);
  path->add_option("--from", from, "Start node id")->required();
  path->add_option("--to", to, "End node id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kConfigError;
  }

  try {
    if (*gen) return cmd_gen_world(f);
    if (*mission) return cmd_run_mission(f);
    if (*batch) return cmd_run_batch(f);
    if (*route) return cmd_plan_route(f);
    if (*path) return cmd_plan_path(f, from, to);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kRuntimeError;
}

}  // namespace auvplan::cli
