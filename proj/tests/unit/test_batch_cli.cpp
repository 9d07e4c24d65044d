#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "auvplan/batch.hpp"
#include "auvplan/cli.hpp"
#include "auvplan/io.hpp"
#include "doctest.h"

using namespace auvplan;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Small but complete experiment so CLI round trips stay fast.
json small_config() {
  return {{"graph", {{"nodes", 12}, {"neighbors", 3}}},
          {"route", {{"population", 10}, {"iterations", 20}}},
          {"path", {{"population", 8}, {"iterations", 25}, {"samples", 30}}},
          {"mission", {{"compute_time", "synthetic"}, {"synthetic_compute", 1.5}}},
          {"batch", {{"trials", 3}}}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("auvplan_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "auvplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string config_file(const fs::path& dir, const json& cfg) {
  const fs::path p = dir / "config.json";
  io::write_json_file(p, cfg);
  return p.string();
}

}  // namespace

TEST_CASE("column statistics") {
  const std::vector<double> v{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  const ColumnStats s = column_stats(v);
  CHECK(s.min == 2.0);
  CHECK(s.max == 9.0);
  CHECK(s.mean == 5.0);
  CHECK(s.stddev == doctest::Approx(std::sqrt(32.0 / 7.0)));
  const ColumnStats one = column_stats(std::vector<double>{3.5});
  CHECK(one.min == 3.5);
  CHECK(one.max == 3.5);
  CHECK(one.mean == 3.5);
  CHECK(one.stddev == 0.0);
}

TEST_CASE("batch rows and aggregates") {
  ExperimentConfig cfg = config_from_json(small_config());
  SUBCASE("single trial aggregates equal the row") {
    cfg.batch.trials = 1;
    const BatchSummary s = run_batch(cfg);
    REQUIRE(s.rows.size() == 1);
    CHECK(s.aggregates.at("remaining_time").mean == s.rows[0].remaining_time);
    CHECK(s.aggregates.at("remaining_time").min == s.rows[0].remaining_time);
    CHECK(s.aggregates.at("route_time").max == s.rows[0].route_time);
    CHECK(s.aggregates.at("remaining_time").stddev == 0.0);
  }
  SUBCASE("worker count does not change results") {
    cfg.batch.trials = 4;
    const BatchSummary serial = run_batch(cfg);
    cfg.batch.workers = 3;
    const BatchSummary pooled = run_batch(cfg);
    REQUIRE(serial.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(serial.rows[i].trial == i);
      CHECK(pooled.rows[i].trial == i);
      CHECK(serial.rows[i].remaining_time == pooled.rows[i].remaining_time);
      CHECK(serial.rows[i].edge_times == pooled.rows[i].edge_times);
    }
    // Aggregates are recomputable from the rows.
    BatchSummary copy;
    copy.rows = serial.rows;
    summarize(copy);
    for (const auto& [k, v] : serial.aggregates) {
      CHECK(copy.aggregates.at(k).mean == doctest::Approx(v.mean).epsilon(1e-12));
      CHECK(copy.aggregates.at(k).stddev == doctest::Approx(v.stddev).epsilon(1e-12));
    }
    for (const auto& r : serial.rows) {
      CHECK(r.status == MissionStatus::Completed);
      CHECK(r.remaining_time >= 0.0);
      CHECK(r.route_time <= cfg.mission.battery_lifetime);
      CHECK(r.compute_time_total == 1.5 * static_cast<double>(r.replans));
    }
    CHECK(serial.mean_relative_deviation < 0.25);
  }
  SUBCASE("fresh worlds differ per trial") {
    cfg.batch.trials = 2;
    cfg.batch.fresh_world = true;
    const BatchSummary s = run_batch(cfg);
    CHECK(s.rows[0].edge_times != s.rows[1].edge_times);
  }
}

TEST_CASE("cli gen-world writes replayable files") {
  const fs::path dir = scratch("gen");
  const std::string cfg = config_file(dir, small_config());
  REQUIRE(run_cli({"gen-world", "--config", cfg, "--out", (dir / "w").string()}) == cli::kSuccess);
  for (const char* f : {"graph.json", "field.json", "field.csv"}) CHECK(fs::exists(dir / "w" / f));

  const json graph = io::read_json_file(dir / "w" / "graph.json");
  CHECK(graph.contains("config"));
  CHECK(graph["config"]["graph"]["seed"] == 1);
  const ExperimentConfig resolved = config_from_json(graph["config"]);
  const World w = build_world(resolved);
  CHECK(io::graph_to_json(w.graph)["nodes"] == graph["nodes"]);
  const CurrentField f =
      io::field_from_files(io::read_json_file(dir / "w" / "field.json"), io::read_text_file(dir / "w" / "field.csv"));
  CHECK(f.grid() == w.field.grid());
  CHECK(io::read_text_file(dir / "w" / "field.csv").rfind("# config: ", 0) == 0);

  REQUIRE(run_cli({"gen-world", "--config", cfg, "--seed", "2", "--out", (dir / "w2").string()}) == cli::kSuccess);
  const json other = io::read_json_file(dir / "w2" / "graph.json");
  CHECK(other["nodes"][0]["position"] != graph["nodes"][0]["position"]);
}

TEST_CASE("cli run-mission from a world directory") {
  const fs::path dir = scratch("mission");
  const std::string cfg = config_file(dir, small_config());
  REQUIRE(run_cli({"gen-world", "--config", cfg, "--out", (dir / "w").string()}) == cli::kSuccess);
  REQUIRE(run_cli({"run-mission", "--config", cfg, "--world", (dir / "w").string(), "--out", (dir / "m").string()}) ==
          cli::kSuccess);
  const json log = io::read_json_file(dir / "m" / "mission.json");
  CHECK(log["status"] == "completed");
  const std::size_t n_edges = log["edges"].size();
  CHECK(n_edges > 0);
  CHECK(fs::exists(dir / "m" / "edges.csv"));
  CHECK(fs::exists(dir / "m" / "timing.json"));
  CHECK(fs::exists(dir / "m" / "convergence" / "route_0.csv"));
  for (std::size_t e = 0; e < n_edges; ++e)
    CHECK(fs::exists(dir / "m" / "convergence" / ("path_" + std::to_string(e) + ".csv")));

  SUBCASE("json tables") {
    REQUIRE(run_cli({"run-mission", "--config", cfg, "--format", "json", "--out", (dir / "mj").string()}) ==
            cli::kSuccess);
    const json edges = io::read_json_file(dir / "mj" / "edges.json");
    CHECK(edges["rows"].size() == n_edges);
    CHECK(edges.contains("config"));
  }
  SUBCASE("tiny budget times out") {
    json small = small_config();
    small["mission"]["battery_lifetime"] = 1.0;
    const std::string tight = config_file(dir, small);
    CHECK(run_cli({"run-mission", "--config", tight, "--out", (dir / "mt").string()}) == cli::kTimedOut);
    CHECK(io::read_json_file(dir / "mt" / "mission.json")["status"] == "timed out");
  }
  SUBCASE("mismatched world files are rejected") {
    json other = small_config();
    other["graph"]["bounds"] = {8000, 8000, 100};
    const std::string alt = config_file(dir, other);
    REQUIRE(run_cli({"gen-world", "--config", alt, "--out", (dir / "w_alt").string()}) == cli::kSuccess);
    fs::copy_file(dir / "w_alt" / "graph.json", dir / "w" / "graph.json", fs::copy_options::overwrite_existing);
    CHECK(run_cli({"run-mission", "--config", cfg, "--world", (dir / "w").string(), "--out", (dir / "mx").string()}) ==
          cli::kRuntimeError);
  }
}

TEST_CASE("cli run-batch, plan-route and plan-path") {
  const fs::path dir = scratch("batch");
  const std::string cfg = config_file(dir, small_config());
  REQUIRE(run_cli({"run-batch", "--config", cfg, "--trials", "2", "--out", (dir / "b").string()}) == cli::kSuccess);
  for (const char* f : {"trials.csv", "edge_times.csv", "timing.csv", "summary.json", "timing_summary.json"})
    CHECK(fs::exists(dir / "b" / f));
  const json summary = io::read_json_file(dir / "b" / "summary.json");
  CHECK(summary["trials"] == 2);
  CHECK(summary["config"]["batch"]["trials"] == 2);

  REQUIRE(run_cli({"gen-world", "--config", cfg, "--out", (dir / "w").string()}) == cli::kSuccess);
  REQUIRE(run_cli({"plan-route", "--config", cfg, "--world", (dir / "w").string(), "--budget", "5000", "--out",
               (dir / "r").string()}) == cli::kSuccess);
  const json route = io::read_json_file(dir / "r" / "route.json");
  CHECK(route["budget"] == 5000.0);
  CHECK(route["nodes"].size() == route["edges"].size() + 1);

  REQUIRE(run_cli({"plan-path", "--config", cfg, "--world", (dir / "w").string(), "--from", "0", "--to", "1", "--out",
               (dir / "p").string()}) == cli::kSuccess);
  const json path = io::read_json_file(dir / "p" / "path_summary.json");
  CHECK(path["path_time"].get<double>() > 0.0);
  CHECK(fs::exists(dir / "p" / "path.csv"));
}

TEST_CASE("cli exit codes for bad input") {
  const fs::path dir = scratch("errors");
  CHECK(run_cli({}) == cli::kConfigError);
  CHECK(run_cli({"fly"}) == cli::kConfigError);
  CHECK(run_cli({"run-mission", "--format", "xml"}) == cli::kConfigError);
  io::write_json_file(dir / "bad.json", {{"graph", {{"colour", "red"}}}});
  CHECK(run_cli({"gen-world", "--config", (dir / "bad.json").string(), "--out", dir.string()}) == cli::kConfigError);
  io::write_text_file(dir / "broken.json", "{ not json");
  CHECK(run_cli({"gen-world", "--config", (dir / "broken.json").string(), "--out", dir.string()}) == cli::kConfigError);
  CHECK(run_cli({"plan-path", "--from", "0"}) == cli::kConfigError);
}
