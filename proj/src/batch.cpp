#include "auvplan/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace auvplan {

World build_world(const NetworkParams& graph, const FieldGenerationParams& field) {
  return World{generate_network(graph), generate_field(field)};
}

World build_world(const ExperimentConfig& cfg) { return build_world(cfg.graph, cfg.field); }

NodeId resolve_start(const ExperimentConfig& cfg, const OperationGraph& g) {
  return cfg.start.value_or(g.default_start());
}

NodeId resolve_target(const ExperimentConfig& cfg, const OperationGraph& g) {
  return cfg.target.value_or(g.default_target());
}

ColumnStats column_stats(std::span<const double> v) {
  ColumnStats s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

bool BatchSummary::all_completed() const {
  return std::all_of(rows.begin(), rows.end(), [](const TrialRow& r) { return r.status == MissionStatus::Completed; });
}

std::vector<std::size_t> BatchSummary::trials_with(MissionStatus status) const {
  std::vector<std::size_t> ids;
  for (const auto& r : rows) {
    if (r.status == status) ids.push_back(r.trial);
  }
  return ids;
}

void summarize(BatchSummary& s) {
  auto column = [&](auto get) {
    std::vector<double> v;
    v.reserve(s.rows.size());
    for (const auto& r : s.rows) v.push_back(static_cast<double>(get(r)));
    return column_stats(v);
  };
  s.aggregates.clear();
  s.aggregates["route_time"] = column([](const TrialRow& r) { return r.route_time; });
  s.aggregates["remaining_time"] = column([](const TrialRow& r) { return r.remaining_time; });
  s.aggregates["replans"] = column([](const TrialRow& r) { return r.replans; });
  s.aggregates["edges"] = column([](const TrialRow& r) { return r.edges; });
  s.timing_aggregates.clear();
  s.timing_aggregates["compute_time_total"] = column([](const TrialRow& r) { return r.compute_time_total; });
  s.timing_aggregates["mission_cost"] = column([](const TrialRow& r) { return r.mission_cost; });
  s.timing_aggregates["route_plan_wall"] = column([](const TrialRow& r) { return r.route_plan_wall; });
  s.timing_aggregates["mean_path_plan_wall"] = column([](const TrialRow& r) { return r.mean_path_plan_wall; });

  double rel = 0.0;
  std::size_t n = 0;
  for (const auto& r : s.rows) {
    for (auto [expected, realized] : r.edge_times) {
      if (expected > 0.0) {
        rel += std::abs(realized - expected) / expected;
        ++n;
      }
    }
  }
  s.mean_relative_deviation = n ? rel / static_cast<double>(n) : 0.0;
}

BatchSummary run_batch(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<World> shared;
  if (!cfg.batch.fresh_world) shared = build_world(cfg);

  BatchSummary summary;
  summary.rows.resize(cfg.batch.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.batch.trials; i = next++) {
      try {
        const std::uint64_t offset = static_cast<std::uint64_t>(i) * cfg.batch.seed_stride;
        std::optional<World> own;
        if (!shared) {
          NetworkParams gp = cfg.graph;
          FieldGenerationParams fp = cfg.field;
          gp.seed += offset;
          fp.seed += offset;
          own = build_world(gp, fp);
        }
        const World& w = shared ? *shared : *own;
        MissionConfig mc = cfg.mission;
        mc.rng_seed += offset;
        const MissionLog log =
            run_mission(w.graph, w.field, resolve_start(cfg, w.graph), resolve_target(cfg, w.graph), mc);

        TrialRow& row = summary.rows[i];
        row.trial = i;
        row.seed = mc.rng_seed;
        row.status = log.status;
        row.route_time = log.route_time;
        row.remaining_time = log.remaining_time;
        row.replans = log.replans;
        row.edges = log.edges.size();
        row.compute_time_total = log.compute_time_total;
        row.mission_cost = log.mission_cost;
        for (const auto& r : log.routes) row.route_plan_wall += r.wall_seconds;
        double path_wall = 0.0;
        for (const auto& e : log.edges) {
          path_wall += e.plan_wall_seconds;
          row.edge_times.emplace_back(e.expected_time, e.path_time);
        }
        row.mean_path_plan_wall = log.edges.empty() ? 0.0 : path_wall / static_cast<double>(log.edges.size());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t width = std::min(cfg.batch.workers, cfg.batch.trials);
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < width; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  summarize(summary);
  return summary;
}

}  // namespace auvplan
