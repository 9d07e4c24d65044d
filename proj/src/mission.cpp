#include "auvplan/mission.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "auvplan/rng.hpp"

namespace auvplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double remaining_expected(const Route& r, std::size_t from, const std::vector<double>& times) {
  double sum = 0.0;
  for (std::size_t i = from; i < r.edges.size(); ++i) sum += times[r.edges[i]];
  return sum;
}

}  // namespace

void MissionConfig::validate() const {
  if (!(battery_lifetime > 0.0)) throw RouteError("MissionConfig: battery lifetime must be positive");
  if (!(cruise_speed > 0.0)) throw RouteError("MissionConfig: cruise speed must be positive");
  if (!(synthetic_compute_time >= 0.0)) throw RouteError("MissionConfig: synthetic compute time must be nonnegative");
  if (!(replan_tolerance >= 0.0)) throw RouteError("MissionConfig: replan tolerance must be nonnegative");
  limits.validate();
  route_params.validate();
  path_params.validate();
  path_config.validate();
}

const char* to_string(MissionStatus s) noexcept {
  switch (s) {
    case MissionStatus::Completed:
      return "completed";
    case MissionStatus::TimedOut:
      return "timed out";
    case MissionStatus::Stranded:
      return "stranded";
  }
  return "unknown";
}

MissionLog run_mission(const OperationGraph& graph, const CurrentField& field, NodeId start, NodeId target,
                       const MissionConfig& cfg) {
  cfg.validate();
  if (start >= graph.node_count() || target >= graph.node_count()) throw RouteError("run_mission: bad node id");
  if (start == target) throw RouteError("run_mission: start and target must differ");
  if (std::abs(graph.cruise_speed() - cfg.cruise_speed) > 1e-12 * cfg.cruise_speed)
    throw RouteError("run_mission: mission cruise speed differs from the graph's");

  const std::vector<double> expected = graph.expected_times();
  MissionLog log;
  log.start = start;
  log.target = target;
  log.battery_lifetime = cfg.battery_lifetime;

  std::vector<bool> visited(graph.edge_count(), false);
  double remaining = cfg.battery_lifetime;
  std::size_t route_plans = 0;
  std::size_t traversed = 0;
  double last_compute = 0.0;

  // Plans from `from` against the current remaining time; true on success.
  auto plan = [&](NodeId from) -> bool {
    foa::FoaParams params = cfg.route_params;
    params.rng_seed = mix_seed(cfg.rng_seed, 2 * route_plans++);
    RoutePlanOptions opts;
    opts.cost_variant = cfg.cost_variant;
    opts.strict_budget = cfg.strict_budget;
    opts.excluded_edges = visited;
    const RouteBudget budget{cfg.battery_lifetime, remaining};

    const auto t0 = Clock::now();
    auto compute_time = [&] {
      const double wall = seconds_since(t0);
      last_compute = cfg.compute_time_mode == ComputeTimeMode::Synthetic ? cfg.synthetic_compute_time : wall;
      return wall;
    };
    try {
      RoutePlan p = plan_route(graph, from, target, budget, expected, params, opts);
      RouteRecord rec;
      rec.wall_seconds = compute_time();
      rec.route = std::move(p.route);
      rec.planned_after_edges = traversed;
      rec.budget = remaining;
      rec.infeasible_fraction = p.infeasible_fraction;
      rec.convergence = std::move(p.optimization.best_cost_history);
      rec.compute_time = last_compute;
      log.routes.push_back(std::move(rec));
      return true;
    } catch (const NoFeasibleRoute& e) {
      compute_time();
      log.diagnostics = e.what();
      return false;
    }
  };

  if (!plan(start)) {
    log.status = MissionStatus::Stranded;
    log.mission_cost = mission_cost(log, cfg.battery_lifetime);
    return log;
  }

  NodeId at = start;
  std::size_t step = 0;  // index into the active route
  bool fallback_tried = false;
  log.status = MissionStatus::Completed;

  while (at != target) {
    // Nominal remainder no longer fits: try the fastest route once.
    if (!fallback_tried && remaining_expected(log.routes.back().route, step, expected) > remaining) {
      fallback_tried = true;
      const auto t0 = Clock::now();
      auto quick = shortest_time_route(graph, at, target, expected, &visited);
      if (quick && quick->total_time < remaining_expected(log.routes.back().route, step, expected)) {
        quick->cost = route_cost(quick->total_time, std::max(remaining, 1e-9), cfg.cost_variant);
        log.routes.back().abandoned_after_edges = traversed;
        RouteRecord rec;
        rec.wall_seconds = seconds_since(t0);
        rec.route = std::move(*quick);
        rec.planned_after_edges = traversed;
        rec.budget = remaining;
        rec.shortest_time_fallback = true;
        log.routes.push_back(std::move(rec));
        step = 0;
      }
    }

    const Route& active = log.routes.back().route;
    const EdgeId e = active.edges[step];
    const NodeId next = active.nodes[step + 1];

    foa::FoaParams params = cfg.path_params;
    params.rng_seed = mix_seed(cfg.rng_seed, 2 * traversed + 1);
    const auto t0 = Clock::now();
    PathPlan pp = plan_path(graph.node(at).position, graph.node(next).position, field, cfg.limits, cfg.cruise_speed,
                            params, cfg.path_config);

    EdgeRecord rec;
    rec.plan_wall_seconds = seconds_since(t0);
    rec.edge = e;
    rec.from = at;
    rec.to = next;
    rec.expected_time = expected[e];
    rec.path_time = pp.path.path_time;
    rec.path_cost = pp.path.cost;
    rec.delay = realized_delay(rec.path_time, rec.expected_time);
    rec.violations = pp.path.violations;
    rec.convergence = std::move(pp.optimization.best_cost_history);

    remaining -= rec.path_time;
    rec.remaining_after = remaining;
    visited[e] = true;
    at = next;
    ++step;
    ++traversed;
    log.edges.push_back(std::move(rec));

    if (remaining < 0.0) {
      log.status = MissionStatus::TimedOut;
      log.diagnostics = "battery exhausted after " + std::to_string(traversed) + " edges";
      break;
    }
    if (at == target) break;

    const EdgeRecord& last = log.edges.back();
    if (last.path_time > last.expected_time * (1.0 + cfg.replan_tolerance)) {
      if (remaining <= 0.0) {
        log.status = MissionStatus::TimedOut;
        log.diagnostics = "no time left to re-plan";
        break;
      }
      log.edges.back().replan_triggered = true;
      log.routes.back().abandoned_after_edges = traversed;
      ++log.replans;
      const bool replanned = plan(at);
      log.compute_time_total += last_compute;
      if (!replanned) {
        log.status = MissionStatus::Stranded;
        break;
      }
      if (cfg.compute_drains_battery) {
        remaining -= last_compute;
        if (remaining < 0.0) {
          log.status = MissionStatus::TimedOut;
          log.diagnostics = "battery exhausted while re-planning";
          break;
        }
      }
      step = 0;
      fallback_tried = false;
    }
  }

  log.route_time = 0.0;
  for (const auto& r : log.edges) log.route_time += r.path_time;
  log.remaining_time = remaining;
  log.mission_cost = mission_cost(log, cfg.battery_lifetime);
  return log;
}

double mission_cost(const MissionLog& log, double battery_lifetime) {
  if (!(battery_lifetime > 0.0)) throw RouteError("mission_cost: battery lifetime must be positive");
  double realized = 0.0;
  double route_time = 0.0;
  for (const auto& e : log.edges) {
    realized += e.path_cost + e.delay;
    route_time += e.path_time;
  }
  const double route_term = std::abs(realized - battery_lifetime) * std::max(0.0, route_time / battery_lifetime);
  return route_term + log.compute_time_total;
}

}  // namespace auvplan
