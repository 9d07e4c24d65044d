#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auvplan/current_field.hpp"
#include "auvplan/foa.hpp"
#include "auvplan/ops_graph.hpp"
#include "auvplan/path_planner.hpp"
#include "auvplan/route_planner.hpp"

namespace auvplan {

enum class ComputeTimeMode { Measured, Synthetic };

struct MissionConfig {
  double battery_lifetime = 7200.0;  // s
  double cruise_speed = knots_to_mps(5.0);
  KinematicLimits limits;
  foa::FoaParams route_params{30, 100, 1.0, 1.0, 0.5, 0.97, 1};
  foa::FoaParams path_params{20, 100, 1.0, 1.0, 0.1, 0.97, 1};
  PathPlannerConfig path_config;
  ComputeTimeMode compute_time_mode = ComputeTimeMode::Measured;
  double synthetic_compute_time = 0.0;  // s per re-plan, synthetic mode only
  bool compute_drains_battery = false;
  bool strict_budget = true;
  RouteCostVariant cost_variant = RouteCostVariant::Literal;
  /// Relative slack on the re-plan trigger; absorbs chord-sum rounding only.
  double replan_tolerance = 1e-9;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

enum class MissionStatus { Completed, TimedOut, Stranded };

const char* to_string(MissionStatus s) noexcept;

struct EdgeRecord {
  EdgeId edge = 0;
  NodeId from = 0;
  NodeId to = 0;
  double expected_time = 0.0;  // t_ij
  double path_time = 0.0;      // realized T_phi
  double path_cost = 0.0;      // C_phi
  double delay = 0.0;          // max(0, T_phi - t_ij)
  Violations violations;
  bool replan_triggered = false;
  double remaining_after = 0.0;
  double plan_wall_seconds = 0.0;
  std::vector<double> convergence;  // best-so-far cost per FOA iteration
};

struct RouteRecord {
  Route route;
  std::size_t planned_after_edges = 0;  // edges traversed when this route was planned
  std::optional<std::size_t> abandoned_after_edges;
  double budget = 0.0;  // remaining time the route was planned against
  double compute_time = 0.0;
  double wall_seconds = 0.0;
  bool shortest_time_fallback = false;
  double infeasible_fraction = 0.0;
  std::vector<double> convergence;
};

struct MissionLog {
  MissionStatus status = MissionStatus::Completed;
  NodeId start = 0;
  NodeId target = 0;
  double battery_lifetime = 0.0;
  std::vector<EdgeRecord> edges;
  std::vector<RouteRecord> routes;
  double route_time = 0.0;      // T_Route, sum of realized path times
  double remaining_time = 0.0;  // T_remained
  std::size_t replans = 0;      // r
  double compute_time_total = 0.0;
  double mission_cost = 0.0;    // C_tau
  std::string diagnostics;
};

/// Traverses the planned route edge by edge through the local path planner
/// and re-routes from the current node over the unvisited edges whenever an
/// edge takes longer than expected.
MissionLog run_mission(const OperationGraph& graph, const CurrentField& field, NodeId start, NodeId target,
                       const MissionConfig& config);

/// Budget-fit cost of the realized route (path cost plus delay per edge)
/// plus the compute time of every re-plan.
double mission_cost(const MissionLog& log, double battery_lifetime);

}  // namespace auvplan
