#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "auvplan/foa.hpp"
#include "auvplan/ops_graph.hpp"

namespace auvplan {

/// Battery lifetime and what is left of it, both in seconds.
struct RouteBudget {
  double battery_lifetime = 7200.0;
  double remaining = 7200.0;

  void validate() const;
};

/// Edge walk from start to target; no edge is used twice.
struct Route {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  double total_time = 0.0;  // s
  double cost = 0.0;
};

class RouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoFeasibleRoute : public RouteError {
 public:
  NoFeasibleRoute(std::size_t population, std::size_t iterations, double infeasible_fraction);

  std::size_t population;
  std::size_t iterations;
  double infeasible_fraction;
};

enum class RouteCostVariant {
  Literal,       // |T - T_tau| * max(0, T / T_tau)
  OvertimeOnly,  // |T - T_tau| * max(0, (T - T_tau) / T_tau)
};

/// Budget-fit cost of a route lasting `route_time` against `budget`.
double route_cost(double route_time, double budget, RouteCostVariant variant = RouteCostVariant::Literal);

/// Sum of per-edge times (indexed by EdgeId) along the route. A missing or
/// NaN entry is an error.
double route_time(const Route& route, std::span<const double> per_edge_times);

/// Greedy random-keys decode: from the current node take the unused incident
/// edge whose far endpoint has the highest key (lowest id on ties) until the
/// target is reached. `excluded` marks edges that may not be used. Returns
/// nullopt when the walk gets stuck.
std::optional<Route> decode_route(std::span<const double> keys, const OperationGraph& graph, NodeId start,
                                  NodeId target, const std::vector<bool>* excluded = nullptr);

/// Minimum-time route over the non-excluded edges (Dijkstra).
std::optional<Route> shortest_time_route(const OperationGraph& graph, NodeId start, NodeId target,
                                         std::span<const double> per_edge_times,
                                         const std::vector<bool>* excluded = nullptr);

struct RoutePlanOptions {
  RouteCostVariant cost_variant = RouteCostVariant::Literal;
  /// Ranks every route that overruns the remaining budget behind every route
  /// that fits it.
  bool strict_budget = false;
  std::vector<bool> excluded_edges;  // empty means none
};

struct RoutePlan {
  Route route;
  std::vector<double> edge_times;  // expected time of each route edge, in order
  foa::OptimizeResult optimization;
  double infeasible_fraction = 0.0;
};

/// Firefly search over priority keys in [0,1]^|P|. The route cost is measured
/// against budget.remaining.
RoutePlan plan_route(const OperationGraph& graph, NodeId start, NodeId target, const RouteBudget& budget,
                     std::span<const double> per_edge_times, const foa::FoaParams& params,
                     const RoutePlanOptions& options = {});

}  // namespace auvplan
