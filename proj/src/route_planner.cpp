#include "auvplan/route_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

#include "auvplan/rng.hpp"

namespace auvplan {

namespace {

void check_endpoints(const OperationGraph& g, NodeId start, NodeId target) {
  if (start >= g.node_count() || target >= g.node_count()) throw RouteError("route: node id out of range");
  if (start == target) throw RouteError("route: start and target must differ");
}

bool is_excluded(const std::vector<bool>* excluded, EdgeId e) {
  return excluded != nullptr && e < excluded->size() && (*excluded)[e];
}

std::string no_route_message(std::size_t population, std::size_t iterations, double infeasible_fraction) {
  std::ostringstream os;
  os << "no feasible route (population " << population << ", iterations " << iterations << ", infeasible fraction "
     << infeasible_fraction << ")";
  return os.str();
}

}  // namespace

void RouteBudget::validate() const {
  if (!(battery_lifetime > 0.0)) throw RouteError("RouteBudget: battery lifetime must be positive");
  if (!(remaining >= 0.0 && remaining <= battery_lifetime))
    throw RouteError("RouteBudget: remaining time must lie in [0, battery lifetime]");
}

NoFeasibleRoute::NoFeasibleRoute(std::size_t population_, std::size_t iterations_, double infeasible_fraction_)
    : RouteError(no_route_message(population_, iterations_, infeasible_fraction_)),
      population(population_),
      iterations(iterations_),
      infeasible_fraction(infeasible_fraction_) {}

double route_cost(double route_time, double budget, RouteCostVariant variant) {
  if (!(budget > 0.0)) throw RouteError("route_cost: budget must be positive");
  if (!(route_time >= 0.0)) throw RouteError("route_cost: route time must be nonnegative");
  const double deficit = std::abs(route_time - budget);
  switch (variant) {
    case RouteCostVariant::OvertimeOnly:
      return deficit * std::max(0.0, (route_time - budget) / budget);
    case RouteCostVariant::Literal:
    default:
      return deficit * std::max(0.0, route_time / budget);
  }
}

double route_time(const Route& route, std::span<const double> per_edge_times) {
  double total = 0.0;
  for (EdgeId e : route.edges) {
    if (e >= per_edge_times.size() || std::isnan(per_edge_times[e]))
      throw RouteError("route_time: no time for edge " + std::to_string(e));
    total += per_edge_times[e];
  }
  return total;
}

std::optional<Route> decode_route(std::span<const double> keys, const OperationGraph& g, NodeId start,
                                  NodeId target, const std::vector<bool>* excluded) {
  check_endpoints(g, start, target);
  if (keys.size() != g.node_count()) throw RouteError("decode_route: key count must equal node count");

  std::vector<bool> used(g.edge_count(), false);
  for (EdgeId e = 0; e < g.edge_count(); ++e) used[e] = is_excluded(excluded, e);

  Route r;
  r.nodes.push_back(start);
  NodeId at = start;
  // Each step consumes a fresh edge, so the walk length is bounded by |E|.
  while (at != target) {
    std::optional<EdgeId> pick;
    for (EdgeId e : g.incident(at)) {
      if (used[e]) continue;
      if (!pick) {
        pick = e;
        continue;
      }
      const NodeId cand = g.edge(e).other(at);
      const NodeId cur = g.edge(*pick).other(at);
      if (keys[cand] > keys[cur] || (keys[cand] == keys[cur] && cand < cur)) pick = e;
    }
    if (!pick) return std::nullopt;
    used[*pick] = true;
    at = g.edge(*pick).other(at);
    r.edges.push_back(*pick);
    r.nodes.push_back(at);
  }
  return r;
}

std::optional<Route> shortest_time_route(const OperationGraph& g, NodeId start, NodeId target,
                                         std::span<const double> per_edge_times, const std::vector<bool>* excluded) {
  check_endpoints(g, start, target);
  const std::size_t n = g.node_count();
  std::vector<double> dist(n, INFINITY);
  std::vector<std::optional<EdgeId>> via(n);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[start] = 0.0;
  open.push({0.0, start});
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    for (EdgeId e : g.incident(u)) {
      if (is_excluded(excluded, e)) continue;
      if (e >= per_edge_times.size()) throw RouteError("shortest_time_route: no time for edge " + std::to_string(e));
      const NodeId v = g.edge(e).other(u);
      const double nd = d + per_edge_times[e];
      if (nd < dist[v]) {
        dist[v] = nd;
        via[v] = e;
        open.push({nd, v});
      }
    }
  }
  if (!std::isfinite(dist[target])) return std::nullopt;

  Route r;
  for (NodeId at = target; at != start;) {
    const EdgeId e = *via[at];
    r.edges.push_back(e);
    r.nodes.push_back(at);
    at = g.edge(e).other(at);
  }
  r.nodes.push_back(start);
  std::reverse(r.edges.begin(), r.edges.end());
  std::reverse(r.nodes.begin(), r.nodes.end());
  r.total_time = route_time(r, per_edge_times);
  return r;
}

RoutePlan plan_route(const OperationGraph& g, NodeId start, NodeId target, const RouteBudget& budget,
                     std::span<const double> per_edge_times, const foa::FoaParams& params,
                     const RoutePlanOptions& options) {
  check_endpoints(g, start, target);
  params.validate();
  if (!(budget.battery_lifetime > 0.0) || !(budget.remaining > 0.0))
    throw RouteError("plan_route: remaining budget must be positive");
  if (per_edge_times.size() < g.edge_count()) throw RouteError("plan_route: per-edge times do not cover the graph");

  const std::vector<bool>* excluded = options.excluded_edges.empty() ? nullptr : &options.excluded_edges;
  const double target_time = budget.remaining;

  // Infeasible decodes must rank behind every decodable route.
  double all_edges = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!is_excluded(excluded, e)) all_edges += per_edge_times[e];
  }
  const double penalty = std::max(10.0 * budget.battery_lifetime,
                                  route_cost(all_edges, target_time, options.cost_variant) + target_time +
                                      budget.battery_lifetime);

  std::size_t infeasible = 0;
  auto score = [&](const Route& r) {
    const double c = route_cost(r.total_time, target_time, options.cost_variant);
    if (options.strict_budget && r.total_time > target_time) return target_time + c;
    return c;
  };
  auto cost_fn = [&](std::span<const double> keys) {
    auto r = decode_route(keys, g, start, target, excluded);
    if (!r) {
      ++infeasible;
      return penalty;
    }
    r->total_time = route_time(*r, per_edge_times);
    return score(*r);
  };

  Rng init_rng(mix_seed(params.rng_seed, 0x5eed));
  std::vector<std::vector<double>> population(params.population_size, std::vector<double>(g.node_count()));
  for (auto& keys : population) {
    for (auto& k : keys) k = init_rng.uniform();
  }
  foa::SearchBox box{std::vector<double>(g.node_count(), 0.0), std::vector<double>(g.node_count(), 1.0)};

  RoutePlan plan;
  plan.optimization = foa::optimize(cost_fn, std::move(population), params, box);
  plan.infeasible_fraction =
      plan.optimization.evaluations ? static_cast<double>(infeasible) / plan.optimization.evaluations : 0.0;

  auto best = decode_route(plan.optimization.best.position, g, start, target, excluded);
  if (!best) throw NoFeasibleRoute(params.population_size, params.iterations, plan.infeasible_fraction);
  best->total_time = route_time(*best, per_edge_times);
  best->cost = route_cost(best->total_time, target_time, options.cost_variant);
  plan.route = std::move(*best);
  plan.edge_times.reserve(plan.route.edges.size());
  for (EdgeId e : plan.route.edges) plan.edge_times.push_back(per_edge_times[e]);
  return plan;
}

}  // namespace auvplan
