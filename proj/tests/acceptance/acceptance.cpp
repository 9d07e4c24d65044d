// Acceptance checks. Each criterion prints one PASS/FAIL line followed by the
// measured values; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "auvplan/batch.hpp"
#include "auvplan/cli.hpp"
#include "auvplan/config.hpp"
#include "auvplan/io.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/path_planner.hpp"
#include "auvplan/rng.hpp"
#include "auvplan/route_planner.hpp"
#include "support/oracles.hpp"
#include "support/worlds.hpp"

using namespace auvplan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Pinned tolerances and thresholds.
constexpr double kBudget = 7200.0;
constexpr double kRemainingFraction = 0.15;
constexpr double kViolationFreeShare = 0.90;
constexpr double kRouteNearShare = 0.80;
constexpr double kRouteExactShare = 0.50;
constexpr double kRouteNearFactor = 1.05;
constexpr double kRouteExactRel = 1e-9;
constexpr double kSpeedIdentityRel = 1e-9;
constexpr double kDivergenceMax = 1e-3;
constexpr double kEndpointTol = 1e-9;
constexpr double kHullTol = 1e-9;
constexpr double kPlanSecondsMax = 10.0;

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool non_increasing(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1]) return false;
  return true;
}

Outcome budget_satisfaction() {
  ExperimentConfig cfg = config_from_json(nlohmann::json::object());
  cfg.batch.trials = 25;
  const BatchSummary s = run_batch(cfg);
  std::size_t ok = 0;
  double worst_route = 0.0;
  for (const auto& r : s.rows) {
    if (r.status == MissionStatus::Completed && r.remaining_time >= 0.0 && r.route_time <= kBudget) ++ok;
    worst_route = std::max(worst_route, r.route_time);
  }
  const double mean_frac = s.aggregates.at("remaining_time").mean / kBudget;
  return {ok == 25 && mean_frac < kRemainingFraction,
          fmt("%zu/25 within budget, max T_Route %.1f s, mean T_remained/T_tau %.4f (< %.2f), replans mean %.2f",
              ok, worst_route, mean_frac, kRemainingFraction, s.aggregates.at("replans").mean)};
}

Outcome violation_decay() {
  const MissionConfig defaults;
  const Vec3 a{2000.0, 2000.0, 20.0};
  const Vec3 b{8000.0, 8000.0, 80.0};
  std::size_t clean = 0;
  std::size_t monotone = 0;
  std::size_t chord_violations = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    FieldGenerationParams fp;
    fp.seed = seed;
    const CurrentField field = generate_field(fp);
    foa::FoaParams params = defaults.path_params;
    params.iterations = 100;
    params.rng_seed = seed;
    const PathPlan plan = plan_path(a, b, field, defaults.limits, defaults.cruise_speed, params, defaults.path_config);
    if (!plan.path.violations.any()) ++clean;
    if (non_increasing(plan.optimization.best_cost_history)) ++monotone;
    const ControlPolygon chord{{a, lerp(a, b, 0.25), lerp(a, b, 0.5), lerp(a, b, 0.75), b}};
    if (evaluate_polygon(chord, field, defaults.limits, defaults.cruise_speed, defaults.path_config.samples)
            .violations.any())
      ++chord_violations;
  }
  const double share = static_cast<double>(clean) / 25.0;
  return {share >= kViolationFreeShare && monotone == 25,
          fmt("%zu/25 violation-free (>= %.0f%%), %zu/25 monotone histories, %zu/25 straight chords had violations",
              clean, 100.0 * kViolationFreeShare, monotone, chord_violations)};
}

Outcome route_oracle() {
  const MissionConfig defaults;
  std::size_t near = 0;
  std::size_t exact = 0;
  std::size_t graphs = 0;
  Rng pick(2024);
  for (std::uint64_t seed = 1; graphs < 20; ++seed) {
    NetworkParams np;
    np.node_count = 5 + seed % 3;
    np.neighbors_per_node = 2;
    np.seed = seed;
    const OperationGraph g = generate_network(np);
    if (g.edge_count() > 12) continue;
    oracle::SmallGraph sg;
    sg.n = g.node_count();
    for (const Edge& e : g.edges()) sg.edges.push_back({e.a, e.b});
    sg.times = g.expected_times();
    const NodeId s = 0;
    const NodeId t = g.node_count() - 1;
    const auto [lo, hi] = oracle::walk_time_range(sg, s, t);
    const double budget = lo + pick.uniform(0.2, 0.9) * (hi - lo);
    const double best = *oracle::best_route_cost(sg, s, t, budget);

    foa::FoaParams params = defaults.route_params;
    params.rng_seed = seed;
    const RoutePlan plan = plan_route(g, s, t, {budget, budget}, sg.times, params);
    const double got = plan.route.cost;
    if (got <= kRouteNearFactor * best + 1e-9) ++near;
    if (std::abs(got - best) <= kRouteExactRel * std::max(1.0, best)) ++exact;
    ++graphs;
  }
  return {near >= kRouteNearShare * 20 && exact >= kRouteExactShare * 20,
          fmt("%zu/20 within %.2fx optimum (>= %.0f%%), %zu/20 exactly optimal (>= %.0f%%)", near, kRouteNearFactor,
              100.0 * kRouteNearShare, exact, 100.0 * kRouteExactShare)};
}

Outcome kinematic_identity() {
  const CurrentField still = CurrentField::zero(100, 100, 10000.0, 10000.0);
  Rng rng(4);
  double worst = 0.0;
  std::size_t samples = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec3> ctrl(7);
    for (auto& p : ctrl) p = {rng.uniform(0.0, 10000.0), rng.uniform(0.0, 10000.0), rng.uniform(0.0, 100.0)};
    const double v = rng.uniform(0.5, 3.0);
    for (const auto& s : kinematic_states(evaluate_spline(ctrl, 50), v, still)) {
      worst = std::max(worst, std::abs(s.vx * s.vx + s.vy * s.vy + s.vz * s.vz - v * v) / (v * v));
      ++samples;
    }
  }
  return {worst <= kSpeedIdentityRel, fmt("%zu states, worst relative |v|^2 error %.3g (<= %.0e)", samples, worst,
                                          kSpeedIdentityRel)};
}

Outcome field_physics() {
  double worst_div = 0.0;
  bool linear = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    FieldGenerationParams fp;
    fp.seed = seed;
    const CurrentField f = generate_field(fp);
    for (std::size_t iy = 1; iy + 1 < f.ny(); ++iy)
      for (std::size_t ix = 1; ix + 1 < f.nx(); ++ix)
        worst_div = std::max(worst_div, std::abs(discrete_divergence(f, ix, iy)));

    std::vector<Velocity2> sum(f.grid().size());
    for (const Vortex& v : f.vortices()) {
      const CurrentField single(f.nx(), f.ny(), f.extent_x(), f.extent_y(), {v}, 0);
      for (std::size_t k = 0; k < sum.size(); ++k) {
        sum[k].vx += single.grid()[k].vx;
        sum[k].vy += single.grid()[k].vy;
      }
    }
    linear = linear && sum == f.grid();
  }
  return {worst_div < kDivergenceMax && linear,
          fmt("10 fields of 11 vortices: max |div| %.3g 1/s (< %.0e), superposition exact: %s", worst_div,
              kDivergenceMax, linear ? "yes" : "no")};
}

Outcome spline_contracts() {
  Rng rng(6);
  double worst_end = 0.0;
  double worst_weight_gap = 0.0;
  std::size_t outside = 0;
  std::vector<Vec3> dirs;
  for (int k = 0; k < 64; ++k) {
    const Vec3 d{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
    dirs.push_back((1.0 / norm(d)) * d);
  }
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 e{0, 0, 0};
    (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-1.0 * e);
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(rng.uniform() * 6.0);
    std::vector<Vec3> ctrl(n);
    for (auto& p : ctrl) p = {rng.uniform(-1000.0, 1000.0), rng.uniform(-1000.0, 1000.0), rng.uniform(0.0, 100.0)};
    const auto s = evaluate_spline(ctrl, 50);
    worst_end = std::max({worst_end, distance(s.front(), ctrl.front()), distance(s.back(), ctrl.back())});
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double u = static_cast<double>(k) / 49.0;
      const auto w = oracle::clamped_cubic_weights(n, u);
      Vec3 combo{0, 0, 0};
      for (std::size_t i = 0; i < n; ++i) combo = combo + w[i] * ctrl[i];
      const bool convex = oracle::weights_are_convex(w, 1e-12);
      worst_weight_gap = std::max(worst_weight_gap, distance(combo, s[k]));
      if (!convex || !oracle::within_support(s[k], ctrl, dirs, kHullTol)) ++outside;
    }
  }
  return {worst_end < kEndpointTol && outside == 0 && worst_weight_gap < 1e-6,
          fmt("max endpoint error %.3g m (< %.0e), %zu samples outside hull over 1000 polygons, basis agreement %.3g m",
              worst_end, kEndpointTol, outside, worst_weight_gap)};
}

Outcome equation_checks() {
  foa::FoaParams p;
  p.randomness_init = 1.0;
  p.damping = 0.5;
  const double a = route_cost(7200, 7200);
  const double b = route_cost(9000, 7200);
  const double c = route_cost(3600, 7200);
  const double d = foa::anneal_alpha(p, 3);
  return {a == 0.0 && b == 2250.0 && c == 1800.0 && d == 0.125,
          fmt("C(7200,7200)=%g C(9000,7200)=%g C(3600,7200)=%g alpha_3=%g", a, b, c, d)};
}

Outcome real_time() {
  const MissionConfig defaults;
  const OperationGraph g = generate_network({});
  const CurrentField f = generate_field({});
  const auto times = g.expected_times();
  double worst_route = 0.0;
  double worst_path = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    foa::FoaParams rp = defaults.route_params;
    rp.rng_seed = seed;
    RoutePlan plan;
    worst_route = std::max(worst_route, seconds([&] {
      plan = plan_route(g, g.default_start(), g.default_target(), {kBudget, kBudget}, times, rp,
                        RoutePlanOptions{RouteCostVariant::Literal, true, {}});
    }));
    foa::FoaParams pp = defaults.path_params;
    pp.rng_seed = seed;
    for (std::size_t i = 0; i + 1 < plan.route.nodes.size() && i < 4; ++i) {
      worst_path = std::max(worst_path, seconds([&] {
        plan_path(g.node(plan.route.nodes[i]).position, g.node(plan.route.nodes[i + 1]).position, f, defaults.limits,
                  defaults.cruise_speed, pp, defaults.path_config);
      }));
    }
  }
  return {worst_route < kPlanSecondsMax && worst_path < kPlanSecondsMax,
          fmt("slowest plan_route %.3f s, slowest plan_path %.3f s (< %.0f s; i_max %zu/%zu, t_max %zu, %zu samples)",
              worst_route, worst_path, kPlanSecondsMax, defaults.route_params.population_size,
              defaults.path_params.population_size, defaults.route_params.iterations, defaults.path_config.samples)};
}

Outcome replan_correctness() {
  MissionConfig cfg;
  const auto w = worlds::forced_delay(cfg.cruise_speed);
  cfg.battery_lifetime = w.budget;
  cfg.compute_time_mode = ComputeTimeMode::Synthetic;
  cfg.synthetic_compute_time = 1.0;
  const MissionLog log = run_mission(w.graph, w.field, w.start, w.target, cfg);

  std::set<EdgeId> visited;
  bool excluded = true;
  std::size_t flagged = 0;
  std::size_t route_idx = 0;
  for (std::size_t i = 0; i < log.edges.size(); ++i) {
    visited.insert(log.edges[i].edge);
    if (!log.edges[i].replan_triggered) continue;
    ++flagged;
    // The route planned after this edge must avoid everything visited so far.
    while (route_idx < log.routes.size() && log.routes[route_idx].planned_after_edges <= i) ++route_idx;
    if (route_idx >= log.routes.size()) {
      excluded = false;
      break;
    }
    const auto& r = log.routes[route_idx].route;
    excluded = excluded && r.nodes.front() == log.edges[i].to;
    for (EdgeId e : r.edges) excluded = excluded && visited.count(e) == 0;
  }
  const bool initial_ok = !log.routes.empty() && log.routes[0].route.edges.size() == 3;
  const bool at_second = log.edges.size() >= 2 && log.edges[1].replan_triggered;
  return {log.replans == 1 && flagged == 1 && excluded && initial_ok && at_second,
          fmt("status %s, replans %zu, flagged edges %zu, triggered on edge 2: %s, post-replan route avoids visited "
              "edges: %s",
              to_string(log.status), log.replans, flagged, at_second ? "yes" : "no", excluded ? "yes" : "no")};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "auvplan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  static const std::set<std::string> timing{"timing.json", "timing.csv", "timing_summary.json"};
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || timing.count(e.path().filename().string())) continue;
    files[fs::relative(e.path(), dir).string()] = io::read_text_file(e.path());
  }
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "auvplan_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string out = (root / "out").string();
  const std::string world = (root / "world").string();
  io::write_json_file(root / "config.json", {{"batch", {{"trials", 3}}}});
  const std::string cfg = (root / "config.json").string();

  const std::vector<std::vector<std::string>> commands = {
      {"gen-world", "--config", cfg, "--out", world},
      {"run-mission", "--config", cfg, "--world", world, "--out", out + "/mission"},
      {"run-mission", "--config", cfg, "--seed", "7", "--format", "json", "--out", out + "/mission_json"},
      {"run-batch", "--config", cfg, "--out", out + "/batch"},
      {"plan-route", "--config", cfg, "--world", world, "--out", out + "/route"},
      {"plan-path", "--config", cfg, "--world", world, "--from", "0", "--to", "3", "--out", out + "/path"},
  };
  std::map<std::string, std::string> first;
  std::size_t files = 0;
  std::size_t differing = 0;
  bool exit_ok = true;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& c : commands) exit_ok = exit_ok && run_cli(c) == cli::kSuccess;
    auto snap = snapshot(root);
    if (pass == 0) {
      first = std::move(snap);
      fs::remove_all(root / "out");
      fs::remove_all(world);
      continue;
    }
    files = snap.size();
    for (const auto& [name, body] : first) {
      const auto it = snap.find(name);
      if (it == snap.end() || it->second != body) ++differing;
    }
    if (snap.size() != first.size()) ++differing;
  }
  return {exit_ok && differing == 0 && files > 0,
          fmt("%zu data files across 6 commands, %zu differ between reruns, all commands exited 0: %s", files,
              differing, exit_ok ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {1, "budget satisfaction over 25 missions", budget_satisfaction},
      {2, "constraint-violation decay in the local planner", violation_decay},
      {3, "route planner against exhaustive enumeration", route_oracle},
      {4, "kinematic speed identity in still water", kinematic_identity},
      {5, "current field divergence and superposition", field_physics},
      {6, "spline endpoint and convex-hull contracts", spline_contracts},
      {7, "closed-form cost and annealing values", equation_checks},
      {8, "planner invocations finish within seconds", real_time},
      {9, "forced delay triggers one correct re-plan", replan_correctness},
      {10, "byte-identical reruns", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    double t = 0.0;
    try {
      t = seconds([&] { o = c.check(); });
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), t);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
