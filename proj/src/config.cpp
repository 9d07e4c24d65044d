#include "auvplan/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

extern char** environ;

namespace auvplan {

using nlohmann::json;

namespace {

const std::set<std::string>& section_keys(const std::string& section) {
  static const std::vector<std::pair<std::string, std::set<std::string>>> table = {
      {"graph", {"nodes", "neighbors", "bounds", "seed", "start", "target"}},
      {"field", {"vortices", "grid", "strength_range", "core_range", "seed"}},
      {"mission",
       {"battery_lifetime", "cruise_speed", "seed", "compute_time", "synthetic_compute", "compute_drains_battery",
        "strict_budget", "cost_variant", "replan_tolerance"}},
      {"limits",
       {"surge_max", "sway_min", "sway_max", "pitch_max_deg", "yaw_min_deg", "yaw_max_deg", "eps_surge", "eps_sway",
        "eps_pitch", "eps_yaw", "angle_mode"}},
      {"route", {"population", "iterations", "beta0", "gamma", "alpha0", "damping"}},
      {"path",
       {"population", "iterations", "beta0", "gamma", "alpha0", "damping", "interior_points", "samples",
        "window_margin", "min_window_margin", "vertical_margin", "init_spread"}},
      {"batch", {"trials", "seed_stride", "fresh_world", "workers"}},
      {"output", {"dir", "format"}},
  };
  for (const auto& [name, keys] : table) {
    if (name == section) return keys;
  }
  throw ConfigError("unknown config section '" + section + "'");
}

template <typename T>
void read(const json& sec, const char* key, T& out) {
  if (!sec.contains(key) || sec.at(key).is_null()) return;
  try {
    out = sec.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void read_speed(const json& sec, const char* key, double& out) {
  if (sec.contains(key) && !sec.at(key).is_null()) out = parse_speed(sec.at(key));
}

void read_deg(const json& sec, const char* key, double& out_rad) {
  if (!sec.contains(key)) return;
  double deg = 0.0;
  read(sec, key, deg);
  out_rad = deg_to_rad(deg);
}

void read_foa(const json& sec, foa::FoaParams& p) {
  read(sec, "population", p.population_size);
  read(sec, "iterations", p.iterations);
  read(sec, "beta0", p.attraction_base);
  read(sec, "gamma", p.light_absorption);
  read(sec, "alpha0", p.randomness_init);
  read(sec, "damping", p.damping);
}

json foa_json(const foa::FoaParams& p) {
  return {{"population", p.population_size}, {"iterations", p.iterations}, {"beta0", p.attraction_base},
          {"gamma", p.light_absorption},     {"alpha0", p.randomness_init}, {"damping", p.damping}};
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (batch.trials < 1) throw ConfigError("batch.trials must be at least 1");
  if (batch.workers < 1) throw ConfigError("batch.workers must be at least 1");
  if (output.format != "csv" && output.format != "json") throw ConfigError("output.format must be csv or json");
  if (graph.node_count < 2) throw ConfigError("graph.nodes must be at least 2");
  if (graph.neighbors_per_node < 1 || graph.neighbors_per_node >= graph.node_count)
    throw ConfigError("graph.neighbors must lie in [1, nodes)");
  if (start && *start >= graph.node_count) throw ConfigError("graph.start out of range");
  if (target && *target >= graph.node_count) throw ConfigError("graph.target out of range");
  try {
    mission.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

double parse_speed(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ConfigError("speed must be a number (m/s) or a string like \"5.5kt\"");
  std::string s = value.get<std::string>();
  bool knots = false;
  if (s.size() > 2 && lower(s.substr(s.size() - 2)) == "kt") {
    knots = true;
    s.resize(s.size() - 2);
  }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("malformed speed '" + value.get<std::string>() + "'");
  return knots ? knots_to_mps(v) : v;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [section, body] : doc.items()) {
    const auto& keys = section_keys(section);
    if (!body.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    for (const auto& [key, _] : body.items()) {
      if (!keys.count(key)) throw ConfigError("unknown config key '" + section + "." + key + "'");
    }
  }
  const json empty = json::object();
  auto sec = [&](const char* name) -> const json& { return doc.contains(name) ? doc.at(name) : empty; };

  ExperimentConfig c;
  {
    const json& g = sec("graph");
    read(g, "nodes", c.graph.node_count);
    read(g, "neighbors", c.graph.neighbors_per_node);
    if (g.contains("bounds")) {
      std::vector<double> b;
      read(g, "bounds", b);
      if (b.size() != 3) throw ConfigError("graph.bounds must have three entries");
      c.graph.bounds = {b[0], b[1], b[2]};
    }
    read(g, "seed", c.graph.seed);
    if (g.contains("start") && !g.at("start").is_null()) {
      NodeId id = 0;
      read(g, "start", id);
      c.start = id;
    }
    if (g.contains("target") && !g.at("target").is_null()) {
      NodeId id = 0;
      read(g, "target", id);
      c.target = id;
    }
  }
  {
    const json& f = sec("field");
    read(f, "vortices", c.field.n_vortices);
    if (f.contains("grid")) {
      std::vector<std::size_t> g;
      read(f, "grid", g);
      if (g.size() != 2) throw ConfigError("field.grid must have two entries");
      c.field.nx = g[0];
      c.field.ny = g[1];
    }
    read(f, "strength_range", c.field.strength_range);
    read(f, "core_range", c.field.core_range);
    read(f, "seed", c.field.seed);
  }
  {
    const json& m = sec("mission");
    read(m, "battery_lifetime", c.mission.battery_lifetime);
    read_speed(m, "cruise_speed", c.mission.cruise_speed);
    read(m, "seed", c.mission.rng_seed);
    std::string mode = "measured";
    read(m, "compute_time", mode);
    if (mode == "measured") {
      c.mission.compute_time_mode = ComputeTimeMode::Measured;
    } else if (mode == "synthetic") {
      c.mission.compute_time_mode = ComputeTimeMode::Synthetic;
    } else {
      throw ConfigError("mission.compute_time must be measured or synthetic");
    }
    read(m, "synthetic_compute", c.mission.synthetic_compute_time);
    read(m, "compute_drains_battery", c.mission.compute_drains_battery);
    read(m, "strict_budget", c.mission.strict_budget);
    std::string variant = "literal";
    read(m, "cost_variant", variant);
    if (variant == "literal") {
      c.mission.cost_variant = RouteCostVariant::Literal;
    } else if (variant == "overtime_only") {
      c.mission.cost_variant = RouteCostVariant::OvertimeOnly;
    } else {
      throw ConfigError("mission.cost_variant must be literal or overtime_only");
    }
    read(m, "replan_tolerance", c.mission.replan_tolerance);
  }
  {
    const json& l = sec("limits");
    KinematicLimits& k = c.mission.limits;
    read_speed(l, "surge_max", k.surge_max);
    read_speed(l, "sway_min", k.sway_min);
    read_speed(l, "sway_max", k.sway_max);
    read_deg(l, "pitch_max_deg", k.pitch_max);
    read_deg(l, "yaw_min_deg", k.yaw_min);
    read_deg(l, "yaw_max_deg", k.yaw_max);
    read(l, "eps_surge", k.eps_surge);
    read(l, "eps_sway", k.eps_sway);
    read(l, "eps_pitch", k.eps_pitch);
    read(l, "eps_yaw", k.eps_yaw);
    std::string mode = "rates";
    read(l, "angle_mode", mode);
    if (mode == "rates") {
      k.angle_mode = AngleConstraint::Rates;
    } else if (mode == "angles") {
      k.angle_mode = AngleConstraint::Angles;
    } else {
      throw ConfigError("limits.angle_mode must be rates or angles");
    }
  }
  read_foa(sec("route"), c.mission.route_params);
  {
    const json& p = sec("path");
    read_foa(p, c.mission.path_params);
    PathPlannerConfig& pc = c.mission.path_config;
    read(p, "interior_points", pc.interior_points);
    read(p, "samples", pc.samples);
    read(p, "window_margin", pc.window_margin);
    read(p, "min_window_margin", pc.min_window_margin);
    read(p, "vertical_margin", pc.vertical_margin);
    read(p, "init_spread", pc.init_spread);
  }
  {
    const json& b = sec("batch");
    read(b, "trials", c.batch.trials);
    read(b, "seed_stride", c.batch.seed_stride);
    read(b, "fresh_world", c.batch.fresh_world);
    read(b, "workers", c.batch.workers);
  }
  {
    const json& o = sec("output");
    read(o, "dir", c.output.dir);
    read(o, "format", c.output.format);
  }
  c.graph.cruise_speed = c.mission.cruise_speed;
  c.field.extent_x = c.graph.bounds.x;
  c.field.extent_y = c.graph.bounds.y;
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  const KinematicLimits& k = c.mission.limits;
  const PathPlannerConfig& pc = c.mission.path_config;
  json path = foa_json(c.mission.path_params);
  path["interior_points"] = pc.interior_points;
  path["samples"] = pc.samples;
  path["window_margin"] = pc.window_margin;
  path["min_window_margin"] = pc.min_window_margin;
  path["vertical_margin"] = pc.vertical_margin;
  path["init_spread"] = pc.init_spread;
  return {
      {"graph",
       {{"nodes", c.graph.node_count},
        {"neighbors", c.graph.neighbors_per_node},
        {"bounds", {c.graph.bounds.x, c.graph.bounds.y, c.graph.bounds.z}},
        {"seed", c.graph.seed},
        {"start", c.start ? json(*c.start) : json(nullptr)},
        {"target", c.target ? json(*c.target) : json(nullptr)}}},
      {"field",
       {{"vortices", c.field.n_vortices},
        {"grid", {c.field.nx, c.field.ny}},
        {"strength_range", {c.field.strength_range.first, c.field.strength_range.second}},
        {"core_range", {c.field.core_range.first, c.field.core_range.second}},
        {"seed", c.field.seed}}},
      {"mission",
       {{"battery_lifetime", c.mission.battery_lifetime},
        {"cruise_speed", c.mission.cruise_speed},
        {"seed", c.mission.rng_seed},
        {"compute_time", c.mission.compute_time_mode == ComputeTimeMode::Synthetic ? "synthetic" : "measured"},
        {"synthetic_compute", c.mission.synthetic_compute_time},
        {"compute_drains_battery", c.mission.compute_drains_battery},
        {"strict_budget", c.mission.strict_budget},
        {"cost_variant", c.mission.cost_variant == RouteCostVariant::Literal ? "literal" : "overtime_only"},
        {"replan_tolerance", c.mission.replan_tolerance}}},
      {"limits",
       {{"surge_max", k.surge_max},
        {"sway_min", k.sway_min},
        {"sway_max", k.sway_max},
        {"pitch_max_deg", rad_to_deg(k.pitch_max)},
        {"yaw_min_deg", rad_to_deg(k.yaw_min)},
        {"yaw_max_deg", rad_to_deg(k.yaw_max)},
        {"eps_surge", k.eps_surge},
        {"eps_sway", k.eps_sway},
        {"eps_pitch", k.eps_pitch},
        {"eps_yaw", k.eps_yaw},
        {"angle_mode", k.angle_mode == AngleConstraint::Rates ? "rates" : "angles"}}},
      {"route", foa_json(c.mission.route_params)},
      {"path", path},
      {"batch",
       {{"trials", c.batch.trials},
        {"seed_stride", c.batch.seed_stride},
        {"fresh_world", c.batch.fresh_world},
        {"workers", c.batch.workers}}},
      {"output", {{"dir", c.output.dir}, {"format", c.output.format}}},
  };
}

void apply_env_overrides(json& doc, const std::vector<std::pair<std::string, std::string>>& env) {
  static const std::string prefix = "PLANNER_";
  for (const auto& [name, value] : env) {
    if (name.rfind(prefix, 0) != 0) continue;
    const std::string rest = name.substr(prefix.size());
    const auto split = rest.find('_');
    if (split == std::string::npos || split == 0 || split + 1 >= rest.size())
      throw ConfigError("malformed override " + name + " (expected PLANNER_<SECTION>_<KEY>)");
    const std::string section = lower(rest.substr(0, split));
    const std::string key = lower(rest.substr(split + 1));
    if (!section_keys(section).count(key)) throw ConfigError("override " + name + " names an unknown config key");
    json parsed = json::parse(value, nullptr, false);
    doc[section][key] = parsed.is_discarded() ? json(value) : parsed;
  }
}

std::vector<std::pair<std::string, std::string>> planner_environment() {
  std::vector<std::pair<std::string, std::string>> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    if (entry.rfind("PLANNER_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    out.emplace_back(entry.substr(0, eq), entry.substr(eq + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace auvplan
