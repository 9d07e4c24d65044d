#include "auvplan/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace auvplan::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

json vec3_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw IoError("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("malformed number '" + std::string(s) + "'");
  return v;
}

json violations_json(const Violations& v) {
  return {{"surge", v.surge}, {"sway", v.sway}, {"pitch", v.pitch}, {"yaw", v.yaw}};
}

}  // namespace

json graph_to_json(const OperationGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes()) nodes.push_back({{"id", n.id}, {"position", vec3_json(n.position)}});
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"a", e.a}, {"b", e.b}, {"length", e.length}, {"expected_time", e.expected_time}});
  }
  return {{"kind", "operation_graph"},
          {"seed", g.seed()},
          {"bounds", vec3_json(g.bounds())},
          {"cruise_speed", g.cruise_speed()},
          {"neighbors_per_node", g.neighbors_per_node()},
          {"nodes", nodes},
          {"edges", edges}};
}

OperationGraph graph_from_json(const json& doc) {
  try {
    std::vector<Vec3> positions;
    for (const auto& n : doc.at("nodes")) {
      if (n.at("id").get<std::size_t>() != positions.size()) throw IoError("graph: node ids must be contiguous");
      positions.push_back(vec3_from(n.at("position")));
    }
    std::vector<std::pair<NodeId, NodeId>> links;
    for (const auto& e : doc.at("edges")) links.emplace_back(e.at("a").get<NodeId>(), e.at("b").get<NodeId>());
    OperationGraph g(std::move(positions), links, vec3_from(doc.at("bounds")), doc.at("cruise_speed").get<double>(),
                     doc.at("seed").get<std::uint64_t>(), doc.value("neighbors_per_node", std::size_t{0}));
    // Stored lengths must agree with the positions.
    const auto& stored = doc.at("edges");
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      if (!stored[i].contains("length")) continue;
      const double l = stored[i]["length"].get<double>();
      if (std::abs(l - g.edge(i).length) > 1e-9 * std::max(1.0, g.edge(i).length))
        throw IoError("graph: stored length of edge " + std::to_string(i) + " disagrees with node positions");
    }
    return g;
  } catch (const json::exception& e) {
    throw IoError(std::string("graph: malformed document: ") + e.what());
  } catch (const GraphError& e) {
    throw IoError(std::string("graph: ") + e.what());
  }
}

json field_header_to_json(const CurrentField& f) {
  json vortices = json::array();
  for (const auto& v : f.vortices()) {
    vortices.push_back({{"x0", v.x0}, {"y0", v.y0}, {"circulation", v.circulation}, {"core_radius", v.core_radius}});
  }
  return {{"kind", "current_field"},
          {"seed", f.seed()},
          {"extent", {f.extent_x(), f.extent_y()}},
          {"grid", {f.nx(), f.ny()}},
          {"vortices", vortices}};
}

std::string field_to_csv(const CurrentField& f) {
  std::string out = "x_index,y_index,v_cx,v_cy\n";
  out.reserve(out.size() + f.nx() * f.ny() * 48);
  for (std::size_t iy = 0; iy < f.ny(); ++iy) {
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
      const Velocity2& v = f.at(ix, iy);
      out += std::to_string(ix);
      out += ',';
      out += std::to_string(iy);
      out += ',';
      out += format_double(v.vx);
      out += ',';
      out += format_double(v.vy);
      out += '\n';
    }
  }
  return out;
}

CurrentField field_from_files(const json& header, std::string_view csv) {
  std::size_t nx = 0, ny = 0;
  double ex = 0.0, ey = 0.0;
  std::vector<Vortex> vortices;
  std::uint64_t seed = 0;
  try {
    nx = header.at("grid").at(0).get<std::size_t>();
    ny = header.at("grid").at(1).get<std::size_t>();
    ex = header.at("extent").at(0).get<double>();
    ey = header.at("extent").at(1).get<double>();
    seed = header.at("seed").get<std::uint64_t>();
    for (const auto& v : header.at("vortices")) {
      vortices.push_back({v.at("x0").get<double>(), v.at("y0").get<double>(), v.at("circulation").get<double>(),
                          v.at("core_radius").get<double>()});
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("field: malformed header: ") + e.what());
  }
  if (nx < 2 || ny < 2) throw IoError("field: grid must be at least 2x2");

  std::vector<Velocity2> grid(nx * ny);
  std::vector<bool> filled(nx * ny, false);
  std::size_t rows = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line != "x_index,y_index,v_cx,v_cy") throw IoError("field: unexpected CSV header");
      continue;
    }
    std::string_view cols[4];
    std::size_t start = 0;
    for (int c = 0; c < 4; ++c) {
      const std::size_t comma = c < 3 ? line.find(',', start) : line.size();
      if (comma == std::string_view::npos) throw IoError("field: short CSV row");
      cols[c] = line.substr(start, comma - start);
      start = comma + 1;
    }
    const auto ix = static_cast<std::size_t>(parse_number(cols[0]));
    const auto iy = static_cast<std::size_t>(parse_number(cols[1]));
    if (ix >= nx || iy >= ny) throw IoError("field: CSV index outside the header grid shape");
    const std::size_t idx = iy * nx + ix;
    if (filled[idx]) throw IoError("field: duplicate CSV cell");
    filled[idx] = true;
    grid[idx] = {parse_number(cols[2]), parse_number(cols[3])};
    ++rows;
  }
  if (rows != nx * ny) {
    throw IoError("field: CSV has " + std::to_string(rows) + " cells but the header declares " +
                  std::to_string(nx * ny));
  }
  try {
    return CurrentField(nx, ny, ex, ey, std::move(vortices), seed, std::move(grid));
  } catch (const FieldError& e) {
    throw IoError(std::string("field: ") + e.what());
  }
}

json route_to_json(const Route& r, std::span<const double> per_edge_times) {
  json times = json::array();
  for (EdgeId e : r.edges) times.push_back(per_edge_times[e]);
  return {{"nodes", r.nodes}, {"edges", r.edges}, {"edge_times", times}, {"total_time", r.total_time},
          {"cost", r.cost}};
}

std::string path_to_csv(const LocalPath& p) {
  std::string out = "index,x,y,z,yaw,pitch,vx,vy,vz\n";
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const PathState& s = p.samples[i];
    out += std::to_string(i);
    for (double v : {s.x, s.y, s.z, s.yaw, s.pitch, s.vx, s.vy, s.vz}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

json path_summary_to_json(const LocalPath& p) {
  return {{"path_time", p.path_time},
          {"cost", p.cost},
          {"violations", violations_json(p.violations)},
          {"samples", p.samples.size()}};
}

json mission_log_to_json(const MissionLog& log) {
  json edges = json::array();
  for (const auto& e : log.edges) {
    edges.push_back({{"edge", e.edge},
                     {"from", e.from},
                     {"to", e.to},
                     {"expected_time", e.expected_time},
                     {"path_time", e.path_time},
                     {"path_cost", e.path_cost},
                     {"delay", e.delay},
                     {"violations", violations_json(e.violations)},
                     {"replan_triggered", e.replan_triggered},
                     {"remaining_after", e.remaining_after}});
  }
  json routes = json::array();
  for (const auto& r : log.routes) {
    routes.push_back({{"nodes", r.route.nodes},
                      {"edges", r.route.edges},
                      {"total_time", r.route.total_time},
                      {"cost", r.route.cost},
                      {"budget", r.budget},
                      {"planned_after_edges", r.planned_after_edges},
                      {"abandoned_after_edges",
                       r.abandoned_after_edges ? json(*r.abandoned_after_edges) : json(nullptr)},
                      {"shortest_time_fallback", r.shortest_time_fallback},
                      {"infeasible_fraction", r.infeasible_fraction}});
  }
  return {{"status", to_string(log.status)},
          {"start", log.start},
          {"target", log.target},
          {"battery_lifetime", log.battery_lifetime},
          {"totals",
           {{"route_time", log.route_time},
            {"remaining_time", log.remaining_time},
            {"replans", log.replans},
            {"edges", log.edges.size()}}},
          {"diagnostics", log.diagnostics},
          {"edges", edges},
          {"routes", routes}};
}

json mission_timing_to_json(const MissionLog& log) {
  json route_walls = json::array();
  for (const auto& r : log.routes) route_walls.push_back(r.wall_seconds);
  json path_walls = json::array();
  for (const auto& e : log.edges) path_walls.push_back(e.plan_wall_seconds);
  return {{"compute_time_total", log.compute_time_total},
          {"mission_cost", log.mission_cost},
          {"route_plan_wall_seconds", route_walls},
          {"path_plan_wall_seconds", path_walls}};
}

std::string mission_edges_to_csv(const MissionLog& log) {
  std::string out =
      "index,edge,from,to,expected_time,path_time,path_cost,delay,surge_violation,sway_violation,pitch_violation,"
      "yaw_violation,replan_triggered,remaining_after\n";
  for (std::size_t i = 0; i < log.edges.size(); ++i) {
    const EdgeRecord& e = log.edges[i];
    out += std::to_string(i) + ',' + std::to_string(e.edge) + ',' + std::to_string(e.from) + ',' +
           std::to_string(e.to);
    for (double v : {e.expected_time, e.path_time, e.path_cost, e.delay, e.violations.surge, e.violations.sway,
                     e.violations.pitch, e.violations.yaw}) {
      out += ',';
      out += format_double(v);
    }
    out += e.replan_triggered ? ",1," : ",0,";
    out += format_double(e.remaining_after);
    out += '\n';
  }
  return out;
}

std::string convergence_to_csv(std::span<const double> history) {
  std::string out = "iteration,best_cost\n";
  for (std::size_t t = 0; t < history.size(); ++t) {
    out += std::to_string(t) + ',' + format_double(history[t]) + '\n';
  }
  return out;
}

std::string with_config_header(const json& config, const std::string& csv_body) {
  return "# config: " + config.dump() + "\n" + csv_body;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

}  // namespace auvplan::io
