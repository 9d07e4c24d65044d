#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "auvplan/current_field.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/ops_graph.hpp"
#include "auvplan/path_planner.hpp"
#include "auvplan/route_planner.hpp"

namespace auvplan::io {

using nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

json graph_to_json(const OperationGraph& g);
OperationGraph graph_from_json(const json& doc);

/// Header: extent, grid shape, vortex list, seed.
json field_header_to_json(const CurrentField& f);
/// Rows of x_index,y_index,v_cx,v_cy; lines starting with '#' are comments.
std::string field_to_csv(const CurrentField& f);
/// Rebuilds a field from its header and grid CSV; throws IoError when the
/// two disagree.
CurrentField field_from_files(const json& header, std::string_view csv);

json route_to_json(const Route& r, std::span<const double> per_edge_times);

std::string path_to_csv(const LocalPath& p);
json path_summary_to_json(const LocalPath& p);

/// Seed-determined part of a mission log. Anything derived from wall-clock
/// time lives in mission_timing_to_json.
json mission_log_to_json(const MissionLog& log);
json mission_timing_to_json(const MissionLog& log);
std::string mission_edges_to_csv(const MissionLog& log);

std::string convergence_to_csv(std::span<const double> best_cost_history);

/// Prefixes every line of `config` dump with "# " ahead of a CSV body.
std::string with_config_header(const json& config, const std::string& csv_body);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

}  // namespace auvplan::io
