#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "auvplan/config.hpp"
#include "auvplan/current_field.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/ops_graph.hpp"

namespace auvplan {

struct World {
  OperationGraph graph;
  CurrentField field;
};

World build_world(const NetworkParams& graph, const FieldGenerationParams& field);
World build_world(const ExperimentConfig& cfg);

NodeId resolve_start(const ExperimentConfig& cfg, const OperationGraph& g);
NodeId resolve_target(const ExperimentConfig& cfg, const OperationGraph& g);

struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  MissionStatus status = MissionStatus::Completed;
  double route_time = 0.0;
  double remaining_time = 0.0;
  std::size_t replans = 0;
  std::size_t edges = 0;
  double compute_time_total = 0.0;   // measured unless synthetic
  double mission_cost = 0.0;         // includes compute time
  double route_plan_wall = 0.0;      // s, summed over all route plans
  double mean_path_plan_wall = 0.0;  // s per edge
  std::vector<std::pair<double, double>> edge_times;  // (t_ij, T_phi)
};

struct ColumnStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single row
};

ColumnStats column_stats(std::span<const double> values);

struct BatchSummary {
  std::vector<TrialRow> rows;  // ordered by trial id
  /// Seed-determined columns.
  std::map<std::string, ColumnStats> aggregates;
  /// Columns that depend on wall-clock time.
  std::map<std::string, ColumnStats> timing_aggregates;
  double mean_relative_deviation = 0.0;  // mean |T_phi - t_ij| / t_ij over all edges

  bool all_completed() const;
  std::vector<std::size_t> trials_with(MissionStatus status) const;
};

/// Runs cfg.batch.trials missions; trial i uses mission seed
/// mission.seed + i * seed_stride. With fresh_world each trial also gets its
/// own graph and field seeds on the same stride.
BatchSummary run_batch(const ExperimentConfig& cfg);

/// Recomputes aggregates from rows.
void summarize(BatchSummary& summary);

}  // namespace auvplan
