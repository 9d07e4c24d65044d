#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "auvplan/current_field.hpp"
#include "auvplan/foa.hpp"
#include "auvplan/geometry.hpp"

namespace auvplan {

enum class AngleConstraint {
  Rates,   // pitch and yaw limits bound the angular rates (rad/s)
  Angles,  // pitch and yaw limits bound the angles themselves (rad)
};

/// Vehicle limits in SI units. Angular limits are rad/s (or rad, see mode).
struct KinematicLimits {
  double surge_max = knots_to_mps(5.25);
  double sway_min = -knots_to_mps(0.97);
  double sway_max = knots_to_mps(0.97);
  double pitch_max = deg_to_rad(20.0);
  double yaw_min = deg_to_rad(-17.0);
  double yaw_max = deg_to_rad(17.0);
  double eps_surge = 100.0;
  double eps_sway = 100.0;
  double eps_pitch = 100.0;
  double eps_yaw = 100.0;
  AngleConstraint angle_mode = AngleConstraint::Rates;

  void validate() const;
};

/// One sample of a local path: position, yaw, pitch and the velocity of
/// the vehicle over ground (vehicle through water plus current).
struct PathState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;    // rad
  double pitch = 0.0;  // rad
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;

  Vec3 position() const noexcept { return {x, y, z}; }
  /// Velocity resolved along the heading.
  double surge() const noexcept;
  /// Velocity resolved across the heading (positive to port).
  double sway() const noexcept;
};

struct Violations {
  double surge = 0.0;
  double sway = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  bool any() const noexcept { return surge > 0.0 || sway > 0.0 || pitch > 0.0 || yaw > 0.0; }
};

struct PathCost {
  double path_time = 0.0;  // s
  double cost = 0.0;
  Violations violations;
};

struct LocalPath {
  std::vector<PathState> samples;
  double path_time = 0.0;
  double cost = 0.0;
  Violations violations;
};

/// Control points of one edge path; front and back are the route nodes.
struct ControlPolygon {
  std::vector<Vec3> points;
};

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clamped uniform cubic B-spline sampled at n_samples uniform parameters
/// on [0,1]. Polygons shorter than four points are padded by repeating
/// endpoints.
std::vector<Vec3> evaluate_spline(std::span<const Vec3> control_points, std::size_t n_samples);

/// Per-segment heading, pitch and ground velocity with the current sampled at
/// the segment midpoint. The last sample repeats the final segment's state.
std::vector<PathState> kinematic_states(std::span<const Vec3> positions, double cruise_speed,
                                        const CurrentField& field);

/// Travel time plus weighted constraint violations. Velocity terms are summed
/// over the states of samples 0..n-2 (the final sample only closes the path);
/// rate terms use the turn between consecutive segments divided by the time
/// between their midpoints.
PathCost path_cost(std::span<const PathState> samples, const KinematicLimits& limits, double cruise_speed);

struct PathPlannerConfig {
  std::size_t interior_points = 5;
  std::size_t samples = 50;
  double window_margin = 0.25;    // fraction of the horizontal chord
  double min_window_margin = 100.0;  // m
  double vertical_margin = 0.0;   // m
  double init_spread = 0.15;      // initial perturbation, fraction of the window

  void validate() const;
};

struct PathPlan {
  LocalPath path;
  ControlPolygon polygon;
  foa::OptimizeResult optimization;
};

/// Spline, states and cost for a given control polygon.
LocalPath evaluate_polygon(const ControlPolygon& polygon, const CurrentField& field, const KinematicLimits& limits,
                           double cruise_speed, std::size_t n_samples);

/// Firefly search over the interior control points, expressed in normalised
/// coordinates of the planning window. The straight chord seeds the population.
PathPlan plan_path(Vec3 start, Vec3 end, const CurrentField& field, const KinematicLimits& limits,
                   double cruise_speed, const foa::FoaParams& params, const PathPlannerConfig& config = {});

/// Time lost against the expected edge time; zero when on schedule.
inline double realized_delay(double path_time, double expected_time) noexcept {
  return path_time > expected_time ? path_time - expected_time : 0.0;
}

}  // namespace auvplan
