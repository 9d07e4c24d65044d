#include "auvplan/path_planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "auvplan/rng.hpp"

namespace auvplan {

void KinematicLimits::validate() const {
  if (!(surge_max > 0.0)) throw PathError("KinematicLimits: surge_max must be positive");
  if (!(sway_min <= sway_max)) throw PathError("KinematicLimits: sway bounds out of order");
  if (!(pitch_max >= 0.0)) throw PathError("KinematicLimits: pitch_max must be nonnegative");
  if (!(yaw_min <= yaw_max)) throw PathError("KinematicLimits: yaw bounds out of order");
  if (eps_surge < 0.0 || eps_sway < 0.0 || eps_pitch < 0.0 || eps_yaw < 0.0)
    throw PathError("KinematicLimits: penalty weights must be nonnegative");
}

void PathPlannerConfig::validate() const {
  if (samples < 2) throw PathError("PathPlannerConfig: at least two samples are required");
  if (!(window_margin >= 0.0) || !(min_window_margin >= 0.0) || !(vertical_margin >= 0.0))
    throw PathError("PathPlannerConfig: margins must be nonnegative");
  if (!(init_spread >= 0.0)) throw PathError("PathPlannerConfig: init_spread must be nonnegative");
}

double PathState::surge() const noexcept { return vx * std::cos(yaw) + vy * std::sin(yaw); }
double PathState::sway() const noexcept { return -vx * std::sin(yaw) + vy * std::cos(yaw); }

std::vector<Vec3> evaluate_spline(std::span<const Vec3> control_points, std::size_t n_samples) {
  if (n_samples < 2) throw PathError("evaluate_spline: at least two samples are required");
  if (control_points.empty()) throw PathError("evaluate_spline: empty control polygon");

  std::vector<Vec3> pts(control_points.begin(), control_points.end());
  for (bool front = true; pts.size() < 4; front = !front) {
    if (front) {
      pts.insert(pts.begin(), pts.front());
    } else {
      pts.push_back(pts.back());
    }
  }

  const std::size_t n = pts.size();
  const double spans = static_cast<double>(n - 3);
  auto knot = [&](std::size_t j) {
    if (j <= 3) return 0.0;
    if (j >= n) return 1.0;
    return static_cast<double>(j - 3) / spans;
  };

  std::vector<Vec3> out(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double u = static_cast<double>(s) / static_cast<double>(n_samples - 1);
    const std::size_t k = std::min(n - 1, 3 + static_cast<std::size_t>(u * spans));
    // de Boor recursion on the four active control points.
    std::array<Vec3, 4> d{pts[k - 3], pts[k - 2], pts[k - 1], pts[k]};
    for (std::size_t r = 1; r <= 3; ++r) {
      for (std::size_t j = 3; j >= r; --j) {
        const std::size_t i = j + k - 3;
        const double denom = knot(i + 4 - r) - knot(i);
        const double alpha = denom > 0.0 ? (u - knot(i)) / denom : 0.0;
        d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
      }
    }
    out[s] = d[3];
  }
  return out;
}

std::vector<PathState> kinematic_states(std::span<const Vec3> positions, double cruise_speed,
                                        const CurrentField& field) {
  if (positions.size() < 2) throw PathError("kinematic_states: at least two positions are required");
  std::vector<PathState> states(positions.size());
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
    const Vec3 a = positions[i];
    const Vec3 b = positions[i + 1];
    const Vec3 d = b - a;
    const double horizontal = std::hypot(d.x, d.y);
    const double pitch = std::atan2(-std::abs(d.z), horizontal);
    const double yaw = std::atan2(d.y, d.x);
    const CurrentSample c = field.sample(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));

    PathState& st = states[i];
    st.x = a.x;
    st.y = a.y;
    st.z = a.z;
    st.yaw = yaw;
    st.pitch = pitch;
    st.vx = cruise_speed * std::cos(pitch) * std::cos(yaw) + c.vx;
    st.vy = cruise_speed * std::cos(pitch) * std::sin(yaw) + c.vy;
    st.vz = cruise_speed * std::sin(pitch);
  }
  PathState& last = states.back();
  last = states[states.size() - 2];
  last.x = positions.back().x;
  last.y = positions.back().y;
  last.z = positions.back().z;
  return states;
}

PathCost path_cost(std::span<const PathState> samples, const KinematicLimits& limits, double cruise_speed) {
  if (samples.size() < 2) throw PathError("path_cost: at least two samples are required");
  if (!(cruise_speed > 0.0)) throw PathError("path_cost: cruise speed must be positive");

  const std::size_t segments = samples.size() - 1;
  std::vector<double> length(segments);
  PathCost out;
  for (std::size_t i = 0; i < segments; ++i) {
    length[i] = distance(samples[i].position(), samples[i + 1].position());
    out.path_time += length[i] / cruise_speed;
  }

  Violations& v = out.violations;
  for (std::size_t i = 0; i < segments; ++i) {
    const PathState& s = samples[i];
    const double surge = s.surge();
    const double sway = s.sway();
    v.surge += std::max(0.0, surge - limits.surge_max);
    v.sway += std::max(0.0, sway - limits.sway_max) + std::max(0.0, limits.sway_min - sway);
    if (limits.angle_mode == AngleConstraint::Angles) {
      v.pitch += std::max(0.0, s.pitch - limits.pitch_max);
      v.yaw += std::max(0.0, s.yaw - limits.yaw_max) + std::max(0.0, limits.yaw_min - s.yaw);
    }
  }
  if (limits.angle_mode == AngleConstraint::Rates) {
    for (std::size_t i = 0; i + 1 < segments; ++i) {
      if (length[i] <= 0.0 || length[i + 1] <= 0.0) continue;  // heading undefined
      const double dt = 0.5 * (length[i] + length[i + 1]) / cruise_speed;
      const double pitch_rate = (samples[i + 1].pitch - samples[i].pitch) / dt;
      const double yaw_rate = wrap_angle(samples[i + 1].yaw - samples[i].yaw) / dt;
      v.pitch += std::max(0.0, std::abs(pitch_rate) - limits.pitch_max);
      v.yaw += std::max(0.0, yaw_rate - limits.yaw_max) + std::max(0.0, limits.yaw_min - yaw_rate);
    }
  }

  out.cost = out.path_time + limits.eps_surge * v.surge + limits.eps_sway * v.sway + limits.eps_pitch * v.pitch +
             limits.eps_yaw * v.yaw;
  return out;
}

LocalPath evaluate_polygon(const ControlPolygon& polygon, const CurrentField& field, const KinematicLimits& limits,
                           double cruise_speed, std::size_t n_samples) {
  LocalPath path;
  const auto positions = evaluate_spline(polygon.points, n_samples);
  path.samples = kinematic_states(positions, cruise_speed, field);
  const PathCost c = path_cost(path.samples, limits, cruise_speed);
  path.path_time = c.path_time;
  path.cost = c.cost;
  path.violations = c.violations;
  return path;
}

namespace {

struct Window {
  Vec3 lo;
  Vec3 hi;

  Vec3 to_world(double u, double v, double w) const noexcept {
    return {lo.x + u * (hi.x - lo.x), lo.y + v * (hi.y - lo.y), lo.z + w * (hi.z - lo.z)};
  }
  static double normalise(double q, double lo, double hi) noexcept { return hi > lo ? (q - lo) / (hi - lo) : 0.5; }
};

}  // namespace

PathPlan plan_path(Vec3 start, Vec3 end, const CurrentField& field, const KinematicLimits& limits,
                   double cruise_speed, const foa::FoaParams& params, const PathPlannerConfig& config) {
  if (start == end) throw PathError("plan_path: start and end coincide, planning window is degenerate");
  if (!(cruise_speed > 0.0)) throw PathError("plan_path: cruise speed must be positive");
  limits.validate();
  config.validate();
  params.validate();

  const double chord = std::hypot(end.x - start.x, end.y - start.y);
  const double margin = std::max(config.window_margin * chord, config.min_window_margin);
  const Window win{
      {std::min(start.x, end.x) - margin, std::min(start.y, end.y) - margin,
       std::min(start.z, end.z) - config.vertical_margin},
      {std::max(start.x, end.x) + margin, std::max(start.y, end.y) + margin,
       std::max(start.z, end.z) + config.vertical_margin},
  };

  const std::size_t m = config.interior_points;
  auto decode = [&](std::span<const double> u) {
    ControlPolygon poly;
    poly.points.reserve(m + 2);
    poly.points.push_back(start);
    for (std::size_t k = 0; k < m; ++k) poly.points.push_back(win.to_world(u[3 * k], u[3 * k + 1], u[3 * k + 2]));
    poly.points.push_back(end);
    return poly;
  };

  std::vector<double> straight(3 * m);
  for (std::size_t k = 0; k < m; ++k) {
    const Vec3 q = lerp(start, end, static_cast<double>(k + 1) / static_cast<double>(m + 1));
    straight[3 * k] = Window::normalise(q.x, win.lo.x, win.hi.x);
    straight[3 * k + 1] = Window::normalise(q.y, win.lo.y, win.hi.y);
    straight[3 * k + 2] = Window::normalise(q.z, win.lo.z, win.hi.z);
  }

  Rng init_rng(mix_seed(params.rng_seed, 0x5eed));
  std::vector<std::vector<double>> population(params.population_size, straight);
  for (std::size_t i = 1; i < population.size(); ++i) {
    for (auto& u : population[i]) u += init_rng.uniform(-config.init_spread, config.init_spread);
  }

  auto cost_fn = [&](std::span<const double> u) {
    return evaluate_polygon(decode(u), field, limits, cruise_speed, config.samples).cost;
  };

  PathPlan plan;
  if (m == 0) {
    // Nothing to optimise: the path is the cubic through the two endpoints.
    plan.polygon = decode({});
    plan.path = evaluate_polygon(plan.polygon, field, limits, cruise_speed, config.samples);
    plan.optimization.best.cost = plan.path.cost;
    plan.optimization.best_cost_history.assign(params.iterations, plan.path.cost);
    plan.optimization.evaluations = 1;
    return plan;
  }

  foa::SearchBox box{std::vector<double>(3 * m, 0.0), std::vector<double>(3 * m, 1.0)};
  plan.optimization = foa::optimize(cost_fn, std::move(population), params, box);
  plan.polygon = decode(plan.optimization.best.position);
  plan.path = evaluate_polygon(plan.polygon, field, limits, cruise_speed, config.samples);
  return plan;
}

}  // namespace auvplan
