#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace auvplan {

/// Lamb-Oseen vortex. Positive circulation rotates counter-clockwise.
struct Vortex {
  double x0 = 0.0;
  double y0 = 0.0;
  double circulation = 0.0;  // m^2/s
  double core_radius = 1.0;  // m

  void validate() const;
};

struct Velocity2 {
  double vx = 0.0;
  double vy = 0.0;

  friend bool operator==(const Velocity2&, const Velocity2&) = default;
};

struct CurrentSample {
  double vx = 0.0;
  double vy = 0.0;
  double magnitude = 0.0;
  double heading = 0.0;  // rad, atan2(vy, vx)
};

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tangential velocity induced by `v` at (x, y); zero at the core centre.
Velocity2 vortex_velocity(const Vortex& v, double x, double y) noexcept;

struct FieldGenerationParams {
  std::size_t n_vortices = 11;
  std::size_t nx = 100;
  std::size_t ny = 100;
  double extent_x = 10000.0;
  double extent_y = 10000.0;
  std::pair<double, double> strength_range{50.0, 500.0};
  std::pair<double, double> core_range{200.0, 800.0};
  std::uint64_t seed = 1;
};

/// Static 2-D current map stored on cell centres of an nx-by-ny grid spanning
/// [0, extent_x] x [0, extent_y]. Constant in depth. Immutable once built.
class CurrentField {
 public:
  /// Evaluates the superposed vortex velocities at every cell centre.
  CurrentField(std::size_t nx, std::size_t ny, double extent_x, double extent_y, std::vector<Vortex> vortices,
               std::uint64_t seed);

  /// Wraps an explicit grid (row-major, index = iy * nx + ix). Used for import
  /// and for hand-built test fields.
  CurrentField(std::size_t nx, std::size_t ny, double extent_x, double extent_y, std::vector<Vortex> vortices,
               std::uint64_t seed, std::vector<Velocity2> grid);

  static CurrentField zero(std::size_t nx, std::size_t ny, double extent_x, double extent_y);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double extent_x() const noexcept { return extent_x_; }
  double extent_y() const noexcept { return extent_y_; }
  double cell_x() const noexcept { return extent_x_ / static_cast<double>(nx_); }
  double cell_y() const noexcept { return extent_y_ / static_cast<double>(ny_); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Vortex>& vortices() const noexcept { return vortices_; }
  const std::vector<Velocity2>& grid() const noexcept { return grid_; }

  const Velocity2& at(std::size_t ix, std::size_t iy) const { return grid_.at(iy * nx_ + ix); }

  /// World coordinates of a cell centre.
  double node_x(std::size_t ix) const noexcept { return (static_cast<double>(ix) + 0.5) * cell_x(); }
  double node_y(std::size_t iy) const noexcept { return (static_cast<double>(iy) + 0.5) * cell_y(); }

  /// Bilinear interpolation between cell centres; queries outside the
  /// centre lattice clamp to the boundary cells.
  CurrentSample sample(double x, double y) const noexcept;

  double max_speed() const noexcept;

 private:
  void validate_shape() const;

  std::size_t nx_;
  std::size_t ny_;
  double extent_x_;
  double extent_y_;
  std::vector<Vortex> vortices_;
  std::uint64_t seed_;
  std::vector<Velocity2> grid_;
};

/// Vortex centres ~ N(midpoint, extent/4) per axis, redrawn until inside the
/// domain; |circulation| and core radius uniform in their ranges with a random
/// sign on the circulation.
CurrentField generate_field(const FieldGenerationParams& params);

CurrentSample sample_velocity(const CurrentField& field, double x, double y) noexcept;

/// Central-difference divergence at interior node (ix, iy), in 1/s.
double discrete_divergence(const CurrentField& field, std::size_t ix, std::size_t iy);

}  // namespace auvplan
