#include "auvplan/current_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auvplan/geometry.hpp"
#include "auvplan/rng.hpp"

namespace auvplan {

void Vortex::validate() const {
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw FieldError("Vortex: centre must be finite");
  if (!std::isfinite(circulation)) throw FieldError("Vortex: circulation must be finite");
  if (!(core_radius > 0.0) || !std::isfinite(core_radius)) throw FieldError("Vortex: core radius must be positive");
}

Velocity2 vortex_velocity(const Vortex& v, double x, double y) noexcept {
  const double dx = x - v.x0;
  const double dy = y - v.y0;
  const double r2 = dx * dx + dy * dy;
  if (r2 == 0.0) return {};
  // v_theta / r = Gamma / (2 pi r^2) * (1 - exp(-r^2 / (2 rc^2)))
  const double scale = v.circulation / (2.0 * kPi * r2) * -std::expm1(-r2 / (2.0 * v.core_radius * v.core_radius));
  return {-dy * scale, dx * scale};
}

CurrentField::CurrentField(std::size_t nx, std::size_t ny, double extent_x, double extent_y,
                           std::vector<Vortex> vortices, std::uint64_t seed)
    : nx_(nx), ny_(ny), extent_x_(extent_x), extent_y_(extent_y), vortices_(std::move(vortices)), seed_(seed) {
  validate_shape();
  for (const auto& v : vortices_) v.validate();
  grid_.assign(nx_ * ny_, Velocity2{});
  for (std::size_t iy = 0; iy < ny_; ++iy) {
    const double y = node_y(iy);
    for (std::size_t ix = 0; ix < nx_; ++ix) {
      const double x = node_x(ix);
      Velocity2 acc{};
      for (const auto& v : vortices_) {
        const Velocity2 u = vortex_velocity(v, x, y);
        acc.vx += u.vx;
        acc.vy += u.vy;
      }
      grid_[iy * nx_ + ix] = acc;
    }
  }
}

CurrentField::CurrentField(std::size_t nx, std::size_t ny, double extent_x, double extent_y,
                           std::vector<Vortex> vortices, std::uint64_t seed, std::vector<Velocity2> grid)
    : nx_(nx),
      ny_(ny),
      extent_x_(extent_x),
      extent_y_(extent_y),
      vortices_(std::move(vortices)),
      seed_(seed),
      grid_(std::move(grid)) {
  validate_shape();
  for (const auto& v : vortices_) v.validate();
  if (grid_.size() != nx_ * ny_) {
    throw FieldError("CurrentField: grid holds " + std::to_string(grid_.size()) + " cells, expected " +
                     std::to_string(nx_ * ny_));
  }
  for (const auto& g : grid_) {
    if (!std::isfinite(g.vx) || !std::isfinite(g.vy)) throw FieldError("CurrentField: non-finite velocity in grid");
  }
}

CurrentField CurrentField::zero(std::size_t nx, std::size_t ny, double extent_x, double extent_y) {
  return CurrentField(nx, ny, extent_x, extent_y, {}, 0);
}

void CurrentField::validate_shape() const {
  if (nx_ < 2 || ny_ < 2) throw FieldError("CurrentField: grid must be at least 2x2");
  if (!(extent_x_ > 0.0) || !(extent_y_ > 0.0) || !std::isfinite(extent_x_) || !std::isfinite(extent_y_))
    throw FieldError("CurrentField: extent must be positive");
}

CurrentSample CurrentField::sample(double x, double y) const noexcept {
  // Continuous grid coordinate of the query, in cell-centre units.
  const double gx = std::clamp(x / cell_x() - 0.5, 0.0, static_cast<double>(nx_ - 1));
  const double gy = std::clamp(y / cell_y() - 0.5, 0.0, static_cast<double>(ny_ - 1));
  const auto ix = std::min(static_cast<std::size_t>(gx), nx_ - 2);
  const auto iy = std::min(static_cast<std::size_t>(gy), ny_ - 2);
  const double fx = gx - static_cast<double>(ix);
  const double fy = gy - static_cast<double>(iy);

  const Velocity2& v00 = grid_[iy * nx_ + ix];
  const Velocity2& v10 = grid_[iy * nx_ + ix + 1];
  const Velocity2& v01 = grid_[(iy + 1) * nx_ + ix];
  const Velocity2& v11 = grid_[(iy + 1) * nx_ + ix + 1];

  auto blend = [&](double a00, double a10, double a01, double a11) {
    return (1.0 - fy) * ((1.0 - fx) * a00 + fx * a10) + fy * ((1.0 - fx) * a01 + fx * a11);
  };
  CurrentSample s;
  s.vx = blend(v00.vx, v10.vx, v01.vx, v11.vx);
  s.vy = blend(v00.vy, v10.vy, v01.vy, v11.vy);
  s.magnitude = std::hypot(s.vx, s.vy);
  s.heading = std::atan2(s.vy, s.vx);
  return s;
}

double CurrentField::max_speed() const noexcept {
  double m = 0.0;
  for (const auto& g : grid_) m = std::max(m, std::hypot(g.vx, g.vy));
  return m;
}

CurrentSample sample_velocity(const CurrentField& field, double x, double y) noexcept { return field.sample(x, y); }

CurrentField generate_field(const FieldGenerationParams& p) {
  if (!(p.extent_x > 0.0) || !(p.extent_y > 0.0)) throw FieldError("generate_field: zero-area extent");
  auto check_range = [](std::pair<double, double> r, const char* what) {
    if (!std::isfinite(r.first) || !std::isfinite(r.second) || r.first > r.second)
      throw FieldError(std::string("generate_field: invalid ") + what);
  };
  check_range(p.strength_range, "strength_range");
  check_range(p.core_range, "core_range");
  if (!(p.core_range.first > 0.0)) throw FieldError("generate_field: core radius must be positive");

  Rng rng(p.seed);
  std::vector<Vortex> vortices;
  vortices.reserve(p.n_vortices);
  const double cx = 0.5 * p.extent_x;
  const double cy = 0.5 * p.extent_y;
  for (std::size_t i = 0; i < p.n_vortices; ++i) {
    Vortex v;
    do {
      v.x0 = rng.normal(cx, p.extent_x / 4.0);
    } while (v.x0 < 0.0 || v.x0 > p.extent_x);
    do {
      v.y0 = rng.normal(cy, p.extent_y / 4.0);
    } while (v.y0 < 0.0 || v.y0 > p.extent_y);
    const double strength = rng.uniform(p.strength_range.first, p.strength_range.second);
    v.circulation = rng.coin() ? strength : -strength;
    v.core_radius = rng.uniform(p.core_range.first, p.core_range.second);
    vortices.push_back(v);
  }
  return CurrentField(p.nx, p.ny, p.extent_x, p.extent_y, std::move(vortices), p.seed);
}

double discrete_divergence(const CurrentField& f, std::size_t ix, std::size_t iy) {
  if (ix == 0 || iy == 0 || ix + 1 >= f.nx() || iy + 1 >= f.ny())
    throw FieldError("discrete_divergence: node is not interior");
  const double dudx = (f.at(ix + 1, iy).vx - f.at(ix - 1, iy).vx) / (2.0 * f.cell_x());
  const double dvdy = (f.at(ix, iy + 1).vy - f.at(ix, iy - 1).vy) / (2.0 * f.cell_y());
  return dudx + dvdy;
}

}  // namespace auvplan
