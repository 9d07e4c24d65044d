#pragma once

#include <cmath>

namespace auvplan {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) noexcept = default;
};

inline double norm(Vec3 v) noexcept { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(Vec3 a, Vec3 b) noexcept { return norm(b - a); }
constexpr Vec3 lerp(Vec3 a, Vec3 b, double t) noexcept { return a + t * (b - a); }

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMetersPerSecondPerKnot = 0.514444;

constexpr double knots_to_mps(double knots) noexcept { return knots * kMetersPerSecondPerKnot; }
constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

// Wraps an angle difference into [-pi, pi).
inline double wrap_angle(double a) noexcept {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

}  // namespace auvplan
