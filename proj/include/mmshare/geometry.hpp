#pragma once

#include <cmath>

#include "mmshare/units.hpp"

namespace mmshare {

/// Right-handed frame: x/y span the horizontal plane, z points up.
struct Position {
  double x_m = 0.0;
  double y_m = 0.0;
  double z_m = 0.0;

  bool operator==(const Position&) const = default;
};

/// Propagation direction in the global frame. Azimuth is measured in the
/// horizontal plane from the +x axis, zenith from the +z axis (so the horizon
/// sits at zenith = pi/2).
struct Direction {
  double azimuth_rad = 0.0;
  double zenith_rad = kPi / 2.0;
};

inline double distance_3d(const Position& a, const Position& b) {
  const double dx = b.x_m - a.x_m;
  const double dy = b.y_m - a.y_m;
  const double dz = b.z_m - a.z_m;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Wraps an angle to (-pi, pi].
inline double wrap_to_pi(double angle_rad) {
  double a = std::remainder(angle_rad, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

/// Direction of travel for a signal leaving `from` toward `to`.
inline Direction direction_between(const Position& from, const Position& to) {
  const double dx = to.x_m - from.x_m;
  const double dy = to.y_m - from.y_m;
  const double dz = to.z_m - from.z_m;
  const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
  Direction dir;
  dir.azimuth_rad = std::atan2(dy, dx);
  dir.zenith_rad = d > 0.0 ? std::acos(dz / d) : 0.0;
  return dir;
}

}  // namespace mmshare
