#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mmshare/errors.hpp"
#include "mmshare/geometry.hpp"
#include "mmshare/units.hpp"

namespace mmshare {

/// Uniform planar array mounted as a vertical panel: rows stack along z,
/// columns along the horizontal axis of the panel, boresight on the horizon
/// at `boresight_azimuth_rad`. Element spacing is half a wavelength.
///
/// Angle convention inside the array frame: zenith theta in [0, pi] measured
/// from straight up, azimuth phi in (-pi, pi] measured from boresight. The
/// response phase of element (p, q), p over rows and q over columns, is
///
///   2*pi * spacing * (p*cos(theta) + q*sin(theta)*sin(phi)).
struct ArrayGeometry {
  int rows = 1;
  int cols = 1;
  double element_spacing_wavelengths = 0.5;
  double boresight_azimuth_rad = 0.0;
  bool isotropic_elements = false;  // true: 0 dBi elements instead of the sector pattern

  int num_elements() const { return rows * cols; }
};

inline constexpr double kElementMaxGainDbi = 8.0;
inline constexpr double kElementBeamwidthDeg = 65.0;
inline constexpr double kElementFloorDb = 30.0;  // both the per-cut limit and the overall one

/// Sector element pattern: parabolic vertical and horizontal cuts with 65
/// degree 3 dB beamwidths, each clipped at -30 dB, 8 dBi peak, and the
/// combined attenuation clipped at 30 dB again.
inline double element_gain_db(double theta_deg, double phi_deg) {
  if (theta_deg < 0.0 || theta_deg > 180.0) {
    throw SimError(ErrorCode::AngleOutOfRange,
                   "zenith angle must lie in [0, 180], got " + std::to_string(theta_deg));
  }
  if (phi_deg < -180.0 || phi_deg > 180.0) {
    throw SimError(ErrorCode::AngleOutOfRange,
                   "azimuth angle must lie in [-180, 180], got " + std::to_string(phi_deg));
  }
  const double vertical_cut = (theta_deg - 90.0) / kElementBeamwidthDeg;
  const double horizontal_cut = phi_deg / kElementBeamwidthDeg;
  const double attenuation_v = -std::min(12.0 * vertical_cut * vertical_cut, kElementFloorDb);
  const double attenuation_h = -std::min(12.0 * horizontal_cut * horizontal_cut, kElementFloorDb);
  return kElementMaxGainDbi - std::min(-(attenuation_v + attenuation_h), kElementFloorDb);
}

/// Rotates a global direction into the panel frame (rotation about z only;
/// the zenith angle is unchanged).
inline Direction to_array_frame(const ArrayGeometry& geom, const Direction& global) {
  return Direction{wrap_to_pi(global.azimuth_rad - geom.boresight_azimuth_rad),
                   global.zenith_rad};
}

inline double element_gain_linear(const ArrayGeometry& geom, const Direction& array_frame) {
  if (geom.isotropic_elements) return 1.0;
  return db_to_linear(
      element_gain_db(rad_to_deg(array_frame.zenith_rad), rad_to_deg(array_frame.azimuth_rad)));
}

namespace detail {

inline double element_phase(const ArrayGeometry& geom, const Direction& dir, int row, int col) {
  return 2.0 * kPi * geom.element_spacing_wavelengths *
         (row * std::cos(dir.zenith_rad) +
          col * std::sin(dir.zenith_rad) * std::sin(dir.azimuth_rad));
}

}  // namespace detail

/// Array response toward a direction expressed in the array frame. Every
/// entry has unit magnitude; element (p, q) sits at index p*cols + q.
inline std::vector<std::complex<double>> array_response(const ArrayGeometry& geom,
                                                        const Direction& array_frame) {
  std::vector<std::complex<double>> response;
  response.reserve(static_cast<std::size_t>(geom.num_elements()));
  for (int p = 0; p < geom.rows; ++p) {
    for (int q = 0; q < geom.cols; ++q) {
      response.push_back(std::polar(1.0, detail::element_phase(geom, array_frame, p, q)));
    }
  }
  return response;
}

/// Unit-norm conjugate beamforming weights toward an array-frame direction.
inline std::vector<std::complex<double>> steering_vector(const ArrayGeometry& geom,
                                                         const Direction& array_frame) {
  std::vector<std::complex<double>> weights = array_response(geom, array_frame);
  const double norm = 1.0 / std::sqrt(static_cast<double>(geom.num_elements()));
  for (auto& w : weights) w *= norm;
  return weights;
}

/// |w(steer)^H a(actual)|^2 for array-frame directions; peaks at the element
/// count when steer equals actual.
inline double array_factor(const ArrayGeometry& geom, const Direction& steer_array_frame,
                           const Direction& actual_array_frame) {
  std::complex<double> sum{0.0, 0.0};
  for (int p = 0; p < geom.rows; ++p) {
    for (int q = 0; q < geom.cols; ++q) {
      const double phase = detail::element_phase(geom, actual_array_frame, p, q) -
                           detail::element_phase(geom, steer_array_frame, p, q);
      sum += std::polar(1.0, phase);
    }
  }
  return std::norm(sum) / static_cast<double>(geom.num_elements());
}

/// Linear power gain of a beamformed link. Both arrays steer toward their
/// intended directions while the signal actually departs/arrives along the
/// actual ones; all directions are given in the global frame. With
/// steer == actual at both ends this reduces to
/// N_tx * g_elem_tx * N_rx * g_elem_rx.
inline double beamforming_gain(const ArrayGeometry& tx_geom, const Direction& tx_steer,
                               const ArrayGeometry& rx_geom, const Direction& rx_steer,
                               const Direction& tx_actual, const Direction& rx_actual) {
  const Direction tx_steer_af = to_array_frame(tx_geom, tx_steer);
  const Direction tx_actual_af = to_array_frame(tx_geom, tx_actual);
  const Direction rx_steer_af = to_array_frame(rx_geom, rx_steer);
  const Direction rx_actual_af = to_array_frame(rx_geom, rx_actual);
  return array_factor(tx_geom, tx_steer_af, tx_actual_af) *
         element_gain_linear(tx_geom, tx_actual_af) *
         array_factor(rx_geom, rx_steer_af, rx_actual_af) *
         element_gain_linear(rx_geom, rx_actual_af);
}

}  // namespace mmshare
