#pragma once

#include <string>
#include <vector>

#include "mmshare/errors.hpp"
#include "mmshare/geometry.hpp"
#include "mmshare/random.hpp"
#include "mmshare/scenario.hpp"

namespace mmshare {

struct OperatorDeployment {
  std::vector<Position> gnbs;
  std::vector<Position> ues;
};

/// One trial's node placement: an independent PPP per operator per node type,
/// plus the probe UE pinned to the exact area centre. The probe belongs to
/// the first operator and is the last entry of its UE list; anchoring it at
/// the centre keeps every border equally far away, so all interferers around
/// it are inside the region.
struct Deployment {
  std::vector<OperatorDeployment> operators;
  Position typical_ue;
  int typical_operator_index = 0;

  int typical_ue_index() const {
    return static_cast<int>(operators[typical_operator_index].ues.size()) - 1;
  }
};

/// Homogeneous PPP over a square of the given side centred on the origin:
/// a Poisson count with mean intensity*area, then i.i.d. uniform positions.
/// Draw order: count, then x and y per point.
inline std::vector<Position> sample_ppp(double intensity_per_km2, double region_side_m,
                                        double height_m, RandomStream& rng) {
  const double side_km = region_side_m / 1000.0;
  const std::uint64_t count = rng.poisson(intensity_per_km2 * side_km * side_km);
  std::vector<Position> points;
  points.reserve(count);
  const double half = region_side_m / 2.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double x = rng.uniform(-half, half);
    const double y = rng.uniform(-half, half);
    points.push_back(Position{x, y, height_m});
  }
  return points;
}

/// Samples all 2M point processes in operator order (gNBs then UEs) and
/// appends the probe UE. Throws DegenerateTrial when the first operator draws
/// no gNBs at all; the caller retries on the next substream.
inline Deployment generate_deployment(const ValidatedScenario& scenario, RandomStream& rng) {
  const ScenarioConfig& cfg = scenario.config();
  Deployment deployment;
  deployment.operators.resize(static_cast<std::size_t>(cfg.num_operators));
  for (int m = 0; m < cfg.num_operators; ++m) {
    OperatorDeployment& op = deployment.operators[static_cast<std::size_t>(m)];
    op.gnbs = sample_ppp(cfg.gnb_density_per_km2, cfg.area_side_m, cfg.gnb_height_m, rng);
    if (m == 0 && op.gnbs.empty()) {
      throw SimError(ErrorCode::DegenerateTrial,
                     "operator 1 drew zero gNBs; trial must be resampled");
    }
    op.ues = sample_ppp(cfg.ue_density_per_km2, cfg.area_side_m, cfg.ue_height_m, rng);
  }
  deployment.typical_ue = Position{0.0, 0.0, cfg.ue_height_m};
  deployment.typical_operator_index = 0;
  deployment.operators.front().ues.push_back(deployment.typical_ue);
  return deployment;
}

}  // namespace mmshare
