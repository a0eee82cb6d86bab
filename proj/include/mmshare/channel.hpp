#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "mmshare/errors.hpp"
#include "mmshare/geometry.hpp"
#include "mmshare/random.hpp"

namespace mmshare {

/// Per-link propagation condition. Outage means no usable signal path at all.
enum class LinkState { Los, Nlos, Outage };

inline const char* link_state_name(LinkState s) {
  switch (s) {
    case LinkState::Los: return "los";
    case LinkState::Nlos: return "nlos";
    case LinkState::Outage: return "outage";
  }
  return "unknown";
}

/// Sentinel path loss carried by outage links.
inline constexpr double kOutagePathLossDb = std::numeric_limits<double>::infinity();

struct PathLossParams {
  double alpha_db;  // intercept at the 1 m reference distance
  double beta;      // distance exponent
  double sigma_db;  // lognormal shadowing standard deviation

  bool operator==(const PathLossParams&) const = default;
};

/// Distance-dependent state and path-loss model for dense-urban mmWave
/// macro cells, fitted to 28 GHz measurement campaigns:
///
///   p_out(d)  = max(0, 1 - exp(-d/30 + 5.2))
///   p_los(d)  = (1 - p_out(d)) * exp(-d/67.1)
///   p_nlos(d) = 1 - p_out(d) - p_los(d)
///   PL(d)     = alpha + beta * 10 log10(d) + N(0, sigma^2)   [dB, d in m]
///
/// with (alpha, beta, sigma) = (61.4, 2.0, 5.8) in LOS and (72.0, 2.92, 8.7)
/// in NLOS. The LOS intercept equals free-space path loss at 1 m; sampled
/// losses are floored there so shadowing can never produce a gain above free
/// space. All constants live here and can be overridden via JSON.
struct ChannelParams {
  PathLossParams los{61.4, 2.0, 5.8};
  PathLossParams nlos{72.0, 2.92, 8.7};
  double outage_decay_m = 30.0;
  double outage_offset = 5.2;
  double los_decay_m = 67.1;
  double path_loss_floor_db = 61.4;

  bool operator==(const ChannelParams&) const = default;
};

inline ChannelParams default_channel_params() { return ChannelParams{}; }

inline nlohmann::ordered_json channel_params_to_json(const ChannelParams& p) {
  nlohmann::ordered_json j;
  j["los"] = {{"alpha_db", p.los.alpha_db}, {"beta", p.los.beta}, {"sigma_db", p.los.sigma_db}};
  j["nlos"] = {{"alpha_db", p.nlos.alpha_db}, {"beta", p.nlos.beta}, {"sigma_db", p.nlos.sigma_db}};
  j["outage_decay_m"] = p.outage_decay_m;
  j["outage_offset"] = p.outage_offset;
  j["los_decay_m"] = p.los_decay_m;
  j["path_loss_floor_db"] = p.path_loss_floor_db;
  return j;
}

inline ChannelParams channel_params_from_json(const nlohmann::json& j) {
  ChannelParams p;
  try {
    if (j.contains("los")) {
      p.los.alpha_db = j["los"].value("alpha_db", p.los.alpha_db);
      p.los.beta = j["los"].value("beta", p.los.beta);
      p.los.sigma_db = j["los"].value("sigma_db", p.los.sigma_db);
    }
    if (j.contains("nlos")) {
      p.nlos.alpha_db = j["nlos"].value("alpha_db", p.nlos.alpha_db);
      p.nlos.beta = j["nlos"].value("beta", p.nlos.beta);
      p.nlos.sigma_db = j["nlos"].value("sigma_db", p.nlos.sigma_db);
    }
    p.outage_decay_m = j.value("outage_decay_m", p.outage_decay_m);
    p.outage_offset = j.value("outage_offset", p.outage_offset);
    p.los_decay_m = j.value("los_decay_m", p.los_decay_m);
    p.path_loss_floor_db = j.value("path_loss_floor_db", p.path_loss_floor_db);
  } catch (const nlohmann::json::exception& e) {
    throw SimError(ErrorCode::BadConfigValue, std::string("channel params: ") + e.what());
  }
  if (p.outage_decay_m <= 0.0 || p.los_decay_m <= 0.0 || p.los.sigma_db < 0.0 ||
      p.nlos.sigma_db < 0.0) {
    throw SimError(ErrorCode::NonPositiveParameter, "channel decay lengths must be positive and "
                                                    "shadowing deviations non-negative");
  }
  return p;
}

struct StateProbabilities {
  double p_los;
  double p_nlos;
  double p_outage;
};

/// Evaluates the three state probabilities at a 3D distance. They are
/// non-negative and sum to one for every d > 0.
inline StateProbabilities link_state_probabilities(double distance_3d_m,
                                                   const ChannelParams& params = ChannelParams{}) {
  if (!(distance_3d_m > 0.0)) {
    throw SimError(ErrorCode::NonPositiveDistance,
                   "link state requires distance > 0, got " + std::to_string(distance_3d_m));
  }
  const double p_out =
      std::max(0.0, 1.0 - std::exp(-distance_3d_m / params.outage_decay_m + params.outage_offset));
  const double p_los = (1.0 - p_out) * std::exp(-distance_3d_m / params.los_decay_m);
  const double p_nlos = 1.0 - p_out - p_los;
  return StateProbabilities{p_los, p_nlos, p_out};
}

/// Categorical draw over {LOS, NLOS, Outage} in that order, one uniform.
inline LinkState sample_link_state(double distance_3d_m, RandomStream& rng,
                                   const ChannelParams& params = ChannelParams{}) {
  const StateProbabilities p = link_state_probabilities(distance_3d_m, params);
  const double u = rng.uniform();
  if (u < p.p_los) return LinkState::Los;
  if (u < p.p_los + p.p_nlos) return LinkState::Nlos;
  return LinkState::Outage;
}

/// Samples the path loss in dB for a non-outage link: deterministic
/// distance law plus one i.i.d. shadowing draw.
inline double path_loss_db(LinkState state, double distance_3d_m, RandomStream& rng,
                           const ChannelParams& params = ChannelParams{}) {
  if (state == LinkState::Outage) {
    throw SimError(ErrorCode::OutageLink, "path loss is undefined for outage links");
  }
  if (!(distance_3d_m > 0.0)) {
    throw SimError(ErrorCode::NonPositiveDistance,
                   "path loss requires distance > 0, got " + std::to_string(distance_3d_m));
  }
  const PathLossParams& p = state == LinkState::Los ? params.los : params.nlos;
  const double deterministic = p.alpha_db + p.beta * 10.0 * std::log10(distance_3d_m);
  const double shadowing = rng.normal(0.0, p.sigma_db);
  return std::max(deterministic + shadowing, params.path_loss_floor_db);
}

/// One realized gNB-UE link: geometry, state, and path loss. The channel is
/// flat in time and frequency, so a single draw serves the whole trial.
struct LinkRecord {
  int gnb_index = 0;
  int ue_index = 0;
  int operator_index = 0;
  double distance_3d_m = 0.0;
  LinkState state = LinkState::Outage;
  double path_loss_db = kOutagePathLossDb;  // +inf sentinel while in outage
  double azimuth_at_gnb_rad = 0.0;          // direction gNB -> UE
  double zenith_at_gnb_rad = 0.0;
  double azimuth_at_ue_rad = 0.0;  // direction UE -> gNB
  double zenith_at_ue_rad = 0.0;
};

/// Draw order per link: state first, then (non-outage only) shadowing.
inline LinkRecord make_link_record(int operator_index, int gnb_index, int ue_index,
                                   const Position& gnb, const Position& ue,
                                   const ChannelParams& params, RandomStream& rng) {
  LinkRecord rec;
  rec.gnb_index = gnb_index;
  rec.ue_index = ue_index;
  rec.operator_index = operator_index;
  rec.distance_3d_m = distance_3d(gnb, ue);
  const Direction down = direction_between(gnb, ue);
  const Direction up = direction_between(ue, gnb);
  rec.azimuth_at_gnb_rad = down.azimuth_rad;
  rec.zenith_at_gnb_rad = down.zenith_rad;
  rec.azimuth_at_ue_rad = up.azimuth_rad;
  rec.zenith_at_ue_rad = up.zenith_rad;
  rec.state = sample_link_state(rec.distance_3d_m, rng, params);
  rec.path_loss_db = rec.state == LinkState::Outage
                         ? kOutagePathLossDb
                         : path_loss_db(rec.state, rec.distance_3d_m, rng, params);
  return rec;
}

}  // namespace mmshare
