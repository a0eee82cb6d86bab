#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mmshare/channel.hpp"
#include "mmshare/errors.hpp"
#include "mmshare/units.hpp"

namespace mmshare {

/// All link realizations of one operator, row-major over (gNB, UE) pairs.
struct OperatorLinks {
  int operator_index = 0;
  int num_gnbs = 0;
  int num_ues = 0;
  std::vector<LinkRecord> records;

  const LinkRecord& at(int gnb, int ue) const {
    return records[static_cast<std::size_t>(gnb) * static_cast<std::size_t>(num_ues) +
                   static_cast<std::size_t>(ue)];
  }
};

/// Realizes the channel for every (gNB, UE) pair of one operator, gNBs outer,
/// UEs inner, so the stream of random draws is reproducible.
inline OperatorLinks build_operator_links(int operator_index, const std::vector<Position>& gnbs,
                                          const std::vector<Position>& ues,
                                          const ChannelParams& params, RandomStream& rng) {
  OperatorLinks links;
  links.operator_index = operator_index;
  links.num_gnbs = static_cast<int>(gnbs.size());
  links.num_ues = static_cast<int>(ues.size());
  links.records.reserve(gnbs.size() * ues.size());
  for (int i = 0; i < links.num_gnbs; ++i) {
    for (int j = 0; j < links.num_ues; ++j) {
      links.records.push_back(make_link_record(operator_index, i, j,
                                               gnbs[static_cast<std::size_t>(i)],
                                               ues[static_cast<std::size_t>(j)], params, rng));
    }
  }
  return links;
}

/// Serving relation of one operator: each UE maps to at most one of the
/// operator's own gNBs, and per-gNB user lists are kept in UE-index order.
struct AssociationMap {
  std::vector<int> serving_gnb;            // per UE; -1 when every link is in outage
  std::vector<std::vector<int>> gnb_users; // per gNB, ascending UE indexes

  bool associated(int ue) const { return serving_gnb[static_cast<std::size_t>(ue)] >= 0; }
  int users_on(int gnb) const {
    return static_cast<int>(gnb_users[static_cast<std::size_t>(gnb)].size());
  }
};

/// Minimum-path-loss association, outage links excluded, ties broken toward
/// the lowest gNB index. The argmin only compares path losses, so any
/// strictly increasing transform of them leaves the map unchanged.
inline AssociationMap associate(const OperatorLinks& links) {
  AssociationMap map;
  map.serving_gnb.assign(static_cast<std::size_t>(links.num_ues), -1);
  map.gnb_users.assign(static_cast<std::size_t>(links.num_gnbs), {});
  for (int j = 0; j < links.num_ues; ++j) {
    double best = kOutagePathLossDb;
    int best_gnb = -1;
    for (int i = 0; i < links.num_gnbs; ++i) {
      const double pl = links.at(i, j).path_loss_db;
      if (pl < best) {
        best = pl;
        best_gnb = i;
      }
    }
    map.serving_gnb[static_cast<std::size_t>(j)] = best_gnb;
    if (best_gnb >= 0) {
      map.gnb_users[static_cast<std::size_t>(best_gnb)].push_back(j);
    }
  }
  return map;
}

/// A link bundled with the beamforming gain realized on it.
struct GainedLink {
  LinkRecord link;
  double gain_linear = 1.0;
};

struct SinrSample {
  double signal_power_w = 0.0;
  double interference_power_w = 0.0;
  double noise_power_w = 0.0;
  double sinr_linear = 0.0;
  double snr_linear = 0.0;
};

/// Received power of one term, in watts.
inline double received_power_w(const GainedLink& l, double tx_power_dbm) {
  return dbm_to_watts(tx_power_dbm) * l.gain_linear / db_to_linear(l.link.path_loss_db);
}

/// Narrowband SINR: desired power over the interferers' powers plus thermal
/// noise integrated over the allocated band. The interferer list must carry
/// the gains realized toward their own scheduled users, and is summed in the
/// order given (callers pass gNB-index order, keeping trials bit-stable).
inline SinrSample sinr(const GainedLink& serving, std::span<const GainedLink> interferers,
                       double tx_power_dbm, double band_hz, double noise_psd_dbm_hz) {
  if (serving.link.state == LinkState::Outage) {
    throw SimError(ErrorCode::OutageServingLink, "SINR is undefined on an outage serving link");
  }
  SinrSample sample;
  sample.signal_power_w = received_power_w(serving, tx_power_dbm);
  for (const GainedLink& interferer : interferers) {
    sample.interference_power_w += received_power_w(interferer, tx_power_dbm);
  }
  sample.noise_power_w = dbm_to_watts(noise_psd_dbm_hz) * band_hz;
  sample.sinr_linear =
      sample.signal_power_w / (sample.interference_power_w + sample.noise_power_w);
  sample.snr_linear = sample.signal_power_w / sample.noise_power_w;
  return sample;
}

/// Interference-free upper bound of the same link budget.
inline double snr(const GainedLink& serving, double tx_power_dbm, double band_hz,
                  double noise_psd_dbm_hz) {
  return sinr(serving, {}, tx_power_dbm, band_hz, noise_psd_dbm_hz).snr_linear;
}

/// Shannon-rate share of one user: the band is split evenly across the users
/// of its serving gNB. A zero band yields zero throughput outright.
inline double throughput(double band_hz, int users_on_gnb, double gamma_linear) {
  if (band_hz == 0.0) return 0.0;
  if (users_on_gnb < 1) {
    throw SimError(ErrorCode::ZeroUsers, "an active gNB must serve at least one user");
  }
  return band_hz / static_cast<double>(users_on_gnb) * std::log2(1.0 + gamma_linear);
}

}  // namespace mmshare
