#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "mmshare/allocation.hpp"
#include "mmshare/antenna.hpp"
#include "mmshare/deployment.hpp"
#include "mmshare/link.hpp"
#include "mmshare/scenario.hpp"

namespace mmshare {

/// The four evaluated configurations: both licensing policies, each scored
/// with the interference-aware SINR and with the interference-free SNR bound.
enum class EvalConfiguration : int {
  kBaselineSinr = 0,
  kBaselineSnr = 1,
  kDynamicSinr = 2,
  kDynamicSnr = 3,
};

inline constexpr std::array<EvalConfiguration, 4> kAllConfigurations = {
    EvalConfiguration::kBaselineSinr, EvalConfiguration::kBaselineSnr,
    EvalConfiguration::kDynamicSinr, EvalConfiguration::kDynamicSnr};

inline const char* configuration_name(EvalConfiguration c) {
  switch (c) {
    case EvalConfiguration::kBaselineSinr: return "baseline_sinr";
    case EvalConfiguration::kBaselineSnr: return "baseline_snr";
    case EvalConfiguration::kDynamicSinr: return "dynamic_sinr";
    case EvalConfiguration::kDynamicSnr: return "dynamic_snr";
  }
  return "unknown";
}

/// Probe-user results of a single trial. Within each policy the SNR variant
/// can never fall below the SINR variant: same band, same share, and the
/// interference-free ratio dominates.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::array<double, 4> throughput_bps{};  // indexed by EvalConfiguration
  std::vector<std::int64_t> loads;
  int users_on_typical_gnb = 0;
  int resample_count = 0;

  double throughput(EvalConfiguration c) const {
    return throughput_bps[static_cast<std::size_t>(c)];
  }
};

/// Everything a trial produced besides its record; captured on request for
/// the per-trial dump files.
struct TrialDetail {
  Deployment deployment;
  std::vector<double> gnb_orientations_rad;    // operator 1's gNB panels
  std::vector<OperatorLinks> links;            // per operator, all (gNB, UE) pairs
  std::vector<std::vector<LinkRecord>> probe_links;  // per operator, gNB -> area centre
  std::vector<AssociationMap> associations;
  AllocationResult baseline;
  AllocationResult dynamic;
  int serving_gnb = -1;
  SinrSample baseline_sample{};
  SinrSample dynamic_sample{};
  bool has_samples = false;
};

struct ConfigurationStats {
  std::vector<double> sorted_throughput_bps;  // the empirical CDF support
  double jain = 0.0;
  double mean_throughput_bps = 0.0;
};

struct CampaignResult {
  ScenarioConfig scenario;
  std::uint64_t num_trials = 0;
  std::uint64_t total_resamples = 0;
  std::array<ConfigurationStats, 4> configurations;
  std::vector<TrialRecord> trials;
  std::vector<TrialDetail> details;  // first `capture_details` trials, in order

  const ConfigurationStats& stats(EvalConfiguration c) const {
    return configurations[static_cast<std::size_t>(c)];
  }
};

struct CampaignOptions {
  unsigned workers = 1;
  std::uint64_t capture_details = 0;
};

namespace detail {

/// Typical gNB of an operator: the gNB with the smallest non-outage path
/// loss to the area centre (ties toward the lowest index), or -1 when every
/// centre link is in outage or the operator has no gNBs.
inline int typical_gnb_index(std::span<const LinkRecord> centre_links) {
  double best = kOutagePathLossDb;
  int best_gnb = -1;
  for (const LinkRecord& rec : centre_links) {
    if (rec.path_loss_db < best) {
      best = rec.path_loss_db;
      best_gnb = rec.gnb_index;
    }
  }
  return best_gnb;
}

inline Direction gnb_side_direction(const LinkRecord& rec) {
  return Direction{rec.azimuth_at_gnb_rad, rec.zenith_at_gnb_rad};
}

inline Direction ue_side_direction(const LinkRecord& rec) {
  return Direction{rec.azimuth_at_ue_rad, rec.zenith_at_ue_rad};
}

}  // namespace detail

/// Runs one Monte Carlo trial. Both policies are evaluated on the very same
/// deployment, channel, beam and scheduling draws, so their difference is
/// purely the allocation rule. The trial seed is derived from
/// (master_seed, trial_index); a deployment that leaves the first operator
/// without gNBs is redrawn on the next substream and counted.
///
/// Random draw order within a trial, fixed for reproducibility:
///   1. per operator: gNB PPP, then UE PPP
///   2. panel orientation per gNB of operator 1
///   3. per operator: link states/shadowing gNB-major, then (operators
///      other than the first) the gNB-to-centre probe links
///   4. one scheduled-user draw per interfering gNB, in gNB order
inline TrialRecord run_trial(const ValidatedScenario& scenario, std::uint64_t trial_index,
                             TrialDetail* detail_out = nullptr) {
  const ScenarioConfig& cfg = scenario.config();
  const ChannelParams& chan = scenario.channel();
  const TrialSeed trial_seed = derive_trial_seed(cfg.master_seed, trial_index);

  TrialRecord record;
  record.trial_index = trial_index;

  // Deployment, redrawn while the typical operator comes up empty.
  Deployment deployment;
  RandomStream rng(substream_seed(trial_seed.value, 0));
  constexpr int kMaxResamples = 1 << 20;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= kMaxResamples) {
      throw SimError(ErrorCode::DegenerateTrial,
                     "exceeded resampling budget; check gnb_density_per_km2");
    }
    rng = RandomStream(substream_seed(trial_seed.value, static_cast<std::uint64_t>(attempt)));
    try {
      deployment = generate_deployment(scenario, rng);
      record.resample_count = attempt;
      break;
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::DegenerateTrial) throw;
    }
  }

  const int operators = cfg.num_operators;
  const OperatorDeployment& op0 = deployment.operators.front();
  const int typical_ue = deployment.typical_ue_index();

  std::vector<double> orientations(op0.gnbs.size());
  for (double& o : orientations) o = rng.uniform(-kPi, kPi);

  // Channel realization, plus centre-probe links for the other operators
  // (the first operator's probe links are the typical UE's own links).
  std::vector<OperatorLinks> links(static_cast<std::size_t>(operators));
  std::vector<std::vector<LinkRecord>> probe_links(static_cast<std::size_t>(operators));
  const Position centre{0.0, 0.0, cfg.ue_height_m};
  for (int m = 0; m < operators; ++m) {
    const OperatorDeployment& op = deployment.operators[static_cast<std::size_t>(m)];
    links[static_cast<std::size_t>(m)] =
        build_operator_links(m, op.gnbs, op.ues, chan, rng);
    if (m == 0) {
      probe_links[0].reserve(op.gnbs.size());
      for (int i = 0; i < static_cast<int>(op.gnbs.size()); ++i) {
        probe_links[0].push_back(links[0].at(i, typical_ue));
      }
    } else {
      probe_links[static_cast<std::size_t>(m)].reserve(op.gnbs.size());
      for (int i = 0; i < static_cast<int>(op.gnbs.size()); ++i) {
        probe_links[static_cast<std::size_t>(m)].push_back(
            make_link_record(m, i, 0, op.gnbs[static_cast<std::size_t>(i)], centre, chan, rng));
      }
    }
  }

  std::vector<AssociationMap> associations(static_cast<std::size_t>(operators));
  for (int m = 0; m < operators; ++m) {
    associations[static_cast<std::size_t>(m)] = associate(links[static_cast<std::size_t>(m)]);
  }

  // Loads: users associated to each operator's typical gNB.
  record.loads.assign(static_cast<std::size_t>(operators), 0);
  for (int m = 0; m < operators; ++m) {
    const int typical_gnb = detail::typical_gnb_index(probe_links[static_cast<std::size_t>(m)]);
    record.loads[static_cast<std::size_t>(m)] =
        typical_gnb >= 0 ? associations[static_cast<std::size_t>(m)].users_on(typical_gnb) : 0;
  }

  const AllocationResult baseline = baseline_allocation(scenario);
  const AllocationResult dynamic =
      dynamic_allocation(record.loads, cfg.total_bandwidth_hz, cfg.allocation_floor_fraction);

  const AssociationMap& assoc0 = associations.front();
  const int serving = assoc0.serving_gnb[static_cast<std::size_t>(typical_ue)];
  record.users_on_typical_gnb = serving >= 0 ? assoc0.users_on(serving) : 0;

  if (detail_out != nullptr) {
    detail_out->deployment = deployment;
    detail_out->gnb_orientations_rad = orientations;
    detail_out->links = links;
    detail_out->probe_links = probe_links;
    detail_out->associations = associations;
    detail_out->baseline = baseline;
    detail_out->dynamic = dynamic;
    detail_out->serving_gnb = serving;
    detail_out->has_samples = false;
  }

  if (serving < 0) {
    return record;  // probe user in outage toward every gNB: zero throughput
  }

  const LinkRecord& serving_link = links[0].at(serving, typical_ue);

  auto gnb_geometry = [&](int gnb) {
    return ArrayGeometry{cfg.gnb_array.rows, cfg.gnb_array.cols, 0.5,
                         orientations[static_cast<std::size_t>(gnb)], false};
  };
  const ArrayGeometry ue_geometry{cfg.ue_array.rows, cfg.ue_array.cols, 0.5,
                                  serving_link.azimuth_at_ue_rad, cfg.ue_isotropic_elements};
  const Direction rx_steer = detail::ue_side_direction(serving_link);

  GainedLink serving_term;
  serving_term.link = serving_link;
  serving_term.gain_linear =
      beamforming_gain(gnb_geometry(serving), detail::gnb_side_direction(serving_link),
                       ue_geometry, rx_steer, detail::gnb_side_direction(serving_link), rx_steer);

  // Interference snapshot: every other loaded gNB of the operator beams at
  // one uniformly drawn user of its own; idle gNBs stay silent.
  std::vector<GainedLink> interferers;
  interferers.reserve(op0.gnbs.size());
  for (int k = 0; k < static_cast<int>(op0.gnbs.size()); ++k) {
    if (k == serving || assoc0.users_on(k) == 0) continue;
    const auto& users = assoc0.gnb_users[static_cast<std::size_t>(k)];
    const int scheduled = users[rng.uniform_index(users.size())];
    const LinkRecord& to_typical = links[0].at(k, typical_ue);
    if (to_typical.state == LinkState::Outage) continue;  // no propagation path
    const LinkRecord& to_scheduled = links[0].at(k, scheduled);
    GainedLink term;
    term.link = to_typical;
    term.gain_linear = beamforming_gain(
        gnb_geometry(k), detail::gnb_side_direction(to_scheduled), ue_geometry, rx_steer,
        detail::gnb_side_direction(to_typical), detail::ue_side_direction(to_typical));
    interferers.push_back(term);
  }

  auto evaluate = [&](const AllocationResult& allocation, EvalConfiguration sinr_slot,
                      EvalConfiguration snr_slot, SinrSample* sample_out) {
    const double band = allocation.bandwidth_hz.front();
    if (band <= 0.0) return;  // starved operator transmits nothing
    const SinrSample sample =
        sinr(serving_term, interferers, cfg.tx_power_dbm, band, cfg.noise_psd_dbm_hz);
    record.throughput_bps[static_cast<std::size_t>(sinr_slot)] =
        throughput(band, record.users_on_typical_gnb, sample.sinr_linear);
    record.throughput_bps[static_cast<std::size_t>(snr_slot)] =
        throughput(band, record.users_on_typical_gnb, sample.snr_linear);
    if (sample_out != nullptr) *sample_out = sample;
  };

  SinrSample baseline_sample{}, dynamic_sample{};
  evaluate(baseline, EvalConfiguration::kBaselineSinr, EvalConfiguration::kBaselineSnr,
           &baseline_sample);
  evaluate(dynamic, EvalConfiguration::kDynamicSinr, EvalConfiguration::kDynamicSnr,
           &dynamic_sample);

  if (detail_out != nullptr) {
    detail_out->baseline_sample = baseline_sample;
    detail_out->dynamic_sample = dynamic_sample;
    detail_out->has_samples = true;
  }
  return record;
}

/// Empirical CDF: one (value, k/n) step per sample, ties sharing the highest
/// step of the tied block.
inline std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> samples) {
  if (samples.empty()) {
    throw SimError(ErrorCode::EmptyInput, "empirical CDF of an empty sample is undefined");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double probability = static_cast<double>(j + 1) / n;
    for (std::size_t k = i; k <= j; ++k) cdf.emplace_back(sorted[i], probability);
    i = j + 1;
  }
  return cdf;
}

/// Runs T independently seeded trials (possibly across worker threads) and
/// aggregates per-configuration statistics. Aggregation happens after all
/// trials completed, in trial order, so the result does not depend on the
/// worker count.
inline CampaignResult run_campaign(const ValidatedScenario& scenario,
                                   const CampaignOptions& options = {}) {
  const ScenarioConfig& cfg = scenario.config();
  const std::uint64_t trials = cfg.num_trials;
  const std::uint64_t captured = std::min<std::uint64_t>(options.capture_details, trials);

  CampaignResult result;
  result.scenario = cfg;
  result.num_trials = trials;
  result.trials.resize(trials);
  result.details.resize(captured);

  const unsigned workers = std::max(1u, options.workers);
  auto work_on = [&](std::uint64_t index) {
    TrialDetail* detail = index < captured ? &result.details[index] : nullptr;
    result.trials[index] = run_trial(scenario, index, detail);
  };

  if (workers == 1 || trials == 1) {
    for (std::uint64_t i = 0; i < trials; ++i) work_on(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      try {
        for (std::uint64_t i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) {
          work_on(i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (const TrialRecord& trial : result.trials) {
    result.total_resamples += static_cast<std::uint64_t>(trial.resample_count);
  }
  for (const EvalConfiguration c : kAllConfigurations) {
    std::vector<double> samples;
    samples.reserve(trials);
    for (const TrialRecord& trial : result.trials) samples.push_back(trial.throughput(c));
    const FairnessReport report = fairness_report(samples);
    ConfigurationStats& stats = result.configurations[static_cast<std::size_t>(c)];
    stats.jain = report.jain;
    stats.mean_throughput_bps = report.mean_throughput_bps;
    std::sort(samples.begin(), samples.end());
    stats.sorted_throughput_bps = std::move(samples);
  }
  return result;
}

struct SweepRow {
  double density_per_km2 = 0.0;
  Policy policy = Policy::Baseline;
  double jain = 0.0;
  double mean_throughput_bps = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<CampaignResult> campaigns;  // one per density, in input order
};

/// One campaign per gNB density, all under the same master seed. Rows carry
/// the interference-aware (SINR) fairness and mean throughput per policy,
/// baseline before dynamic, in density order.
inline SweepResult density_sweep(const ValidatedScenario& scenario,
                                 std::span<const double> densities,
                                 const CampaignOptions& options = {}) {
  if (densities.empty()) {
    throw SimError(ErrorCode::BadDensityList, "density list must not be empty");
  }
  for (const double d : densities) {
    if (!(d > 0.0)) {
      throw SimError(ErrorCode::BadDensityList,
                     "densities must be > 0, got " + std::to_string(d));
    }
  }
  SweepResult sweep;
  sweep.rows.reserve(densities.size() * 2);
  sweep.campaigns.reserve(densities.size());
  for (const double density : densities) {
    ScenarioConfig cfg = scenario.config();
    cfg.gnb_density_per_km2 = density;
    const ValidatedScenario point = validate_config(cfg, scenario.channel());
    CampaignResult campaign = run_campaign(point, options);
    const ConfigurationStats& base = campaign.stats(EvalConfiguration::kBaselineSinr);
    const ConfigurationStats& dyn = campaign.stats(EvalConfiguration::kDynamicSinr);
    sweep.rows.push_back(SweepRow{density, Policy::Baseline, base.jain, base.mean_throughput_bps});
    sweep.rows.push_back(SweepRow{density, Policy::Dynamic, dyn.jain, dyn.mean_throughput_bps});
    sweep.campaigns.push_back(std::move(campaign));
  }
  return sweep;
}

}  // namespace mmshare
