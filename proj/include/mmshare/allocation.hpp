#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mmshare/errors.hpp"
#include "mmshare/scenario.hpp"

namespace mmshare {

enum class Policy { Baseline, Dynamic };

inline const char* policy_name(Policy p) {
  return p == Policy::Baseline ? "baseline" : "dynamic";
}

/// Per-operator bandwidth grant for one trial. Sub-bands are contiguous and
/// disjoint, laid out in operator order from the bottom of the band.
struct AllocationResult {
  Policy policy = Policy::Baseline;
  std::vector<double> bandwidth_hz;
  std::vector<double> band_start_hz;
  std::vector<std::int64_t> loads;  // inputs of the dynamic rule; empty for baseline
};

/// Exclusive licensing: every operator keeps its fixed chunk, whatever its
/// load. Any remainder of the total band stays unassigned.
inline AllocationResult baseline_allocation(const ValidatedScenario& scenario) {
  const ScenarioConfig& cfg = scenario.config();
  AllocationResult result;
  result.policy = Policy::Baseline;
  result.bandwidth_hz.assign(static_cast<std::size_t>(cfg.num_operators),
                             cfg.chunk_bandwidth_hz);
  result.band_start_hz.resize(result.bandwidth_hz.size());
  double offset = 0.0;
  for (std::size_t m = 0; m < result.bandwidth_hz.size(); ++m) {
    result.band_start_hz[m] = offset;
    offset += result.bandwidth_hz[m];
  }
  return result;
}

/// Load-proportional split of the whole band:
///
///   W_m = f_min * W_tot + (1 - M * f_min) * W_tot * L_m / sum(L)
///
/// with an equal split as the all-idle fallback. The last operator with a
/// nonzero share absorbs the floating-point residue (at most 1 Hz), so the
/// grants always add up to exactly W_tot.
inline AllocationResult dynamic_allocation(std::span<const std::int64_t> loads,
                                           double total_bandwidth_hz, double floor_fraction) {
  const std::size_t m_count = loads.size();
  if (m_count == 0) {
    throw SimError(ErrorCode::EmptyInput, "dynamic allocation needs at least one operator");
  }
  if (!(total_bandwidth_hz > 0.0)) {
    throw SimError(ErrorCode::NonPositiveParameter, "total bandwidth must be > 0");
  }
  if (floor_fraction < 0.0) {
    throw SimError(ErrorCode::NonPositiveParameter, "floor fraction must be >= 0");
  }
  if (floor_fraction * static_cast<double>(m_count) > 1.0) {
    throw SimError(ErrorCode::FloorTooLarge,
                   "floor fraction " + std::to_string(floor_fraction) + " x " +
                       std::to_string(m_count) + " operators exceeds the whole band");
  }
  std::int64_t total_load = 0;
  for (const std::int64_t load : loads) {
    if (load < 0) {
      throw SimError(ErrorCode::NonPositiveParameter, "loads must be >= 0");
    }
    total_load += load;
  }

  AllocationResult result;
  result.policy = Policy::Dynamic;
  result.loads.assign(loads.begin(), loads.end());
  result.bandwidth_hz.assign(m_count, 0.0);

  if (total_load == 0) {
    const double equal = total_bandwidth_hz / static_cast<double>(m_count);
    for (std::size_t m = 0; m < m_count; ++m) result.bandwidth_hz[m] = equal;
  } else {
    const double shared = (1.0 - static_cast<double>(m_count) * floor_fraction);
    for (std::size_t m = 0; m < m_count; ++m) {
      result.bandwidth_hz[m] =
          floor_fraction * total_bandwidth_hz +
          shared * total_bandwidth_hz * static_cast<double>(loads[m]) /
              static_cast<double>(total_load);
    }
  }

  // Pin the sum to exactly W_tot by rewriting the last nonzero-share grant.
  std::size_t absorber = m_count - 1;
  if (floor_fraction == 0.0 && total_load != 0) {
    while (absorber > 0 && loads[absorber] == 0) --absorber;
  }
  double others = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) {
    if (m != absorber) others += result.bandwidth_hz[m];
  }
  result.bandwidth_hz[absorber] = total_bandwidth_hz - others;

  result.band_start_hz.resize(m_count);
  double offset = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) {
    result.band_start_hz[m] = offset;
    offset += result.bandwidth_hz[m];
  }
  return result;
}

/// Jain index and sample mean of a set of throughputs.
struct FairnessReport {
  double jain = 0.0;
  std::size_t n = 0;
  double mean_throughput_bps = 0.0;
};

namespace detail {

/// Neumaier-compensated sum, order-sensitive by design: callers fix the
/// iteration order so aggregates are reproducible.
inline double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

}  // namespace detail

/// Jain's fairness index: (sum x)^2 / (n * sum x^2). Ranges from 1/n (one
/// user takes everything) to 1 (perfect equality); scale-invariant.
inline double jain_fairness(std::span<const double> values) {
  if (values.empty()) {
    throw SimError(ErrorCode::EmptyInput, "fairness of an empty sample is undefined");
  }
  double sum = 0.0, sum_sq = 0.0;
  double c1 = 0.0, c2 = 0.0;
  for (const double v : values) {
    if (v < 0.0) {
      throw SimError(ErrorCode::NonPositiveParameter, "throughput values must be >= 0");
    }
    double t = sum + v;
    c1 += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    const double sq = v * v;
    t = sum_sq + sq;
    c2 += std::abs(sum_sq) >= std::abs(sq) ? (sum_sq - t) + sq : (sq - t) + sum_sq;
    sum_sq = t;
  }
  sum += c1;
  sum_sq += c2;
  if (sum_sq == 0.0) {
    throw SimError(ErrorCode::AllZero, "fairness of an all-zero sample is undefined");
  }
  return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

inline FairnessReport fairness_report(std::span<const double> values) {
  FairnessReport report;
  report.n = values.size();
  report.jain = jain_fairness(values);
  report.mean_throughput_bps = detail::compensated_sum(values) / static_cast<double>(values.size());
  return report;
}

}  // namespace mmshare
