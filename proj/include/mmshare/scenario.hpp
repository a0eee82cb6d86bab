#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmshare/channel.hpp"
#include "mmshare/errors.hpp"

namespace mmshare {

struct ArrayShape {
  int rows = 1;
  int cols = 1;

  bool operator==(const ArrayShape&) const = default;
};

/// Every physical and experimental knob of a campaign. Defaults describe the
/// reference scenario: five operators sharing 1 GHz cut into 200 MHz chunks,
/// dense-urban densities, 8x8 / 4x4 half-wavelength planar arrays.
///
/// The carrier frequency is bookkeeping only: element spacing is expressed in
/// wavelengths, and the path-loss constants are owned by ChannelParams rather
/// than recomputed from frequency.
struct ScenarioConfig {
  int num_operators = 5;
  double total_bandwidth_hz = 1.0e9;
  double chunk_bandwidth_hz = 2.0e8;
  double gnb_density_per_km2 = 75.0;
  double ue_density_per_km2 = 100.0;
  double area_side_m = 1000.0;
  double carrier_frequency_hz = 2.7e10;
  double tx_power_dbm = 30.0;
  double noise_psd_dbm_hz = -167.0;  // -174 dBm/Hz thermal + 7 dB noise figure
  ArrayShape gnb_array{8, 8};
  ArrayShape ue_array{4, 4};
  double gnb_height_m = 10.0;
  double ue_height_m = 1.5;
  double allocation_floor_fraction = 0.0;
  std::uint64_t num_trials = 10000;
  std::uint64_t master_seed = 1;
  bool ue_isotropic_elements = false;

  bool operator==(const ScenarioConfig&) const = default;
};

/// A configuration that passed validation, frozen together with the channel
/// constants it will run under. Immutable, so trial workers can share it.
class ValidatedScenario {
 public:
  const ScenarioConfig& config() const noexcept { return config_; }
  const ChannelParams& channel() const noexcept { return channel_; }

  double area_km2() const {
    const double side_km = config_.area_side_m / 1000.0;
    return side_km * side_km;
  }

 private:
  friend ValidatedScenario validate_config(const ScenarioConfig&, const ChannelParams&);

  ValidatedScenario(ScenarioConfig cfg, ChannelParams chan)
      : config_(cfg), channel_(chan) {}

  ScenarioConfig config_;
  ChannelParams channel_;
};

/// Checks every invariant and reports all violations at once. Validation does
/// not alter the config, so it is idempotent.
inline ValidatedScenario validate_config(const ScenarioConfig& cfg,
                                         const ChannelParams& channel = ChannelParams{}) {
  std::vector<ConfigViolation> violations;
  auto require_positive = [&](double value, const char* name) {
    if (!(value > 0.0)) {
      violations.push_back({ErrorCode::NonPositiveParameter,
                            std::string(name) + " must be > 0, got " + std::to_string(value)});
    }
  };

  if (cfg.num_operators < 1) {
    violations.push_back({ErrorCode::NonPositiveParameter,
                          "num_operators must be >= 1, got " + std::to_string(cfg.num_operators)});
  }
  require_positive(cfg.total_bandwidth_hz, "total_bandwidth_hz");
  require_positive(cfg.chunk_bandwidth_hz, "chunk_bandwidth_hz");
  require_positive(cfg.gnb_density_per_km2, "gnb_density_per_km2");
  require_positive(cfg.ue_density_per_km2, "ue_density_per_km2");
  require_positive(cfg.area_side_m, "area_side_m");
  require_positive(cfg.carrier_frequency_hz, "carrier_frequency_hz");
  if (cfg.gnb_height_m < 0.0 || cfg.ue_height_m < 0.0) {
    violations.push_back({ErrorCode::NonPositiveParameter, "node heights must be >= 0"});
  }
  if (cfg.num_trials < 1) {
    violations.push_back({ErrorCode::NonPositiveParameter, "num_trials must be >= 1"});
  }
  if (cfg.num_operators >= 1 && cfg.total_bandwidth_hz > 0.0 && cfg.chunk_bandwidth_hz > 0.0 &&
      cfg.chunk_bandwidth_hz * cfg.num_operators > cfg.total_bandwidth_hz) {
    violations.push_back(
        {ErrorCode::ChunkOverflow,
         std::to_string(cfg.num_operators) + " chunks of " +
             std::to_string(cfg.chunk_bandwidth_hz) + " Hz exceed total_bandwidth_hz " +
             std::to_string(cfg.total_bandwidth_hz)});
  }
  if (cfg.allocation_floor_fraction < 0.0) {
    violations.push_back(
        {ErrorCode::NonPositiveParameter, "allocation_floor_fraction must be >= 0"});
  } else if (cfg.allocation_floor_fraction * cfg.num_operators > 1.0) {
    violations.push_back({ErrorCode::FloorTooLarge,
                          "allocation_floor_fraction * num_operators exceeds 1 (" +
                              std::to_string(cfg.allocation_floor_fraction * cfg.num_operators) +
                              ")"});
  }
  auto check_array = [&](const ArrayShape& shape, const char* name) {
    if (shape.rows < 1 || shape.cols < 1) {
      violations.push_back({ErrorCode::BadArrayShape,
                            std::string(name) + " must be at least 1x1, got " +
                                std::to_string(shape.rows) + "x" + std::to_string(shape.cols)});
    }
  };
  check_array(cfg.gnb_array, "gnb_array");
  check_array(cfg.ue_array, "ue_array");

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return ValidatedScenario(cfg, channel);
}

namespace detail {

inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "num_operators",      "total_bandwidth_hz",
      "chunk_bandwidth_hz", "gnb_density_per_km2",
      "ue_density_per_km2", "area_side_m",
      "carrier_frequency_hz", "tx_power_dbm",
      "noise_psd_dbm_hz",   "gnb_array",
      "ue_array",           "gnb_height_m",
      "ue_height_m",        "allocation_floor_fraction",
      "num_trials",         "master_seed",
      "ue_isotropic_elements",
  };
  return keys;
}

inline ArrayShape array_shape_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw SimError(ErrorCode::BadConfigValue, name + " must be a [rows, cols] integer pair");
  }
  return ArrayShape{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace detail

/// Parses a config object. Absent keys take the documented defaults; unknown
/// keys are rejected so typos cannot silently fall back to a default.
inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SimError(ErrorCode::BadConfigValue, "config root must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (!detail::known_config_keys().contains(item.key())) {
      throw SimError(ErrorCode::UnknownConfigKey, "unknown config key \"" + item.key() + "\"");
    }
  }
  ScenarioConfig cfg;
  try {
    cfg.num_operators = j.value("num_operators", cfg.num_operators);
    cfg.total_bandwidth_hz = j.value("total_bandwidth_hz", cfg.total_bandwidth_hz);
    cfg.chunk_bandwidth_hz = j.value("chunk_bandwidth_hz", cfg.chunk_bandwidth_hz);
    cfg.gnb_density_per_km2 = j.value("gnb_density_per_km2", cfg.gnb_density_per_km2);
    cfg.ue_density_per_km2 = j.value("ue_density_per_km2", cfg.ue_density_per_km2);
    cfg.area_side_m = j.value("area_side_m", cfg.area_side_m);
    cfg.carrier_frequency_hz = j.value("carrier_frequency_hz", cfg.carrier_frequency_hz);
    cfg.tx_power_dbm = j.value("tx_power_dbm", cfg.tx_power_dbm);
    cfg.noise_psd_dbm_hz = j.value("noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
    if (j.contains("gnb_array")) cfg.gnb_array = detail::array_shape_from_json(j["gnb_array"], "gnb_array");
    if (j.contains("ue_array")) cfg.ue_array = detail::array_shape_from_json(j["ue_array"], "ue_array");
    cfg.gnb_height_m = j.value("gnb_height_m", cfg.gnb_height_m);
    cfg.ue_height_m = j.value("ue_height_m", cfg.ue_height_m);
    cfg.allocation_floor_fraction = j.value("allocation_floor_fraction", cfg.allocation_floor_fraction);
    cfg.num_trials = j.value("num_trials", cfg.num_trials);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.ue_isotropic_elements = j.value("ue_isotropic_elements", cfg.ue_isotropic_elements);
  } catch (const nlohmann::json::exception& e) {
    throw SimError(ErrorCode::BadConfigValue, std::string("config: ") + e.what());
  }
  return cfg;
}

inline nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["num_operators"] = cfg.num_operators;
  j["total_bandwidth_hz"] = cfg.total_bandwidth_hz;
  j["chunk_bandwidth_hz"] = cfg.chunk_bandwidth_hz;
  j["gnb_density_per_km2"] = cfg.gnb_density_per_km2;
  j["ue_density_per_km2"] = cfg.ue_density_per_km2;
  j["area_side_m"] = cfg.area_side_m;
  j["carrier_frequency_hz"] = cfg.carrier_frequency_hz;
  j["tx_power_dbm"] = cfg.tx_power_dbm;
  j["noise_psd_dbm_hz"] = cfg.noise_psd_dbm_hz;
  j["gnb_array"] = {cfg.gnb_array.rows, cfg.gnb_array.cols};
  j["ue_array"] = {cfg.ue_array.rows, cfg.ue_array.cols};
  j["gnb_height_m"] = cfg.gnb_height_m;
  j["ue_height_m"] = cfg.ue_height_m;
  j["allocation_floor_fraction"] = cfg.allocation_floor_fraction;
  j["num_trials"] = cfg.num_trials;
  j["master_seed"] = cfg.master_seed;
  j["ue_isotropic_elements"] = cfg.ue_isotropic_elements;
  return j;
}

inline ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SimError(ErrorCode::IoError, "cannot read config file " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SimError(ErrorCode::BadConfigValue, path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace mmshare
