#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "capsim/radio/topology.hpp"

namespace capsim::harness {

enum class ScenarioKind {
  SingleCell,
  SmallNetwork,
  Grid,
  LteBaseline,
  BianchiCurve,
  TimelineFig3,
  TimelineFig4,
};

enum class TrafficDirection { Uplink, Downlink };
enum class RateMode { Fixed, Minstrel };

/// Full experiment description. Defaults reproduce the reference parameter
/// set: +14 dBm fixed transmit power, -94 dBm noise floor, -62 dBm energy
/// detection, -93 dBm capture threshold, 4 dB header gate, 1800 B payload
/// with 68 B header overhead, Rayleigh fading with 10 Hz Jakes Doppler,
/// Minstrel rate adaptation on a 100 ms interval, round-robin scheduling,
/// saturated UDP traffic.
struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::SingleCell;
  std::uint64_t seed = 1;
  int replications = 1;
  double duration_s = 20.0;
  double warmup_s = 2.0;

  struct Radio {
    double tx_power_dbm = 14.0;
    double noise_dbm = -94.0;
    double ed_threshold_dbm = -62.0;
    double detection_floor_dbm = -93.0;
    double header_gate_db = 4.0;
    double wavelength_m = 0.06;
    double absorption_per_m = 0.24;
    double min_distance_m = 0.5;
    double shadowing_sigma_db = 4.0;
    bool fading = true;
    double doppler_hz = 10.0;
  } radio;

  struct Mac {
    int payload_bytes = 1800;
    int header_bytes = 68;
    int cw_min = 31;
    int cw_max = 1023;
    int retry_limit = 7;
    RateMode rate_mode = RateMode::Minstrel;
    int fixed_rate_mbps = 24;
    double rate_update_interval_s = 0.1;
    TrafficDirection traffic = TrafficDirection::Downlink;
  } mac;

  struct TopologyCfg {
    int n_aps = 1;
    int stas_per_ap = 4;
    double intercell_pl_db = 86.0;
    double intracell_pl_db = 64.0;
    int grid_side = 6;
    double isd_m = 40.0;
    int reuse = 12;
    std::string sta_placement = "disk";  // "disk" | "cell_uniform"
    double disk_radius_fraction = 0.2;  // used when disk_radius_m == 0
    double disk_radius_m = 8.0;         // > 0: absolute scatter radius
  } topology;

  struct Phy {
    double p_falsepass = 0.0;
    bool logistic_per = false;
    double logistic_width_db = 1.0;
  } phy;

  struct Lte {
    double max_spectral_eff = 4.8;
    double attenuation = 0.75;
  } lte;

  std::string to_json(int indent = 2) const;
  static ScenarioConfig from_json(const std::string& text);
  static ScenarioConfig from_file(const std::string& path);

  /// Throws ConfigError with a descriptive message on invalid fields.
  void validate() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string scenario_name(ScenarioKind k);
ScenarioKind scenario_from_name(const std::string& name);

}  // namespace capsim::harness
