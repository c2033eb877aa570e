#include "capsim/harness/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "capsim/phy/mcs.hpp"

namespace capsim::harness {

using nlohmann::json;

std::string scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::SingleCell: return "single_cell";
    case ScenarioKind::SmallNetwork: return "small_network";
    case ScenarioKind::Grid: return "grid";
    case ScenarioKind::LteBaseline: return "lte_baseline";
    case ScenarioKind::BianchiCurve: return "bianchi_curve";
    case ScenarioKind::TimelineFig3: return "timeline_fig3";
    case ScenarioKind::TimelineFig4: return "timeline_fig4";
  }
  return "single_cell";
}

ScenarioKind scenario_from_name(const std::string& name) {
  if (name == "single_cell") return ScenarioKind::SingleCell;
  if (name == "small_network") return ScenarioKind::SmallNetwork;
  if (name == "grid") return ScenarioKind::Grid;
  if (name == "lte_baseline") return ScenarioKind::LteBaseline;
  if (name == "bianchi_curve") return ScenarioKind::BianchiCurve;
  if (name == "timeline_fig3") return ScenarioKind::TimelineFig3;
  if (name == "timeline_fig4") return ScenarioKind::TimelineFig4;
  throw ConfigError("unknown scenario kind: " + name);
}

std::string ScenarioConfig::to_json(int indent) const {
  json j;
  j["scenario"] = scenario_name(scenario);
  j["seed"] = seed;
  j["replications"] = replications;
  j["duration_s"] = duration_s;
  j["warmup_s"] = warmup_s;

  json r;
  r["tx_power_dbm"] = radio.tx_power_dbm;
  r["noise_dbm"] = radio.noise_dbm;
  r["ed_threshold_dbm"] = radio.ed_threshold_dbm;
  r["detection_floor_dbm"] = radio.detection_floor_dbm;
  r["header_gate_db"] = radio.header_gate_db;
  r["wavelength_m"] = radio.wavelength_m;
  r["absorption_per_m"] = radio.absorption_per_m;
  r["min_distance_m"] = radio.min_distance_m;
  r["shadowing_sigma_db"] = radio.shadowing_sigma_db;
  r["fading"] = radio.fading;
  r["doppler_hz"] = radio.doppler_hz;
  j["radio"] = r;

  json m;
  m["payload_bytes"] = mac.payload_bytes;
  m["header_bytes"] = mac.header_bytes;
  m["cw_min"] = mac.cw_min;
  m["cw_max"] = mac.cw_max;
  m["retry_limit"] = mac.retry_limit;
  m["rate_mode"] = mac.rate_mode == RateMode::Fixed ? "fixed" : "minstrel";
  m["fixed_rate_mbps"] = mac.fixed_rate_mbps;
  m["rate_update_interval_s"] = mac.rate_update_interval_s;
  m["traffic"] = mac.traffic == TrafficDirection::Uplink ? "uplink" : "downlink";
  j["mac"] = m;

  json t;
  t["n_aps"] = topology.n_aps;
  t["stas_per_ap"] = topology.stas_per_ap;
  t["intercell_pl_db"] = topology.intercell_pl_db;
  t["intracell_pl_db"] = topology.intracell_pl_db;
  t["grid_side"] = topology.grid_side;
  t["isd_m"] = topology.isd_m;
  t["reuse"] = topology.reuse;
  t["sta_placement"] = topology.sta_placement;
  t["disk_radius_fraction"] = topology.disk_radius_fraction;
  t["disk_radius_m"] = topology.disk_radius_m;
  j["topology"] = t;

  json p;
  p["p_falsepass"] = phy.p_falsepass;
  p["logistic_per"] = phy.logistic_per;
  p["logistic_width_db"] = phy.logistic_width_db;
  j["phy"] = p;

  json l;
  l["max_spectral_eff"] = lte.max_spectral_eff;
  l["attenuation"] = lte.attenuation;
  j["lte"] = l;

  return j.dump(indent);
}

namespace {
template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}
}  // namespace

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig c;
  if (j.contains("scenario")) c.scenario = scenario_from_name(j.at("scenario").get<std::string>());
  read(j, "seed", c.seed);
  read(j, "replications", c.replications);
  read(j, "duration_s", c.duration_s);
  read(j, "warmup_s", c.warmup_s);

  if (j.contains("radio")) {
    const auto& r = j.at("radio");
    read(r, "tx_power_dbm", c.radio.tx_power_dbm);
    read(r, "noise_dbm", c.radio.noise_dbm);
    read(r, "ed_threshold_dbm", c.radio.ed_threshold_dbm);
    read(r, "detection_floor_dbm", c.radio.detection_floor_dbm);
    read(r, "header_gate_db", c.radio.header_gate_db);
    read(r, "wavelength_m", c.radio.wavelength_m);
    read(r, "absorption_per_m", c.radio.absorption_per_m);
    read(r, "min_distance_m", c.radio.min_distance_m);
    read(r, "shadowing_sigma_db", c.radio.shadowing_sigma_db);
    read(r, "fading", c.radio.fading);
    read(r, "doppler_hz", c.radio.doppler_hz);
  }
  if (j.contains("mac")) {
    const auto& m = j.at("mac");
    read(m, "payload_bytes", c.mac.payload_bytes);
    read(m, "header_bytes", c.mac.header_bytes);
    read(m, "cw_min", c.mac.cw_min);
    read(m, "cw_max", c.mac.cw_max);
    read(m, "retry_limit", c.mac.retry_limit);
    if (m.contains("rate_mode")) {
      const auto s = m.at("rate_mode").get<std::string>();
      if (s == "fixed") c.mac.rate_mode = RateMode::Fixed;
      else if (s == "minstrel") c.mac.rate_mode = RateMode::Minstrel;
      else throw ConfigError("mac.rate_mode must be 'fixed' or 'minstrel'");
    }
    read(m, "fixed_rate_mbps", c.mac.fixed_rate_mbps);
    read(m, "rate_update_interval_s", c.mac.rate_update_interval_s);
    if (m.contains("traffic")) {
      const auto s = m.at("traffic").get<std::string>();
      if (s == "uplink") c.mac.traffic = TrafficDirection::Uplink;
      else if (s == "downlink") c.mac.traffic = TrafficDirection::Downlink;
      else throw ConfigError("mac.traffic must be 'uplink' or 'downlink'");
    }
  }
  if (j.contains("topology")) {
    const auto& t = j.at("topology");
    read(t, "n_aps", c.topology.n_aps);
    read(t, "stas_per_ap", c.topology.stas_per_ap);
    read(t, "intercell_pl_db", c.topology.intercell_pl_db);
    read(t, "intracell_pl_db", c.topology.intracell_pl_db);
    read(t, "grid_side", c.topology.grid_side);
    read(t, "isd_m", c.topology.isd_m);
    read(t, "reuse", c.topology.reuse);
    read(t, "sta_placement", c.topology.sta_placement);
    read(t, "disk_radius_fraction", c.topology.disk_radius_fraction);
    read(t, "disk_radius_m", c.topology.disk_radius_m);
  }
  if (j.contains("phy")) {
    const auto& p = j.at("phy");
    read(p, "p_falsepass", c.phy.p_falsepass);
    read(p, "logistic_per", c.phy.logistic_per);
    read(p, "logistic_width_db", c.phy.logistic_width_db);
  }
  if (j.contains("lte")) {
    const auto& l = j.at("lte");
    read(l, "max_spectral_eff", c.lte.max_spectral_eff);
    read(l, "attenuation", c.lte.attenuation);
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void ScenarioConfig::validate() const {
  if (duration_s <= 0.0) throw ConfigError("duration_s must be positive");
  if (warmup_s < 0.0) throw ConfigError("warmup_s must be non-negative");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (mac.payload_bytes <= 0) throw ConfigError("mac.payload_bytes must be positive");
  if (mac.cw_min < 0 || mac.cw_max < mac.cw_min) throw ConfigError("bad contention window bounds");
  if (mac.retry_limit < 1) throw ConfigError("mac.retry_limit must be >= 1");
  if (mac.rate_mode == RateMode::Fixed) phy::mcs_by_rate(mac.fixed_rate_mbps);
  if (topology.stas_per_ap < 1) throw ConfigError("topology.stas_per_ap must be >= 1");
  if (scenario == ScenarioKind::SmallNetwork || scenario == ScenarioKind::SingleCell) {
    const int n = scenario == ScenarioKind::SingleCell ? 1 : topology.n_aps;
    if (n < 1 || n > 4) throw ConfigError("topology.n_aps must be in 1..4 for small networks");
  }
  if (scenario == ScenarioKind::Grid || scenario == ScenarioKind::LteBaseline) {
    if (topology.reuse != 1 && topology.reuse != 4 && topology.reuse != 12)
      throw ConfigError("topology.reuse must be 1, 4 or 12");
    const int side = topology.grid_side;
    if ((topology.reuse == 4 && side % 2 != 0) || (topology.reuse == 12 && side % 6 != 0))
      throw ConfigError("reuse pattern does not tile the configured grid");
    if (topology.sta_placement != "disk" && topology.sta_placement != "cell_uniform")
      throw ConfigError("topology.sta_placement must be 'disk' or 'cell_uniform'");
  }
  if (radio.wavelength_m <= 0.0) throw ConfigError("radio.wavelength_m must be positive");
  if (radio.absorption_per_m < 0.0) throw ConfigError("radio.absorption_per_m must be >= 0");
  if (phy.p_falsepass < 0.0 || phy.p_falsepass > 1.0)
    throw ConfigError("phy.p_falsepass must be in [0,1]");
}

}  // namespace capsim::harness
