#pragma once

#include <vector>

#include "capsim/radio/link_model.hpp"
#include "capsim/radio/topology.hpp"

namespace capsim::analytics {

/// Attenuated-Shannon rate map: rate = min(cap, att * log2(1 + sinr)) * BW.
struct LteRateMapper {
  double bandwidth_hz = 20e6;         // single 20 MHz carrier, reuse 1
  double max_spectral_eff = 4.8;      // bps/Hz cap
  double attenuation = 0.75;
  double tx_power_dbm = 14.0;
  double noise_dbm = -94.0;
};

struct LteStaResult {
  radio::StationId sta = -1;
  int cell = -1;
  radio::StationId serving_ap = -1;  // strongest AP on the shared carrier
  double sinr_db = 0.0;
  double rate_mbps = 0.0;  // after the 1/(STAs per AP) airtime share
};

/// Downlink SINR per STA with every AP transmitting at full power on one
/// shared carrier (large-scale gains only, no fast fading), mapped to rates
/// and shared round-robin within each cell. With reuse 1 every AP is on the
/// same carrier, so each STA attaches to the strongest one (ties keep the
/// planned cell).
std::vector<LteStaResult> lte_sta_rates(const radio::Topology& topo,
                                        const radio::LinkModel& links,
                                        const LteRateMapper& mapper);

/// Aggregate LTE goodput normalized as in area_capacity (no bandwidth
/// multiplier: the LTE system gets exactly one channel).
double lte_area_capacity(const radio::Topology& topo, const radio::LinkModel& links,
                         const LteRateMapper& mapper, double reference_cell_area_m2 = 1600.0);

}  // namespace capsim::analytics
