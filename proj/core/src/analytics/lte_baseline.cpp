#include "capsim/analytics/lte_baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace capsim::analytics {

std::vector<LteStaResult> lte_sta_rates(const radio::Topology& topo,
                                        const radio::LinkModel& links,
                                        const LteRateMapper& mapper) {
  const auto aps = topo.aps();
  std::vector<LteStaResult> out;
  const double noise_mw = std::pow(10.0, mapper.noise_dbm / 10.0);
  for (const auto& sta : topo.stations) {
    if (sta.role != radio::Role::Sta) continue;
    double total_mw = 0.0;
    double signal_mw = 0.0;
    radio::StationId serving = sta.serving_ap;
    for (const auto ap : aps) {
      const double p_mw =
          std::pow(10.0, (mapper.tx_power_dbm + links.large_scale_gain_db(ap, sta.id)) / 10.0);
      total_mw += p_mw;
      if (p_mw > signal_mw || (ap == sta.serving_ap && p_mw == signal_mw)) {
        signal_mw = p_mw;
        serving = ap;
      }
    }
    const double planned_mw = std::pow(
        10.0, (mapper.tx_power_dbm + links.large_scale_gain_db(sta.serving_ap, sta.id)) / 10.0);
    if (planned_mw >= signal_mw) serving = sta.serving_ap;  // planned cell keeps ties
    const double sinr = signal_mw / (noise_mw + (total_mw - signal_mw));
    const double se = std::min(mapper.max_spectral_eff, mapper.attenuation * std::log2(1.0 + sinr));
    LteStaResult r;
    r.sta = sta.id;
    r.cell = sta.cell;
    r.serving_ap = serving;
    r.sinr_db = 10.0 * std::log10(sinr);
    r.rate_mbps = se * mapper.bandwidth_hz / 1e6 / std::max(1, topo.stas_per_ap);
    out.push_back(r);
  }
  return out;
}

double lte_area_capacity(const radio::Topology& topo, const radio::LinkModel& links,
                         const LteRateMapper& mapper, double reference_cell_area_m2) {
  if (!topo.wraparound || topo.world_side <= 0.0) {
    throw std::invalid_argument("lte_area_capacity: requires a grid topology");
  }
  double total = 0.0;
  for (const auto& r : lte_sta_rates(topo, links, mapper)) total += r.rate_mbps;
  return total / (topo.world_side * topo.world_side) * reference_cell_area_m2;
}

}  // namespace capsim::analytics
