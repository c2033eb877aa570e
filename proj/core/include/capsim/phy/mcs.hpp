#pragma once

#include <array>

#include "capsim/sim/time.hpp"

namespace capsim::phy {

/// 802.11a OFDM rate with the payload decode threshold used by the sharp
/// PER model (thresholds sit on a standard OFDM sensitivity ladder offset to
/// the -94 dBm noise floor).
struct Mcs {
  int index = 0;
  int rate_mbps = 6;
  double min_sinr_db = 5.0;
};

const std::array<Mcs, 8>& mcs_table();
const Mcs& mcs_by_rate(int rate_mbps);        // throws for unknown rates
const Mcs& mcs_by_index(int index);

/// Airtime of the payload portion: ceil(bits * 1000 / rate) ns, exact in
/// integer ticks.
sim::SimTime payload_airtime(int bytes, const Mcs& mcs);

/// Preamble + PLCP header (20 us) + payload airtime.
sim::SimTime frame_airtime(int bytes, const Mcs& mcs);

}  // namespace capsim::phy
