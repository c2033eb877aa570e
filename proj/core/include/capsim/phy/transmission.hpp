#pragma once

#include <cstdint>

#include "capsim/phy/mcs.hpp"
#include "capsim/radio/topology.hpp"
#include "capsim/sim/time.hpp"

namespace capsim::phy {

enum class FrameType { Data, Ack };

/// An on-air packet. Header fields (preamble_end, header_end) are fixed
/// offsets from start: capture is evaluated at start+4us, the header SINR
/// gate at start+20us.
struct Transmission {
  int id = -1;
  radio::StationId source = -1;
  radio::StationId destination = -1;
  int source_cell = -1;
  int channel = -1;
  FrameType type = FrameType::Data;
  double tx_power_dbm = 14.0;
  Mcs mcs;
  int payload_bytes = 0;
  std::uint64_t flow_seq = 0;  // per-source frame counter; retries keep it
  int ack_for_tx_id = -1;      // Ack frames: id of the data frame acked

  sim::SimTime start;
  sim::SimTime preamble_end;  // start + 4 us
  sim::SimTime header_end;    // start + 20 us
  sim::SimTime end;

  bool on_air_at(sim::SimTime t) const { return start <= t && t < end; }
  /// Whether a CCA decision made exactly at t can already see this packet:
  /// a transmission beginning at the same instant is not yet observable.
  bool observable_at(sim::SimTime t) const { return start < t && t < end; }
};

}  // namespace capsim::phy
