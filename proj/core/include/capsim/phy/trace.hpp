#pragma once

#include <string>
#include <vector>

#include "capsim/radio/topology.hpp"
#include "capsim/sim/time.hpp"

namespace capsim::phy {

enum class PhyEvent {
  TxStart,
  TxEnd,
  SyncLock,
  S1,          // header failed, back to idle
  S2,          // false parity pass, random NAV
  S3,          // header decoded, NAV set
  PayloadOk,
  PayloadFail,
  EdBusyOn,
  EdBusyOff,
};

struct PhyTraceRow {
  sim::SimTime t;
  radio::StationId station;
  PhyEvent event;
  int tx_id = -1;
  double sinr_db = 0.0;
};

enum class MacEvent {
  DifsStart,
  BackoffDraw,
  Freeze,
  Resume,
  TxData,
  TxAck,
  AckOk,
  AckTimeout,
  Drop,
  NavSet,
};

struct MacTraceRow {
  sim::SimTime t;
  radio::StationId station;
  MacEvent event;
  int draw = -1;
  int cw = -1;
  int retry = -1;
};

struct Trace {
  bool phy_enabled = false;
  bool mac_enabled = false;
  std::vector<PhyTraceRow> phy;
  std::vector<MacTraceRow> mac;

  void phy_log(sim::SimTime t, radio::StationId s, PhyEvent e, int tx_id = -1,
               double sinr = 0.0) {
    if (phy_enabled) phy.push_back({t, s, e, tx_id, sinr});
  }
  void mac_log(sim::SimTime t, radio::StationId s, MacEvent e, int draw = -1, int cw = -1,
               int retry = -1) {
    if (mac_enabled) mac.push_back({t, s, e, draw, cw, retry});
  }
};

std::string phy_event_name(PhyEvent e);
std::string mac_event_name(MacEvent e);

}  // namespace capsim::phy
