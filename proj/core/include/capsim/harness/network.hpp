#pragma once

#include <deque>
#include <map>
#include <memory>
#include <vector>

#include "capsim/analytics/metrics.hpp"
#include "capsim/harness/config.hpp"
#include "capsim/mac/station_mac.hpp"
#include "capsim/phy/medium.hpp"
#include "capsim/phy/receiver.hpp"
#include "capsim/phy/trace.hpp"
#include "capsim/sim/simulator.hpp"

namespace capsim::harness {

/// Per-channel airtime accounting (post-warmup): total busy time, time with
/// two or more concurrent packets, and the cross-cell share of it.
struct OverlapStats {
  double busy_s = 0.0;
  double overlap_s = 0.0;
  double cross_cell_overlap_s = 0.0;
  long midflight_cross_cell_starts = 0;  // starts strictly inside a foreign-cell packet

  OverlapStats& operator+=(const OverlapStats& o) {
    busy_s += o.busy_s;
    overlap_s += o.overlap_s;
    cross_cell_overlap_s += o.cross_cell_overlap_s;
    midflight_cross_cell_starts += o.midflight_cross_cell_starts;
    return *this;
  }
};

struct RunSummary {
  analytics::ThroughputReport report;
  OverlapStats overlap;  // summed over channels
  std::uint64_t events_processed = 0;
  phy::Trace trace;
};

/// Owns one simulation run end to end: builds the topology and link model,
/// wires per-station receiver and MAC machines over per-channel media, runs
/// the event loop for warmup plus the measured window, and aggregates flow
/// goodput.
class Network {
 public:
  Network(const ScenarioConfig& cfg, std::uint64_t run_seed, bool trace_phy = false,
          bool trace_mac = false);
  ~Network();

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Test hooks; must be called before run().
  mac::StationMac& mac_of(radio::StationId id) { return *macs_.at(static_cast<std::size_t>(id)); }
  radio::LinkModel& links() { return *links_; }
  const radio::Topology& topology() const { return topo_; }

  RunSummary run();

 private:
  struct ChannelAccounting {
    sim::SimTime last_change = sim::SimTime::zero();
    int on_air = 0;
    std::map<int, int> on_air_per_cell;
    OverlapStats stats;
  };

  void build_stations();
  void start_traffic();
  int begin_data_tx(radio::StationId src, radio::StationId dest, const phy::Mcs& mcs,
                    std::uint64_t flow_seq);
  void begin_ack_tx(radio::StationId src, radio::StationId dest, int ack_for_tx_id);
  int launch(phy::Transmission tx);
  void finish_tx(const phy::Transmission* tx);
  void account_channel(int channel, int delta_on_air, const phy::Transmission* added);
  void deliver(radio::StationId receiver, const phy::Transmission& tx, bool ok);
  void fading_tick();
  void rate_update_tick();

  ScenarioConfig cfg_;
  std::uint64_t seed_;
  sim::Simulator sim_;
  radio::Topology topo_;
  std::unique_ptr<radio::LinkModel> links_;
  phy::PhyParams phy_params_;
  mac::MacParams mac_params_;

  std::vector<phy::Medium> media_;  // one per channel group
  std::vector<std::vector<radio::StationId>> channel_members_;
  std::deque<phy::Transmission> tx_pool_;
  std::vector<std::unique_ptr<phy::ReceiverProcess>> receivers_;
  std::vector<std::unique_ptr<mac::StationMac>> macs_;
  std::vector<std::unique_ptr<mac::RateManager>> rate_mgrs_;
  std::vector<ChannelAccounting> accounting_;
  phy::Trace trace_;

  sim::SimTime warmup_end_;
  sim::SimTime horizon_;
  // flow key = STA id that owns the flow (uplink: source, downlink: dest)
  std::map<radio::StationId, std::int64_t> delivered_payload_bits_;
  std::map<radio::StationId, std::uint64_t> last_delivered_seq_;
  int next_tx_id_ = 0;
};

}  // namespace capsim::harness
