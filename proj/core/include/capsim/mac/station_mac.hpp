#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "capsim/mac/rate_manager.hpp"
#include "capsim/phy/trace.hpp"
#include "capsim/phy/transmission.hpp"
#include "capsim/sim/simulator.hpp"
#include "capsim/util/rng.hpp"

namespace capsim::mac {

struct MacParams {
  int cw_min = 31;
  int cw_max = 1023;
  int retry_limit = 7;   // frame dropped after this many consecutive failures
  int payload_bytes = 1800;
  int header_bytes = 68;  // MAC/IP/UDP overhead, accounted as payload airtime
  sim::SimTime ack_airtime = sim::SimTime::ns(24'667);
  sim::SimTime ack_timeout_margin = sim::SimTime::us(25);
};

/// Full DCF per station: DIFS wait, slotted random backoff with CW doubling
/// and freeze/resume, NAV-based virtual carrier sense on top of the PHY
/// verdict, ACK exchange with retries, and round-robin destination selection
/// for APs.
class StationMac {
 public:
  enum class State { Off, WaitClear, Difs, Backoff, Tx, WaitAck };

  struct Hooks {
    // Returns the id of the created transmission.
    std::function<int(radio::StationId dest, const phy::Mcs&, std::uint64_t flow_seq)>
        start_data_tx;
    std::function<void(radio::StationId dest, int ack_for_tx_id)> start_ack_tx;
  };

  StationMac(sim::Simulator& sim, const MacParams& params, radio::StationId self,
             RateManager& rates, std::uint64_t seed, phy::Trace& trace);

  void set_hooks(Hooks h) { hooks_ = std::move(h); }

  /// Full-buffer traffic toward the given destinations, cycled round-robin.
  void start_saturated(std::vector<radio::StationId> destinations);

  /// Test hook: the next backoff draws come from this list instead of the RNG.
  void force_draws(std::vector<int> draws);

  // Notifications from the PHY / network.
  void on_phy_cca(bool busy);
  void on_nav_set(sim::SimTime until);
  void on_frame_complete(const phy::Transmission& tx, bool ok);
  void on_own_data_tx_end();
  void on_own_ack_tx_end();

  State state() const { return state_; }
  int cw() const { return cw_; }
  int retry_count() const { return retry_; }
  sim::SimTime nav_until() const { return nav_until_; }
  bool channel_busy() const;

 private:
  void next_frame();
  void try_start();
  void begin_difs();
  void on_difs_done();
  void on_slot();
  void start_tx();
  void on_ack_timeout();
  void begin_ack_tx(radio::StationId dest, int ack_for_tx_id);
  void reeval_busy();
  int draw_backoff();

  sim::Simulator& sim_;
  MacParams params_;
  radio::StationId self_;
  RateManager& rates_;
  util::Rng rng_;
  phy::Trace& trace_;
  Hooks hooks_;

  State state_ = State::Off;
  int cw_;
  int slots_remaining_ = -1;  // -1: fresh draw needed after DIFS
  int retry_ = 0;
  sim::SimTime nav_until_ = sim::SimTime::zero();
  bool phy_busy_ = false;
  bool in_ack_tx_ = false;
  bool busy_last_ = false;

  std::vector<radio::StationId> dests_;
  std::size_t rr_cursor_ = 0;
  radio::StationId current_dest_ = -1;
  const phy::Mcs* current_mcs_ = nullptr;
  std::uint64_t next_flow_seq_ = 0;
  std::uint64_t current_flow_seq_ = 0;
  int awaiting_ack_for_ = -1;

  std::deque<int> forced_draws_;

  sim::EventHandle difs_ev_;
  sim::EventHandle slot_ev_;
  sim::EventHandle timeout_ev_;
  sim::EventHandle nav_ev_;
};

}  // namespace capsim::mac
