#pragma once

#include <functional>
#include <optional>

#include "capsim/phy/medium.hpp"
#include "capsim/phy/trace.hpp"
#include "capsim/sim/simulator.hpp"
#include "capsim/util/rng.hpp"

namespace capsim::phy {

enum class RxMode { Idle, Syncing, Decoding, TxSuspended };

enum class CollisionOutcome { S1, S2, S3 };

struct PhyParams {
  double noise_dbm = -94.0;           // -174 + 10log10(20 MHz) + 7 dB NF
  double ed_threshold_dbm = -62.0;
  double detection_floor_dbm = -93.0;  // preamble capture threshold
  double header_gate_db = 4.0;
  double p_falsepass = 0.0;            // probability S2 instead of S1
  bool logistic_per = false;           // payload: logistic instead of sharp
  double logistic_width_db = 1.0;      // 10-90% transition span
  sim::SimTime max_nav = sim::SimTime::ns(2'510'667);  // max frame at 6 Mbps
  sim::SimTime ack_airtime = sim::SimTime::ns(24'667); // 14 B at 24 Mbps
};

/// Per-station receive state machine: preamble capture at +4us, header SINR
/// gate at +20us, payload decision at packet end, with energy detection
/// tracked independently of sync state.
class ReceiverProcess {
 public:
  struct Callbacks {
    // S3 or S2: the MAC learns the channel is virtually busy until nav_until.
    std::function<void(sim::SimTime nav_until)> on_nav_set;
    // Payload decision for the locked packet (any destination).
    std::function<void(const Transmission&, bool ok)> on_frame_complete;
    // Composite PHY busy (ED or sync/decode) edge.
    std::function<void(bool busy)> on_cca_change;
  };

  ReceiverProcess(sim::Simulator& sim, Medium& medium, const radio::LinkModel& links,
                  const PhyParams& params, radio::StationId self, std::uint64_t seed,
                  Trace& trace);

  void set_callbacks(Callbacks cb) { cb_ = std::move(cb); }

  // Medium notifications (co-channel only).
  void on_tx_added(const Transmission& tx);
  void on_tx_ended(const Transmission& tx);
  void on_fading_tick();

  // Half duplex: the receiver is deaf while its own transmitter runs.
  void suspend_for_tx();
  void resume_after_tx();

  bool phy_busy() const { return ed_busy_ || mode_ == RxMode::Syncing || mode_ == RxMode::Decoding; }
  bool ed_busy() const { return ed_busy_; }
  RxMode mode() const { return mode_; }
  const Transmission* locked() const { return locked_; }

  /// Energy-detection CCA verdict from the current ledger, independent of
  /// sync state.
  bool ed_cca_busy(sim::SimTime t) const;

 private:
  void schedule_preamble_eval(const Transmission& trigger);
  void evaluate_preamble(sim::SimTime window_start, sim::SimTime window_end);
  void evaluate_header();
  void finish_decode();
  void refresh_cca();

  sim::Simulator& sim_;
  Medium& medium_;
  const radio::LinkModel& links_;
  PhyParams params_;
  radio::StationId self_;
  util::Rng rng_;
  Trace& trace_;

  Callbacks cb_;
  RxMode mode_ = RxMode::Idle;
  const Transmission* locked_ = nullptr;
  bool eval_pending_ = false;
  bool ed_busy_ = false;
  bool busy_reported_ = false;
  sim::EventHandle header_ev_;
  sim::EventHandle finish_ev_;
};

}  // namespace capsim::phy
