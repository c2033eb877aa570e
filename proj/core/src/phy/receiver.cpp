#include "capsim/phy/receiver.hpp"

#include <cmath>

namespace capsim::phy {

ReceiverProcess::ReceiverProcess(sim::Simulator& sim, Medium& medium,
                                 const radio::LinkModel& links, const PhyParams& params,
                                 radio::StationId self, std::uint64_t seed, Trace& trace)
    : sim_(sim),
      medium_(medium),
      links_(links),
      params_(params),
      self_(self),
      rng_(seed),
      trace_(trace) {}

bool ReceiverProcess::ed_cca_busy(sim::SimTime t) const {
  return aggregate_power_dbm(self_, t, medium_, links_) >= params_.ed_threshold_dbm;
}

void ReceiverProcess::on_tx_added(const Transmission& tx) {
  if (mode_ == RxMode::Idle && !eval_pending_) {
    schedule_preamble_eval(tx);
  }
  refresh_cca();
}

void ReceiverProcess::on_tx_ended(const Transmission&) { refresh_cca(); }

void ReceiverProcess::on_fading_tick() { refresh_cca(); }

void ReceiverProcess::schedule_preamble_eval(const Transmission& trigger) {
  eval_pending_ = true;
  const sim::SimTime w0 = trigger.start;
  const sim::SimTime w1 = trigger.preamble_end;
  sim_.schedule(w1, sim::EventKind::PreambleEnd, self_,
                [this, w0, w1] { evaluate_preamble(w0, w1); });
}

void ReceiverProcess::evaluate_preamble(sim::SimTime window_start, sim::SimTime window_end) {
  eval_pending_ = false;
  if (mode_ != RxMode::Idle) return;

  // Sync candidates are packets whose preamble started inside the window; a
  // packet already past its preamble cannot be acquired mid-flight.
  const Transmission* best = nullptr;
  double best_mw = 0.0;
  for (const auto* tx : medium_.entries()) {
    if (tx->source == self_) continue;
    if (tx->end <= window_end) continue;
    if (tx->start < window_start || tx->start >= window_end) continue;
    const double mw = mean_linear_power_mw(*tx, self_, window_start, window_end, links_);
    if (mw_to_dbm(std::max(mw, 1e-300)) < params_.detection_floor_dbm) continue;
    if (!best || mw > best_mw + 1e-18 ||
        (std::abs(mw - best_mw) <= 1e-18 && tx->id < best->id)) {
      best = tx;
      best_mw = mw;
    }
  }
  if (!best) {
    // No lock. A packet whose preamble is still running (it started late in
    // the window, or right at its edge) gets its own evaluation.
    const Transmission* next_trigger = nullptr;
    for (const auto* tx : medium_.entries()) {
      if (tx->source == self_) continue;
      if (tx->end <= window_end) continue;
      if (tx->start <= window_start || tx->preamble_end <= window_end) continue;
      if (!next_trigger || tx->preamble_end < next_trigger->preamble_end ||
          (tx->preamble_end == next_trigger->preamble_end && tx->id < next_trigger->id)) {
        next_trigger = tx;
      }
    }
    if (next_trigger) schedule_preamble_eval(*next_trigger);
    return;
  }

  mode_ = RxMode::Syncing;
  locked_ = best;
  trace_.phy_log(sim_.now(), self_, PhyEvent::SyncLock, best->id,
                 mw_to_dbm(best_mw));
  header_ev_ = sim_.schedule(best->header_end, sim::EventKind::HeaderEnd, self_,
                             [this] { evaluate_header(); });
  refresh_cca();
}

void ReceiverProcess::evaluate_header() {
  if (mode_ != RxMode::Syncing || !locked_) return;
  const Transmission& tx = *locked_;
  const double sinr =
      sinr_db(tx, self_, tx.start, tx.header_end, medium_, links_, params_.noise_dbm);

  if (sinr >= params_.header_gate_db) {
    // S3: the MAC is informed; NAV covers the payload plus SIFS and ACK.
    sim::SimTime nav_until = tx.end;
    if (tx.type == FrameType::Data) nav_until += sim::kSifs + params_.ack_airtime;
    trace_.phy_log(sim_.now(), self_, PhyEvent::S3, tx.id, sinr);
    mode_ = RxMode::Decoding;
    finish_ev_ = sim_.schedule(tx.end, sim::EventKind::TxEnd, self_, [this] { finish_decode(); });
    if (cb_.on_nav_set) cb_.on_nav_set(nav_until);
  } else if (rng_.uniform() < params_.p_falsepass) {
    // S2: a wrong packet passed the parity check; NAV takes a random value.
    const auto span = static_cast<std::uint64_t>(params_.max_nav.ticks());
    const sim::SimTime nav_until =
        sim_.now() + sim::SimTime::ns(static_cast<std::int64_t>(rng_.uniform() * span));
    trace_.phy_log(sim_.now(), self_, PhyEvent::S2, tx.id, sinr);
    mode_ = RxMode::Idle;
    locked_ = nullptr;
    if (cb_.on_nav_set) cb_.on_nav_set(nav_until);
  } else {
    // S1: nothing decodable; back to idle (ED may still hold the channel).
    trace_.phy_log(sim_.now(), self_, PhyEvent::S1, tx.id, sinr);
    mode_ = RxMode::Idle;
    locked_ = nullptr;
  }
  refresh_cca();
}

void ReceiverProcess::finish_decode() {
  if (mode_ != RxMode::Decoding || !locked_) return;
  const Transmission& tx = *locked_;
  const double sinr =
      sinr_db(tx, self_, tx.header_end, tx.end, medium_, links_, params_.noise_dbm);
  bool ok;
  if (params_.logistic_per) {
    const double k = 2.0 * std::log(9.0) / params_.logistic_width_db;
    const double p = 1.0 / (1.0 + std::exp(-k * (sinr - tx.mcs.min_sinr_db)));
    ok = rng_.uniform() < p;
  } else {
    ok = sinr >= tx.mcs.min_sinr_db;
  }
  trace_.phy_log(sim_.now(), self_, ok ? PhyEvent::PayloadOk : PhyEvent::PayloadFail, tx.id, sinr);
  mode_ = RxMode::Idle;
  locked_ = nullptr;
  refresh_cca();
  if (cb_.on_frame_complete) cb_.on_frame_complete(tx, ok);
}

void ReceiverProcess::suspend_for_tx() {
  sim_.cancel(header_ev_);
  sim_.cancel(finish_ev_);
  locked_ = nullptr;
  mode_ = RxMode::TxSuspended;
  refresh_cca();
}

void ReceiverProcess::resume_after_tx() {
  // Packets already mid-flight have no preamble left to acquire.
  mode_ = RxMode::Idle;
  refresh_cca();
}

void ReceiverProcess::refresh_cca() {
  const bool ed = ed_cca_busy(sim_.now());
  if (ed != ed_busy_) {
    ed_busy_ = ed;
    trace_.phy_log(sim_.now(), self_, ed ? PhyEvent::EdBusyOn : PhyEvent::EdBusyOff);
  }
  const bool busy = phy_busy();
  if (busy != busy_reported_) {
    busy_reported_ = busy;
    if (cb_.on_cca_change) cb_.on_cca_change(busy);
  }
}

}  // namespace capsim::phy

namespace capsim::phy {

std::string phy_event_name(PhyEvent e) {
  switch (e) {
    case PhyEvent::TxStart: return "tx_start";
    case PhyEvent::TxEnd: return "tx_end";
    case PhyEvent::SyncLock: return "sync_lock";
    case PhyEvent::S1: return "s1";
    case PhyEvent::S2: return "s2";
    case PhyEvent::S3: return "s3";
    case PhyEvent::PayloadOk: return "payload_ok";
    case PhyEvent::PayloadFail: return "payload_fail";
    case PhyEvent::EdBusyOn: return "ed_busy_on";
    case PhyEvent::EdBusyOff: return "ed_busy_off";
  }
  return "?";
}

std::string mac_event_name(MacEvent e) {
  switch (e) {
    case MacEvent::DifsStart: return "difs_start";
    case MacEvent::BackoffDraw: return "backoff_draw";
    case MacEvent::Freeze: return "freeze";
    case MacEvent::Resume: return "resume";
    case MacEvent::TxData: return "tx_data";
    case MacEvent::TxAck: return "tx_ack";
    case MacEvent::AckOk: return "ack_ok";
    case MacEvent::AckTimeout: return "ack_timeout";
    case MacEvent::Drop: return "drop";
    case MacEvent::NavSet: return "nav_set";
  }
  return "?";
}

}  // namespace capsim::phy
