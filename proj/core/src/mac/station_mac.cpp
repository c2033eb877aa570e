#include "capsim/mac/station_mac.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace capsim::mac {

using sim::EventKind;
using sim::SimTime;

StationMac::StationMac(sim::Simulator& sim, const MacParams& params, radio::StationId self,
                       RateManager& rates, std::uint64_t seed, phy::Trace& trace)
    : sim_(sim), params_(params), self_(self), rates_(rates), rng_(seed), trace_(trace),
      cw_(params.cw_min) {}

void StationMac::start_saturated(std::vector<radio::StationId> destinations) {
  if (destinations.empty()) {
    throw std::invalid_argument("StationMac::start_saturated: no destinations");
  }
  dests_ = std::move(destinations);
  rr_cursor_ = 0;
  next_frame();
}

void StationMac::force_draws(std::vector<int> draws) {
  forced_draws_.assign(draws.begin(), draws.end());
}

bool StationMac::channel_busy() const {
  return phy_busy_ || sim_.now() < nav_until_ || in_ack_tx_;
}

void StationMac::next_frame() {
  current_dest_ = dests_[rr_cursor_];
  rr_cursor_ = (rr_cursor_ + 1) % dests_.size();
  current_flow_seq_ = next_flow_seq_++;
  slots_remaining_ = -1;
  try_start();
}

void StationMac::try_start() {
  if (channel_busy()) {
    state_ = State::WaitClear;
  } else {
    begin_difs();
  }
}

void StationMac::begin_difs() {
  state_ = State::Difs;
  trace_.mac_log(sim_.now(), self_, phy::MacEvent::DifsStart, -1, cw_, retry_);
  difs_ev_ = sim_.schedule_in(sim::kDifs, EventKind::DifsExpiry, self_, [this] { on_difs_done(); });
}

int StationMac::draw_backoff() {
  if (!forced_draws_.empty()) {
    const int d = forced_draws_.front();
    forced_draws_.pop_front();
    return d;
  }
  return static_cast<int>(rng_.uniform_int(static_cast<std::uint32_t>(cw_)));
}

void StationMac::on_difs_done() {
  // May fire in WaitClear when a busy onset landed exactly on the expiry
  // tick; the DIFS itself was idle, so the completion is committed.
  if (state_ != State::Difs && state_ != State::WaitClear) return;
  if (slots_remaining_ < 0) {
    slots_remaining_ = draw_backoff();
    trace_.mac_log(sim_.now(), self_, phy::MacEvent::BackoffDraw, slots_remaining_, cw_, retry_);
  }
  if (slots_remaining_ == 0) {
    start_tx();
    return;
  }
  if (state_ == State::Difs && !channel_busy()) {
    state_ = State::Backoff;
    slot_ev_ = sim_.schedule_in(sim::kSlot, EventKind::BackoffSlot, self_, [this] { on_slot(); });
  } else {
    state_ = State::WaitClear;
  }
}

void StationMac::on_slot() {
  // A slot event that fires was committed at the previous boundary: the slot
  // it closes was idle (busy onsets cancel future slot events; an onset at
  // this very tick cannot be sensed yet).
  if (state_ != State::Backoff && state_ != State::WaitClear) return;
  slots_remaining_ -= 1;
  if (slots_remaining_ == 0) {
    start_tx();
    return;
  }
  if (state_ == State::Backoff && !channel_busy()) {
    slot_ev_ = sim_.schedule_in(sim::kSlot, EventKind::BackoffSlot, self_, [this] { on_slot(); });
  } else {
    state_ = State::WaitClear;
  }
}

void StationMac::start_tx() {
  state_ = State::Tx;
  current_mcs_ = &rates_.select(current_dest_);
  trace_.mac_log(sim_.now(), self_, phy::MacEvent::TxData, -1, cw_, retry_);
  awaiting_ack_for_ = hooks_.start_data_tx(current_dest_, *current_mcs_, current_flow_seq_);
}

void StationMac::on_own_data_tx_end() {
  state_ = State::WaitAck;
  timeout_ev_ = sim_.schedule_in(sim::kSifs + params_.ack_airtime + params_.ack_timeout_margin,
                                 EventKind::AckTimeout, self_, [this] { on_ack_timeout(); });
  reeval_busy();
}

void StationMac::on_ack_timeout() {
  if (state_ != State::WaitAck) return;
  rates_.record(current_dest_, *current_mcs_, false);
  trace_.mac_log(sim_.now(), self_, phy::MacEvent::AckTimeout, -1, cw_, retry_);
  retry_ += 1;
  if (retry_ >= params_.retry_limit) {
    trace_.mac_log(sim_.now(), self_, phy::MacEvent::Drop, -1, cw_, retry_);
    retry_ = 0;
    cw_ = params_.cw_min;
    next_frame();
    return;
  }
  cw_ = std::min(2 * cw_ + 1, params_.cw_max);
  slots_remaining_ = -1;
  try_start();
}

void StationMac::on_frame_complete(const phy::Transmission& tx, bool ok) {
  if (tx.destination != self_) return;
  if (tx.type == phy::FrameType::Data) {
    if (!ok) return;
    // ACK goes out a SIFS later regardless of the channel state.
    const radio::StationId dest = tx.source;
    const int ack_for = tx.id;
    sim_.schedule_in(sim::kSifs, EventKind::TxStart, self_,
                     [this, dest, ack_for] { begin_ack_tx(dest, ack_for); });
    return;
  }
  // ACK frame addressed to us.
  if (ok && state_ == State::WaitAck && tx.ack_for_tx_id == awaiting_ack_for_) {
    sim_.cancel(timeout_ev_);
    rates_.record(current_dest_, *current_mcs_, true);
    trace_.mac_log(sim_.now(), self_, phy::MacEvent::AckOk, -1, cw_, retry_);
    cw_ = params_.cw_min;
    retry_ = 0;
    next_frame();
  }
}

void StationMac::begin_ack_tx(radio::StationId dest, int ack_for_tx_id) {
  in_ack_tx_ = true;
  reeval_busy();
  trace_.mac_log(sim_.now(), self_, phy::MacEvent::TxAck, -1, cw_, retry_);
  hooks_.start_ack_tx(dest, ack_for_tx_id);
}

void StationMac::on_own_ack_tx_end() {
  in_ack_tx_ = false;
  reeval_busy();
}

void StationMac::on_phy_cca(bool busy) {
  phy_busy_ = busy;
  reeval_busy();
}

void StationMac::on_nav_set(SimTime until) {
  if (until <= nav_until_) return;
  nav_until_ = until;
  trace_.mac_log(sim_.now(), self_, phy::MacEvent::NavSet, -1, cw_, retry_);
  sim_.cancel(nav_ev_);
  nav_ev_ = sim_.schedule(until, EventKind::NavExpiry, self_, [this] { reeval_busy(); });
  reeval_busy();
}

void StationMac::reeval_busy() {
  const bool busy = channel_busy();
  if (busy == busy_last_) return;
  busy_last_ = busy;
  if (busy) {
    if (state_ == State::Difs) {
      if (difs_ev_.pending() && difs_ev_.fire_at() > sim_.now()) sim_.cancel(difs_ev_);
      state_ = State::WaitClear;
    } else if (state_ == State::Backoff) {
      if (slot_ev_.pending() && slot_ev_.fire_at() > sim_.now()) sim_.cancel(slot_ev_);
      state_ = State::WaitClear;
      trace_.mac_log(sim_.now(), self_, phy::MacEvent::Freeze, slots_remaining_, cw_, retry_);
    }
  } else {
    if (state_ == State::WaitClear) {
      trace_.mac_log(sim_.now(), self_, phy::MacEvent::Resume, slots_remaining_, cw_, retry_);
      begin_difs();
    }
  }
}

}  // namespace capsim::mac
