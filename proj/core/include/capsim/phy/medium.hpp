#pragma once

#include <vector>

#include "capsim/phy/transmission.hpp"
#include "capsim/radio/link_model.hpp"

namespace capsim::phy {

/// Per-channel ledger of overlapping transmissions. Entries are kept
/// individually (never power-summed) and retained for a short while past
/// their end so interval SINR can be evaluated over windows that reach back.
class Medium {
 public:
  void add(Transmission* tx) { entries_.push_back(tx); }
  void retire_before(sim::SimTime t);

  const std::vector<Transmission*>& entries() const { return entries_; }

  int on_air_count(sim::SimTime t) const;

 private:
  std::vector<Transmission*> entries_;
};

/// Received power of a single transmission at a receiver at time t.
/// Cross-channel queries are a usage error: only co-channel interference is
/// modeled.
double rx_power_dbm(const Transmission& tx, radio::StationId receiver, sim::SimTime t,
                    const radio::LinkModel& links, int receiver_channel);

/// Mean linear received power (mW) of tx at the receiver over [t0, t1],
/// counting only the sub-interval where tx is on air, divided by (t1 - t0).
/// Piecewise-exact over the fading sample-and-hold lattice.
double mean_linear_power_mw(const Transmission& tx, radio::StationId receiver, sim::SimTime t0,
                            sim::SimTime t1, const radio::LinkModel& links);

/// Interval SINR of target at the receiver: mean target power over the
/// interval vs. noise plus the time-weighted sum of every other ledger
/// entry overlapping the interval.
double sinr_db(const Transmission& target, radio::StationId receiver, sim::SimTime t0,
               sim::SimTime t1, const Medium& medium, const radio::LinkModel& links,
               double noise_dbm);

/// Aggregate in-band received power at time t (dBm), summed linearly over
/// ledger entries. The receiver's own transmissions are excluded. When
/// for_cca_decision is set, packets starting exactly at t are not counted
/// (a station committing to transmit at t cannot have sensed them).
double aggregate_power_dbm(radio::StationId receiver, sim::SimTime t, const Medium& medium,
                           const radio::LinkModel& links, bool for_cca_decision = false);

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace capsim::phy
