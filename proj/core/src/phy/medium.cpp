#include "capsim/phy/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace capsim::phy {

namespace {
// Entries are only needed while an SINR window can still reach them; the
// longest window is a full frame at 6 Mbps (< 3 ms).
constexpr sim::SimTime kRetention = sim::SimTime::ms(5);
}  // namespace

void Medium::retire_before(sim::SimTime t) {
  std::erase_if(entries_, [t](const Transmission* tx) { return tx->end + kRetention < t; });
}

int Medium::on_air_count(sim::SimTime t) const {
  int n = 0;
  for (const auto* tx : entries_) {
    if (tx->on_air_at(t)) ++n;
  }
  return n;
}

double rx_power_dbm(const Transmission& tx, radio::StationId receiver, sim::SimTime t,
                    const radio::LinkModel& links, int receiver_channel) {
  if (tx.channel != receiver_channel) {
    throw std::invalid_argument("rx_power_dbm: cross-channel query");
  }
  return tx.tx_power_dbm + links.gain_db(tx.source, receiver, t);
}

double mean_linear_power_mw(const Transmission& tx, radio::StationId receiver, sim::SimTime t0,
                            sim::SimTime t1, const radio::LinkModel& links) {
  const sim::SimTime a = std::max(t0, tx.start);
  const sim::SimTime b = std::min(t1, tx.end);
  if (b <= a || t1 <= t0) return 0.0;

  static thread_local std::vector<sim::SimTime> cuts;
  cuts.clear();
  cuts.push_back(a);
  links.gain_breakpoints(tx.source, receiver, a, b, cuts);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  double energy = 0.0;  // mW * ticks
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const sim::SimTime s = cuts[i];
    const sim::SimTime e = cuts[i + 1];
    if (e <= s) continue;
    const double p = dbm_to_mw(tx.tx_power_dbm + links.gain_db(tx.source, receiver, s));
    energy += p * static_cast<double>((e - s).ticks());
  }
  return energy / static_cast<double>((t1 - t0).ticks());
}

double sinr_db(const Transmission& target, radio::StationId receiver, sim::SimTime t0,
               sim::SimTime t1, const Medium& medium, const radio::LinkModel& links,
               double noise_dbm) {
  const double signal = mean_linear_power_mw(target, receiver, t0, t1, links);
  double interference = 0.0;
  for (const auto* tx : medium.entries()) {
    if (tx == &target || tx->id == target.id) continue;
    if (tx->source == receiver) continue;
    interference += mean_linear_power_mw(*tx, receiver, t0, t1, links);
  }
  const double denom = dbm_to_mw(noise_dbm) + interference;
  return 10.0 * std::log10(std::max(signal, 1e-300) / denom);
}

double aggregate_power_dbm(radio::StationId receiver, sim::SimTime t, const Medium& medium,
                           const radio::LinkModel& links, bool for_cca_decision) {
  double sum = 0.0;
  for (const auto* tx : medium.entries()) {
    if (tx->source == receiver) continue;
    const bool present = for_cca_decision ? tx->observable_at(t) : tx->on_air_at(t);
    if (!present) continue;
    sum += dbm_to_mw(tx->tx_power_dbm + links.gain_db(tx->source, receiver, t));
  }
  if (sum <= 0.0) return -300.0;
  return mw_to_dbm(sum);
}

}  // namespace capsim::phy
