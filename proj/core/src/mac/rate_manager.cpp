#include "capsim/mac/rate_manager.hpp"

namespace capsim::mac {

const phy::Mcs& MinstrelRate::select(radio::StationId dest) {
  PerDest& t = table(dest);
  int idx = t.best;
  if (rng_.uniform() < probe_fraction_) {
    const int last = static_cast<int>(t.arms.size()) - 1;
    int probe = t.best + (rng_.next_u64() & 1 ? 1 : -1);
    if (probe < 0) probe = 1;
    if (probe > last) probe = last - 1;
    idx = probe;
  }
  return phy::mcs_by_index(idx);
}

void MinstrelRate::record(radio::StationId dest, const phy::Mcs& mcs, bool success) {
  Arm& arm = table(dest).arms[static_cast<std::size_t>(mcs.index)];
  arm.attempts += 1;
  arm.successes += success ? 1 : 0;
}

void MinstrelRate::update_stats() {
  for (auto& [dest, t] : tables_) {
    for (auto& arm : t.arms) {
      if (arm.attempts > 0) {
        const double p = static_cast<double>(arm.successes) / arm.attempts;
        arm.ewma_p = ewma_old_ * arm.ewma_p + (1.0 - ewma_old_) * p;
        arm.attempts = 0;
        arm.successes = 0;
      }
    }
    double best_goodput = -1.0;
    for (std::size_t i = 0; i < t.arms.size(); ++i) {
      const double g = phy::mcs_table()[i].rate_mbps * t.arms[i].ewma_p;
      if (g > best_goodput) {
        best_goodput = g;
        t.best = static_cast<int>(i);
      }
    }
  }
}

int MinstrelRate::best_index(radio::StationId dest) { return table(dest).best; }

}  // namespace capsim::mac
