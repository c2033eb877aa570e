#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "capsim/phy/mcs.hpp"
#include "capsim/radio/topology.hpp"
#include "capsim/sim/time.hpp"
#include "capsim/util/rng.hpp"

namespace capsim::mac {

/// Selects the MCS for each transmit attempt and learns from ACK outcomes.
class RateManager {
 public:
  virtual ~RateManager() = default;
  virtual const phy::Mcs& select(radio::StationId dest) = 0;
  virtual void record(radio::StationId dest, const phy::Mcs& mcs, bool success) = 0;
  /// Called on the statistics update interval (100 ms).
  virtual void update_stats() {}
};

class FixedRate final : public RateManager {
 public:
  explicit FixedRate(int rate_mbps) : mcs_(&phy::mcs_by_rate(rate_mbps)) {}
  const phy::Mcs& select(radio::StationId) override { return *mcs_; }
  void record(radio::StationId, const phy::Mcs&, bool) override {}

 private:
  const phy::Mcs* mcs_;
};

/// Minstrel-style adaptation: per-destination EWMA success probability per
/// rate, best rate = argmax rate * p, plus a probe fraction spent on a
/// neighboring rate. Arms start optimistic so the search works from above;
/// unsampled arms keep their estimate across updates, so the current best is
/// never lost to a statistics reset.
class MinstrelRate final : public RateManager {
 public:
  MinstrelRate(std::uint64_t seed, double probe_fraction = 0.10, double ewma_old_weight = 0.75)
      : rng_(seed), probe_fraction_(probe_fraction), ewma_old_(ewma_old_weight) {}

  const phy::Mcs& select(radio::StationId dest) override;
  void record(radio::StationId dest, const phy::Mcs& mcs, bool success) override;
  void update_stats() override;

  int best_index(radio::StationId dest);

 private:
  struct Arm {
    double ewma_p = 1.0;
    int attempts = 0;
    int successes = 0;
  };
  struct PerDest {
    std::vector<Arm> arms = std::vector<Arm>(phy::mcs_table().size());
    int best = static_cast<int>(phy::mcs_table().size()) - 1;
  };
  PerDest& table(radio::StationId dest) { return tables_[dest]; }

  util::Rng rng_;
  double probe_fraction_;
  double ewma_old_;
  std::unordered_map<radio::StationId, PerDest> tables_;
};

}  // namespace capsim::mac
