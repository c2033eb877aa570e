#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "capsim/radio/jakes.hpp"
#include "capsim/radio/pathloss.hpp"
#include "capsim/radio/topology.hpp"
#include "capsim/sim/time.hpp"

namespace capsim::radio {

struct FadingParams {
  bool enabled = true;
  double doppler_hz = 10.0;             // 2 kph at 5 GHz
  int n_paths = 64;
  sim::SimTime sample_interval = sim::SimTime::ms(1);  // sample-and-hold grain
};

struct RadioParams {
  PathlossModel pathloss;
  double shadowing_sigma_db = 4.0;  // lognormal, grid scenarios only
  FadingParams fading;
};

/// Pathloss + shadowing + time-varying fading gain between every station
/// pair. Large-scale terms are symmetric and fixed for a run; fading is
/// sampled-and-held per sample_interval of simulated time.
class LinkModel {
 public:
  LinkModel(const Topology& topo, const RadioParams& params, std::uint64_t seed);

  /// Pathloss + shadowing in dB; reciprocal by construction.
  double large_scale_gain_db(StationId a, StationId b) const;

  /// Full link gain including the fading term at time t.
  double gain_db(StationId a, StationId b, sim::SimTime t) const;

  /// Scripted-fade hook for the deterministic timeline scenarios: adds
  /// extra_db to the link gain while t is in [from, to).
  void add_override(StationId a, StationId b, sim::SimTime from, sim::SimTime to, double extra_db);

  /// Appends every instant in (from, to) where gain_db(a, b, .) may step:
  /// fading sample boundaries and override edges. Gain is constant between
  /// consecutive boundaries.
  void gain_breakpoints(StationId a, StationId b, sim::SimTime from, sim::SimTime to,
                        std::vector<sim::SimTime>& out) const;

  const Topology& topology() const { return *topo_; }
  const RadioParams& params() const { return params_; }
  bool fading_enabled() const { return params_.fading.enabled; }

 private:
  struct Override {
    StationId a, b;
    sim::SimTime from, to;
    double extra_db;
  };
  struct FadingSlot {
    std::unique_ptr<JakesFader> fader;
    std::int64_t bucket = -1;
    double power_db = 0.0;
  };

  std::uint64_t pair_key(StationId a, StationId b) const;
  double fading_db(StationId a, StationId b, sim::SimTime t) const;

  const Topology* topo_;
  RadioParams params_;
  std::uint64_t seed_;
  std::size_t n_ = 0;
  std::vector<double> large_scale_db_;  // n x n, symmetric
  mutable std::unordered_map<std::uint64_t, FadingSlot> faders_;
  std::vector<Override> overrides_;
};

}  // namespace capsim::radio
