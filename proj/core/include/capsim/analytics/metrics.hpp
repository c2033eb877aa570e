#pragma once

#include <utility>
#include <vector>

#include "capsim/radio/topology.hpp"

namespace capsim::analytics {

struct FlowResult {
  radio::StationId sta = -1;
  int cell = -1;
  double goodput_mbps = 0.0;  // delivered payload bits / measured duration
};

struct ThroughputReport {
  std::vector<FlowResult> per_sta;
  double duration_s = 0.0;
  // Bandwidth scale: a frequency plan with k channels per group carries k
  // identical channels per AP; the simulation runs one of them.
  int channels_per_group = 1;

  double total_mbps() const;
  std::vector<std::pair<int, double>> per_cell_mbps() const;
};

/// Empirical CDF: (goodput, cumulative fraction), sorted ascending.
std::vector<std::pair<double, double>> throughput_cdf(const ThroughputReport& report);

/// Nearest-rank percentile of per-STA goodput (p in (0, 100]).
double percentile(std::vector<double> values, double p);

/// 90th / 10th percentile goodput. Requires >= 10 STAs.
double fairness_ratio(const ThroughputReport& report);

/// Total network goodput (including the channels-per-group bandwidth scale)
/// normalized by world area and scaled to the reference cell area.
/// Requires a wraparound grid topology.
double area_capacity(const ThroughputReport& report, const radio::Topology& topo,
                     double reference_cell_area_m2 = 1600.0);

/// E = (c1/c0) / (d1/d0): fractional area-capacity change per fractional
/// density change.
double efficiency(double c0, double d0, double c1, double d1);

struct ScalingRecord {
  double isd_m = 0.0;
  double relative_density = 1.0;  // (isd_ref / isd)^2
  double area_capacity = 0.0;
  double efficiency_e = 1.0;  // vs. the previous (less dense) record
};

/// Builds scaling records from (isd, area capacity) points, densest last;
/// efficiency is taken between consecutive density points.
std::vector<ScalingRecord> scaling_records(const std::vector<std::pair<double, double>>& isd_capacity,
                                           double isd_ref = 40.0);

}  // namespace capsim::analytics
