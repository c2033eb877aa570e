#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capsim/analytics/bianchi.hpp"
#include "capsim/analytics/metrics.hpp"
#include "capsim/harness/network.hpp"

namespace capsim::harness {

struct RunOutput {
  ScenarioConfig config;  // echo, with any overrides applied
  std::uint64_t seed = 0;
  analytics::ThroughputReport report;
  OverlapStats overlap;
  std::optional<double> area_capacity;  // grid and LTE runs
  std::vector<analytics::BianchiSolution> bianchi;  // bianchi_curve runs
  std::uint64_t events = 0;
  radio::Topology topology;
  phy::Trace trace;
};

/// One simulation (or analytic evaluation) of the given config with
/// run_seed = config.seed ^ rep_index.
RunOutput run_scenario(const ScenarioConfig& cfg, int rep_index = 0, bool trace_phy = false,
                       bool trace_mac = false);

/// All replications of a config; independent runs execute in parallel and
/// results come back in replication order.
std::vector<RunOutput> run_replications(const ScenarioConfig& cfg);

/// Numeric sweep axes settable by name (e.g. "intercell_pl_db", "isd_m",
/// "stas_per_ap"). Throws ConfigError for unknown names.
void apply_axis(ScenarioConfig& cfg, const std::string& axis, double value);
std::vector<std::string> sweep_axes();

struct SweepPoint {
  double value = 0.0;
  std::vector<RunOutput> runs;
  double mean_total_mbps = 0.0;
  double mean_area_capacity = 0.0;  // grid / LTE only
};

struct SweepResult {
  std::string axis;
  std::vector<SweepPoint> points;
};

SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values);

/// Deterministic scripted replays of the two narrative timelines. Checks are
/// (name, passed, detail) triples; ok is the conjunction.
struct TimelineCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TimelineReport {
  bool ok = false;
  std::vector<TimelineCheck> checks;
  phy::Trace trace;
};

enum class TimelineKind { Fig3, Fig3EdActive, Fig4 };
TimelineReport replay_timeline(TimelineKind kind);

// Output writers. Numeric formatting is fixed-precision so identical runs
// produce byte-identical files.
void write_throughput_csv(const std::string& path, const RunOutput& out);
void write_cdf_csv(const std::string& path, const RunOutput& out);
void write_topology_json(const std::string& path, const radio::Topology& topo);
void write_config_echo(const std::string& path, const ScenarioConfig& cfg);
void write_scaling_csv(const std::string& path, const std::vector<analytics::ScalingRecord>& recs);
void write_bianchi_csv(const std::string& path, const std::vector<analytics::BianchiSolution>& sol);
void write_report_json(const std::string& path, const RunOutput& out);
void write_phy_trace_csv(const std::string& path, const phy::Trace& trace);
void write_mac_trace_csv(const std::string& path, const phy::Trace& trace);

}  // namespace capsim::harness
