#include "capsim/harness/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>

#include <json.hpp>

#include "capsim/analytics/lte_baseline.hpp"

namespace capsim::harness {

using sim::SimTime;

namespace {

RunOutput run_lte_baseline(const ScenarioConfig& cfg, std::uint64_t run_seed) {
  radio::GridParams gp;
  gp.cells_per_side = cfg.topology.grid_side;
  gp.isd_m = cfg.topology.isd_m;
  gp.reuse = 1;  // LTE baseline: every cell on the one shared carrier
  gp.stas_per_ap = cfg.topology.stas_per_ap;
  gp.placement = cfg.topology.sta_placement == "cell_uniform" ? radio::StaPlacement::CellUniform
                                                              : radio::StaPlacement::Disk;
  gp.disk_radius_fraction = cfg.topology.disk_radius_fraction;
  gp.disk_radius_m = cfg.topology.disk_radius_m;
  const auto topo = radio::build_grid_network(gp, run_seed);

  radio::RadioParams rp;
  rp.pathloss.wavelength_m = cfg.radio.wavelength_m;
  rp.pathloss.absorption_per_m = cfg.radio.absorption_per_m;
  rp.pathloss.min_distance_m = cfg.radio.min_distance_m;
  rp.shadowing_sigma_db = cfg.radio.shadowing_sigma_db;
  rp.fading.enabled = false;  // SINR map over large-scale gains only
  const radio::LinkModel links(topo, rp, run_seed);

  analytics::LteRateMapper mapper;
  mapper.tx_power_dbm = cfg.radio.tx_power_dbm;
  mapper.noise_dbm = cfg.radio.noise_dbm;
  mapper.max_spectral_eff = cfg.lte.max_spectral_eff;
  mapper.attenuation = cfg.lte.attenuation;

  RunOutput out;
  out.config = cfg;
  out.seed = run_seed;
  out.report.duration_s = cfg.duration_s;
  out.report.channels_per_group = 1;
  for (const auto& r : analytics::lte_sta_rates(topo, links, mapper)) {
    out.report.per_sta.push_back({r.sta, r.cell, r.rate_mbps});
  }
  out.area_capacity = analytics::lte_area_capacity(topo, links, mapper);
  out.topology = topo;
  return out;
}

RunOutput run_bianchi_curve(const ScenarioConfig& cfg, std::uint64_t run_seed) {
  RunOutput out;
  out.config = cfg;
  out.seed = run_seed;
  analytics::BianchiParams bp;
  bp.w = cfg.mac.cw_min + 1;
  bp.m = 0;
  for (int w = cfg.mac.cw_min + 1; w < cfg.mac.cw_max + 1; w *= 2) bp.m += 1;
  const auto& mcs = phy::mcs_by_rate(cfg.mac.fixed_rate_mbps);
  bp.frame_airtime = phy::frame_airtime(cfg.mac.payload_bytes + cfg.mac.header_bytes, mcs);
  bp.payload_bits = cfg.mac.payload_bytes * 8;
  for (int n = 1; n <= std::max(1, cfg.topology.stas_per_ap); ++n) {
    bp.n = n;
    out.bianchi.push_back(analytics::bianchi_throughput(bp));
  }
  return out;
}

}  // namespace

RunOutput run_scenario(const ScenarioConfig& cfg, int rep_index, bool trace_phy, bool trace_mac) {
  cfg.validate();
  const std::uint64_t run_seed = cfg.seed ^ static_cast<std::uint64_t>(rep_index);
  switch (cfg.scenario) {
    case ScenarioKind::LteBaseline:
      return run_lte_baseline(cfg, run_seed);
    case ScenarioKind::BianchiCurve:
      return run_bianchi_curve(cfg, run_seed);
    case ScenarioKind::TimelineFig3:
    case ScenarioKind::TimelineFig4:
      throw ConfigError("timeline scenarios run through replay_timeline / the replay command");
    default:
      break;
  }
  Network net(cfg, run_seed, trace_phy, trace_mac);
  RunSummary sum = net.run();
  RunOutput out;
  out.config = cfg;
  out.seed = run_seed;
  out.report = std::move(sum.report);
  out.overlap = sum.overlap;
  out.events = sum.events_processed;
  out.trace = std::move(sum.trace);
  if (cfg.scenario == ScenarioKind::Grid) {
    out.area_capacity = analytics::area_capacity(out.report, net.topology());
  }
  out.topology = net.topology();
  return out;
}

std::vector<RunOutput> run_replications(const ScenarioConfig& cfg) {
  std::vector<std::future<RunOutput>> futs;
  futs.reserve(static_cast<std::size_t>(cfg.replications));
  for (int r = 0; r < cfg.replications; ++r) {
    futs.push_back(std::async(std::launch::async, [cfg, r] { return run_scenario(cfg, r); }));
  }
  std::vector<RunOutput> out;
  out.reserve(futs.size());
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

namespace {
using AxisSetter = void (*)(ScenarioConfig&, double);
const std::map<std::string, AxisSetter>& axis_table() {
  static const std::map<std::string, AxisSetter> table = {
      {"intercell_pl_db", [](ScenarioConfig& c, double v) { c.topology.intercell_pl_db = v; }},
      {"intracell_pl_db", [](ScenarioConfig& c, double v) { c.topology.intracell_pl_db = v; }},
      {"isd_m", [](ScenarioConfig& c, double v) { c.topology.isd_m = v; }},
      {"stas_per_ap", [](ScenarioConfig& c, double v) { c.topology.stas_per_ap = static_cast<int>(v); }},
      {"n_aps", [](ScenarioConfig& c, double v) { c.topology.n_aps = static_cast<int>(v); }},
      {"reuse", [](ScenarioConfig& c, double v) { c.topology.reuse = static_cast<int>(v); }},
      {"grid_side", [](ScenarioConfig& c, double v) { c.topology.grid_side = static_cast<int>(v); }},
      {"duration_s", [](ScenarioConfig& c, double v) { c.duration_s = v; }},
      {"fixed_rate_mbps", [](ScenarioConfig& c, double v) { c.mac.fixed_rate_mbps = static_cast<int>(v); }},
      {"tx_power_dbm", [](ScenarioConfig& c, double v) { c.radio.tx_power_dbm = v; }},
      {"ed_threshold_dbm", [](ScenarioConfig& c, double v) { c.radio.ed_threshold_dbm = v; }},
      {"doppler_hz", [](ScenarioConfig& c, double v) { c.radio.doppler_hz = v; }},
      {"p_falsepass", [](ScenarioConfig& c, double v) { c.phy.p_falsepass = v; }},
      {"disk_radius_m", [](ScenarioConfig& c, double v) { c.topology.disk_radius_m = v; }},
      {"disk_radius_fraction", [](ScenarioConfig& c, double v) { c.topology.disk_radius_fraction = v; }},
  };
  return table;
}
}  // namespace

void apply_axis(ScenarioConfig& cfg, const std::string& axis, double value) {
  const auto it = axis_table().find(axis);
  if (it == axis_table().end()) throw ConfigError("unknown sweep axis: " + axis);
  it->second(cfg, value);
}

std::vector<std::string> sweep_axes() {
  std::vector<std::string> out;
  for (const auto& [k, v] : axis_table()) out.push_back(k);
  return out;
}

namespace {

struct TxSpan {
  SimTime start;
  SimTime end;
};

// Data transmissions of one station, paired up from the phy trace.
std::vector<TxSpan> tx_spans(const phy::Trace& trace, radio::StationId station) {
  std::vector<TxSpan> out;
  std::map<int, SimTime> open;
  for (const auto& row : trace.phy) {
    if (row.station != station) continue;
    if (row.event == phy::PhyEvent::TxStart) open[row.tx_id] = row.t;
    if (row.event == phy::PhyEvent::TxEnd) {
      auto it = open.find(row.tx_id);
      if (it != open.end()) {
        out.push_back({it->second, row.t});
        open.erase(it);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const TxSpan& a, const TxSpan& b) { return a.start < b.start; });
  return out;
}

std::string us_str(SimTime t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f us", t.to_us());
  return buf;
}

void add_check(TimelineReport& rep, const std::string& name, bool passed,
               const std::string& detail) {
  rep.checks.push_back({name, passed, detail});
}

bool strictly_inside(SimTime t, const TxSpan& span) { return t > span.start && t < span.end; }

ScenarioConfig timeline_base(int n_aps, double intercell_pl_db) {
  ScenarioConfig cfg;
  cfg.scenario = n_aps == 3 ? ScenarioKind::TimelineFig3 : ScenarioKind::TimelineFig4;
  cfg.seed = 7;
  cfg.duration_s = 0.003;
  cfg.warmup_s = 0.0;
  cfg.radio.fading = false;
  cfg.mac.rate_mode = RateMode::Fixed;
  cfg.mac.fixed_rate_mbps = 24;
  cfg.mac.traffic = TrafficDirection::Downlink;
  cfg.topology.n_aps = n_aps;
  cfg.topology.stas_per_ap = 1;
  cfg.topology.intercell_pl_db = intercell_pl_db;
  cfg.topology.intracell_pl_db = 64.0;
  return cfg;
}

TimelineReport replay_fig3(bool ed_active) {
  // Three co-channel APs. Moderate inter-cell pathloss (86 dB) keeps headers
  // decodable but below energy detection; 64 dB puts the cross-cell signal
  // above the ED threshold.
  ScenarioConfig cfg = timeline_base(3, ed_active ? 64.0 : 86.0);
  Network net(cfg, cfg.seed, /*trace_phy=*/true, /*trace_mac=*/true);
  // Scripted draws: AP0 and AP1 tie; AP2 holds a larger draw, then a short
  // one after its first exchange; AP0 turns around immediately.
  net.mac_of(0).force_draws({3, 0});
  net.mac_of(1).force_draws({3, 25});
  net.mac_of(2).force_draws({7, 5});
  RunSummary sum = net.run();

  TimelineReport rep;
  const auto ap0 = tx_spans(sum.trace, 0);
  const auto ap1 = tx_spans(sum.trace, 1);
  const auto ap2 = tx_spans(sum.trace, 2);
  if (ap0.size() < 2 || ap1.empty() || ap2.empty() || (!ed_active && ap2.size() < 2)) {
    add_check(rep, "trace-complete", false, "expected transmissions are missing from the trace");
    rep.trace = std::move(sum.trace);
    return rep;
  }
  add_check(rep, "e1-simultaneous", ap0[0].start == ap1[0].start,
            "AP1 " + us_str(ap0[0].start) + " vs AP2 " + us_str(ap1[0].start));
  if (!ed_active) {
    add_check(rep, "e2-third-ap-overlaps", strictly_inside(ap2[0].start, ap0[0]),
              "AP3 starts " + us_str(ap2[0].start) + " inside [" + us_str(ap0[0].start) + ", " +
                  us_str(ap0[0].end) + "]");
    add_check(rep, "e3-first-ap-rejoins", strictly_inside(ap0[1].start, ap2[0]),
              "AP1 second start " + us_str(ap0[1].start));
    add_check(rep, "e4-third-ap-rejoins", strictly_inside(ap2[1].start, ap0[1]),
              "AP3 second start " + us_str(ap2[1].start));
  } else {
    add_check(rep, "ed-no-e2", ap2[0].start >= ap0[0].end,
              "AP3 held until " + us_str(ap2[0].start) + " (first exchange ends " +
                  us_str(ap0[0].end) + ")");
    add_check(rep, "ed-zero-midflight-overlap", sum.overlap.midflight_cross_cell_starts == 0,
              std::to_string(sum.overlap.midflight_cross_cell_starts) +
                  " transmissions started inside a foreign cell's airtime");
  }
  rep.ok = std::all_of(rep.checks.begin(), rep.checks.end(),
                       [](const TimelineCheck& c) { return c.passed; });
  rep.trace = std::move(sum.trace);
  return rep;
}

TimelineReport replay_fig4() {
  ScenarioConfig cfg = timeline_base(2, 86.0);
  Network net(cfg, cfg.seed, /*trace_phy=*/true, /*trace_mac=*/true);
  net.mac_of(0).force_draws({2, 0});
  net.mac_of(1).force_draws({6, 4});
  // Scripted fade on the AP-AP link over AP1's first header: the nominal
  // -72 dBm drops to -91 dBm, above the capture floor but below the 4 dB
  // header gate.
  const SimTime fade_from = SimTime::us(52);
  const SimTime fade_to = SimTime::ns(72'100);
  net.links().add_override(0, 1, fade_from, fade_to, -19.0);
  RunSummary sum = net.run();

  TimelineReport rep;
  const auto ap0 = tx_spans(sum.trace, 0);
  const auto ap1 = tx_spans(sum.trace, 1);
  if (ap0.size() < 2 || ap1.size() < 2) {
    add_check(rep, "trace-complete", false, "expected transmissions are missing from the trace");
    rep.trace = std::move(sum.trace);
    return rep;
  }
  bool synced = false;
  bool missed = false;
  for (const auto& row : sum.trace.phy) {
    if (row.station == 1 && row.tx_id == 0) {
      if (row.event == phy::PhyEvent::SyncLock) synced = true;
      if (row.event == phy::PhyEvent::S1) missed = true;
    }
  }
  add_check(rep, "e1-e2-both-transmit", strictly_inside(ap1[0].start, ap0[0]),
            "AP2 starts " + us_str(ap1[0].start) + " inside AP1's [" + us_str(ap0[0].start) +
                ", " + us_str(ap0[0].end) + "]");
  add_check(rep, "header-missed-under-fade", synced && missed,
            synced ? (missed ? "sync then S1 on AP1's first packet" : "header was decoded")
                   : "no sync on AP1's first packet");
  add_check(rep, "misaligned-continue-ap1", strictly_inside(ap0[1].start, ap1[0]),
            "AP1 second start " + us_str(ap0[1].start) + " inside AP2's [" +
                us_str(ap1[0].start) + ", " + us_str(ap1[0].end) + "]");
  add_check(rep, "misaligned-continue-ap2", strictly_inside(ap1[1].start, ap0[1]),
            "AP2 second start " + us_str(ap1[1].start) + " inside AP1's [" +
                us_str(ap0[1].start) + ", " + us_str(ap0[1].end) + "]");
  rep.ok = std::all_of(rep.checks.begin(), rep.checks.end(),
                       [](const TimelineCheck& c) { return c.passed; });
  rep.trace = std::move(sum.trace);
  return rep;
}

}  // namespace

TimelineReport replay_timeline(TimelineKind kind) {
  switch (kind) {
    case TimelineKind::Fig3: return replay_fig3(false);
    case TimelineKind::Fig3EdActive: return replay_fig3(true);
    case TimelineKind::Fig4: return replay_fig4();
  }
  throw ConfigError("unknown timeline");
}

SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values) {
  SweepResult result;
  result.axis = axis;
  int run_index = 0;
  for (const double v : values) {
    ScenarioConfig cfg = base;
    apply_axis(cfg, axis, v);
    cfg.validate();
    SweepPoint point;
    point.value = v;
    // Common base-seed derivation: run seed = seed ^ global run index.
    std::vector<std::future<RunOutput>> futs;
    for (int r = 0; r < cfg.replications; ++r) {
      const int idx = run_index++;
      futs.push_back(std::async(std::launch::async, [cfg, idx] { return run_scenario(cfg, idx); }));
    }
    for (auto& f : futs) point.runs.push_back(f.get());
    double total = 0.0;
    double area = 0.0;
    int area_n = 0;
    for (const auto& r : point.runs) {
      total += r.report.total_mbps();
      if (r.area_capacity) {
        area += *r.area_capacity;
        ++area_n;
      }
    }
    point.mean_total_mbps = total / static_cast<double>(point.runs.size());
    point.mean_area_capacity = area_n > 0 ? area / area_n : 0.0;
    result.points.push_back(std::move(point));
  }
  return result;
}

namespace {
struct FileWriter {
  explicit FileWriter(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw std::runtime_error("cannot open output file: " + path);
  }
  void line(const std::string& s) { out << s << '\n'; }
  template <typename... Args>
  void fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    out << buf << '\n';
  }
  std::ofstream out;
};
}  // namespace

void write_throughput_csv(const std::string& path, const RunOutput& out) {
  FileWriter w(path);
  w.line("sta,cell,goodput_mbps");
  for (const auto& f : out.report.per_sta) {
    w.fmt("%d,%d,%.6f", f.sta, f.cell, f.goodput_mbps);
  }
}

void write_cdf_csv(const std::string& path, const RunOutput& out) {
  FileWriter w(path);
  w.line("goodput_mbps,percentile");
  for (const auto& [v, p] : analytics::throughput_cdf(out.report)) {
    w.fmt("%.6f,%.6f", v, p);
  }
}

void write_topology_json(const std::string& path, const radio::Topology& topo) {
  nlohmann::json j;
  j["world_side_m"] = topo.world_side;
  j["wraparound"] = topo.wraparound;
  j["isd_m"] = topo.isd_m;
  j["n_cells"] = topo.n_cells;
  j["stas_per_ap"] = topo.stas_per_ap;
  j["reuse"] = topo.plan.reuse;
  j["channels_per_group"] = topo.plan.channels_per_group;
  auto& arr = j["stations"] = nlohmann::json::array();
  for (const auto& s : topo.stations) {
    nlohmann::json e;
    e["id"] = s.id;
    e["role"] = s.role == radio::Role::Ap ? "ap" : "sta";
    e["x"] = s.pos.x;
    e["y"] = s.pos.y;
    e["cell"] = s.cell;
    e["channel"] = s.channel;
    e["serving_ap"] = s.serving_ap;
    arr.push_back(e);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << j.dump(2) << '\n';
}

void write_config_echo(const std::string& path, const ScenarioConfig& cfg) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << cfg.to_json(2) << '\n';
}

void write_scaling_csv(const std::string& path,
                       const std::vector<analytics::ScalingRecord>& recs) {
  FileWriter w(path);
  w.line("isd_m,relative_density,area_capacity_mbps,efficiency_e");
  for (const auto& r : recs) {
    w.fmt("%.6f,%.6f,%.6f,%.6f", r.isd_m, r.relative_density, r.area_capacity, r.efficiency_e);
  }
}

void write_bianchi_csv(const std::string& path,
                       const std::vector<analytics::BianchiSolution>& sol) {
  FileWriter w(path);
  w.line("n,tau,p,throughput_mbps");
  for (std::size_t i = 0; i < sol.size(); ++i) {
    w.fmt("%zu,%.9f,%.9f,%.6f", i + 1, sol[i].tau, sol[i].p, sol[i].throughput_mbps);
  }
}

void write_report_json(const std::string& path, const RunOutput& out) {
  nlohmann::json j;
  j["seed"] = out.seed;
  j["duration_s"] = out.report.duration_s;
  j["channels_per_group"] = out.report.channels_per_group;
  j["total_mbps"] = out.report.total_mbps();
  if (out.area_capacity) j["area_capacity_mbps"] = *out.area_capacity;
  j["events"] = out.events;
  auto& flows = j["per_sta"] = nlohmann::json::array();
  for (const auto& f : out.report.per_sta) {
    flows.push_back({{"sta", f.sta}, {"cell", f.cell}, {"goodput_mbps", f.goodput_mbps}});
  }
  auto& cells = j["per_cell"] = nlohmann::json::array();
  for (const auto& [cell, mbps] : out.report.per_cell_mbps()) {
    cells.push_back({{"cell", cell}, {"goodput_mbps", mbps}});
  }
  j["overlap"] = {{"busy_s", out.overlap.busy_s},
                  {"overlap_s", out.overlap.overlap_s},
                  {"cross_cell_overlap_s", out.overlap.cross_cell_overlap_s},
                  {"midflight_cross_cell_starts", out.overlap.midflight_cross_cell_starts}};
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << j.dump(2) << '\n';
}

void write_phy_trace_csv(const std::string& path, const phy::Trace& trace) {
  FileWriter w(path);
  w.line("t_ns,station,event,tx_id,sinr_db");
  for (const auto& r : trace.phy) {
    w.fmt("%lld,%d,%s,%d,%.3f", static_cast<long long>(r.t.ticks()), r.station,
          phy::phy_event_name(r.event).c_str(), r.tx_id, r.sinr_db);
  }
}

void write_mac_trace_csv(const std::string& path, const phy::Trace& trace) {
  FileWriter w(path);
  w.line("t_ns,station,event,draw,cw,retry");
  for (const auto& r : trace.mac) {
    w.fmt("%lld,%d,%s,%d,%d,%d", static_cast<long long>(r.t.ticks()), r.station,
          phy::mac_event_name(r.event).c_str(), r.draw, r.cw, r.retry);
  }
}

}  // namespace capsim::harness
