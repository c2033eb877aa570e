// Acceptance suite: one criterion per section, one PASS/FAIL line each.
//
//   acceptance [--full] [--filter 1,2,...] 
//
// The default profile is sized for desk-scale runs; --full lengthens the
// simulations and adds replications. Exit code is the number of failed
// criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <deque>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "capsim/analytics/bianchi.hpp"
#include "capsim/analytics/lte_baseline.hpp"
#include "capsim/analytics/metrics.hpp"
#include "capsim/harness/scenario.hpp"
#include "capsim/phy/medium.hpp"
#include "capsim/radio/pathloss.hpp"
#include "capsim/util/rng.hpp"

using namespace capsim;
using harness::RateMode;
using harness::ScenarioConfig;
using harness::ScenarioKind;
using harness::TrafficDirection;
using sim::SimTime;

namespace {

struct Gate {
  int failures = 0;
  std::set<int> filter;  // empty = run all
  bool full = false;

  bool wants(int n) const { return filter.empty() || filter.count(n) > 0; }

  void report(int n, const char* name, bool passed, const std::string& detail) {
    std::printf("[%s] criterion %d: %s - %s\n", passed ? "PASS" : "FAIL", n, name,
                detail.c_str());
    std::fflush(stdout);
    if (!passed) ++failures;
  }
};

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

ScenarioConfig small_base(bool fading, TrafficDirection dir) {
  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::SingleCell;
  cfg.radio.fading = fading;
  cfg.mac.rate_mode = RateMode::Fixed;
  cfg.mac.fixed_rate_mbps = 24;
  cfg.mac.traffic = dir;
  return cfg;
}

double total_of(const ScenarioConfig& cfg, int rep = 0) {
  return harness::run_scenario(cfg, rep).report.total_mbps();
}

// ---------------------------------------------------------------- criterion 1
void bianchi_validation(Gate& g) {
  const double dur = g.full ? 8.0 : 3.0;
  auto cfg = small_base(false, TrafficDirection::Uplink);
  cfg.duration_s = dur;
  cfg.warmup_s = 0.3;
  cfg.seed = 101;

  analytics::BianchiParams bp;  // W=32, m=5, simulator frame constants
  std::vector<double> sim_mbps;
  std::vector<double> oracle_mbps;
  for (int n = 1; n <= 10; ++n) {
    cfg.topology.stas_per_ap = n;
    sim_mbps.push_back(total_of(cfg));
    bp.n = n;
    oracle_mbps.push_back(analytics::bianchi_throughput(bp).throughput_mbps);
  }
  const double scale = sim_mbps[0] / oracle_mbps[0];  // match at n=1
  double worst = 0.0;
  int worst_n = 1;
  for (int n = 2; n <= 10; ++n) {
    const double ref = scale * oracle_mbps[static_cast<std::size_t>(n - 1)];
    const double err = std::fabs(sim_mbps[static_cast<std::size_t>(n - 1)] - ref) / ref;
    if (err > worst) {
      worst = err;
      worst_n = n;
    }
  }
  g.report(1, "Bianchi validation (n=1..10, fixed 24 Mbps)", worst <= 0.07,
           fmt("worst deviation %.1f%% at n=%d (limit 7%%); n=1 anchor %.2f Mbps", 100 * worst,
               worst_n, sim_mbps[0]));
}

// ---------------------------------------------------------------- criterion 2
void ed_timesharing(Gate& g) {
  const double dur = g.full ? 6.0 : 2.5;
  bool ok = true;
  std::ostringstream detail;
  for (const int n : {2, 4, 8}) {
    auto single = small_base(true, TrafficDirection::Uplink);
    single.duration_s = dur;
    single.warmup_s = 0.3;
    single.seed = 201;
    single.topology.stas_per_ap = n;
    const double one = total_of(single);

    auto two = single;
    two.scenario = ScenarioKind::SmallNetwork;
    two.topology.n_aps = 2;
    two.topology.intercell_pl_db = 64.0;
    two.topology.intracell_pl_db = 64.0;
    const double both = total_of(two);

    const double rel = both / one - 1.0;
    ok = ok && std::fabs(rel) <= 0.10;
    detail << "n=" << n << ": " << fmt("%+.1f%% ", 100 * rel);
  }
  g.report(2, "ED timesharing (two cells at 64 dB track one cell)", ok,
           detail.str() + "(limit ±10%)");
}

// ---------------------------------------------------------------- criterion 3
void vcs_leakage(Gate& g) {
  const double dur = g.full ? 5.0 : 2.5;
  const int reps = 3;
  auto single = small_base(true, TrafficDirection::Uplink);
  single.duration_s = dur;
  single.warmup_s = 0.3;
  single.seed = 301;
  single.topology.stas_per_ap = 4;
  const double one = total_of(single);

  std::vector<double> means;
  for (const double pl : {86.0, 96.0, 106.0}) {
    auto cfg = single;
    cfg.scenario = ScenarioKind::SmallNetwork;
    cfg.topology.n_aps = 2;
    cfg.topology.intercell_pl_db = pl;
    cfg.topology.intracell_pl_db = 64.0;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) acc += total_of(cfg, r);
    means.push_back(acc / reps);
  }
  const bool increasing = means[0] < means[1] && means[1] < means[2];
  const bool gain = means[2] >= 1.2 * one;
  g.report(3, "VCS leakage monotonicity (86/96/106 dB)", increasing && gain,
           fmt("totals %.1f < %.1f < %.1f Mbps %s; 106 dB vs single %.2fx (need >=1.2)",
               means[0], means[1], means[2], increasing ? "ok" : "NOT monotone",
               means[2] / one));
}

// ---------------------------------------------------------------- criterion 4
void timeline_replays(Gate& g) {
  bool ok = true;
  std::ostringstream detail;
  for (const auto [kind, name] :
       {std::pair{harness::TimelineKind::Fig3, "fig3"},
        std::pair{harness::TimelineKind::Fig3EdActive, "fig3+ED"},
        std::pair{harness::TimelineKind::Fig4, "fig4"}}) {
    const auto rep = harness::replay_timeline(kind);
    ok = ok && rep.ok;
    detail << name << (rep.ok ? " ok; " : " FAILED; ");
    if (!rep.ok) {
      for (const auto& c : rep.checks) {
        if (!c.passed) detail << c.name << ": " << c.detail << "; ";
      }
    }
  }
  g.report(4, "timeline replays (collision and fading narratives)", ok, detail.str());
}

// ------------------------------------------------------------ criteria 5 to 7
void scaling_fairness_lte(Gate& g) {
  const double dur = g.full ? 6.0 : 2.5;
  const int reps = g.full ? 3 : 2;
  // Criterion 6 alone only needs the two endpoint densities.
  const bool need_curve = g.wants(5) || g.wants(7);
  const std::vector<double> isds =
      need_curve ? std::vector<double>{40.0, 20.0, 13.3, 10.0} : std::vector<double>{40.0, 10.0};

  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::Grid;
  cfg.duration_s = dur;
  cfg.warmup_s = 0.4;
  cfg.seed = 501;
  cfg.replications = reps;

  std::vector<double> caps;
  std::vector<std::vector<double>> pooled(isds.size());
  if (g.wants(5) || g.wants(6) || g.wants(7)) {
    const auto result = harness::sweep(cfg, "isd_m", isds);
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      caps.push_back(result.points[i].mean_area_capacity);
      for (const auto& run : result.points[i].runs) {
        for (const auto& f : run.report.per_sta) pooled[i].push_back(f.goodput_mbps);
      }
    }
  }

  std::vector<analytics::ScalingRecord> recs;
  for (std::size_t i = 0; i < isds.size(); ++i) recs.push_back({});
  {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < isds.size(); ++i) pts.emplace_back(isds[i], caps.empty() ? 0 : caps[i]);
    if (!caps.empty()) recs = analytics::scaling_records(pts);
  }

  if (g.wants(5)) {
    const bool monotone = caps[0] < caps[1] && caps[1] < caps[2] && caps[2] < caps[3];
    const double e_first = recs[1].efficiency_e;
    const double e_last = recs[3].efficiency_e;
    const bool bands = e_first >= 0.9 && e_last >= 0.5 && e_last <= 0.85;
    g.report(5, "scaling shape (reuse 12, ISD 40->10 m)", monotone && bands,
             fmt("area capacity %.1f/%.1f/%.1f/%.1f Mbps per ref area %s; E_first=%.2f(>=0.9) "
                 "E_densest=%.2f(in [0.5,0.85])",
                 caps[0], caps[1], caps[2], caps[3], monotone ? "monotone" : "NOT monotone",
                 e_first, e_last));
  }

  double wifi_e_last = recs[3].efficiency_e;

  if (g.wants(6)) {
    auto fairness = [](std::vector<double> v) {
      const double p10 = analytics::percentile(v, 10.0);
      const double p90 = analytics::percentile(v, 90.0);
      return p90 / p10;
    };
    const double f40 = fairness(pooled.front());
    const double f10 = fairness(pooled.back());
    const bool strictly = f10 > f40;
    const bool magnitude = f10 >= 1.5 * f40;
    g.report(6, "fairness degradation with density", strictly && magnitude,
             fmt("p90/p10: %.2f at 40 m, %.2f at 10 m; strict increase %s, ratio %.2fx (need >=1.5x)",
                 f40, f10, strictly ? "ok" : "VIOLATED", f10 / f40));
  }

  if (g.wants(7)) {
    ScenarioConfig lte;
    lte.scenario = ScenarioKind::LteBaseline;
    lte.seed = 501;
    std::vector<std::pair<double, double>> pts;
    for (const double isd : isds) {
      auto c = lte;
      c.topology.isd_m = isd;
      const auto out = harness::run_scenario(c);
      pts.emplace_back(isd, *out.area_capacity);
    }
    const auto lrecs = analytics::scaling_records(pts);
    const double e_lte = lrecs[3].efficiency_e;
    const bool band = e_lte >= 0.7 && e_lte <= 0.95;
    const bool above = e_lte > wifi_e_last;
    g.report(7, "LTE reuse-1 baseline trend", band && above,
             fmt("LTE E_densest=%.2f (in [0.7,0.95]); Wi-Fi reuse-12 E=%.2f (LTE %s)", e_lte,
                 wifi_e_last, above ? "above" : "NOT above"));
  }
}

// ---------------------------------------------------------------- criterion 8
void formula_exactness(Gate& g) {
  radio::PathlossModel m;  // defaults: lambda 0.06, kappa 0.24
  const double pl10 = radio::pathloss_db(m, 10.0);
  const bool eq1 = std::fabs(pl10 - (-71.5)) <= 0.1;

  const double noise = -174.0 + 10.0 * std::log10(20e6) + 7.0;
  const bool nf = std::fabs(noise - (-94.0)) <= 0.1;

  const auto airtime = phy::payload_airtime(1868, phy::mcs_by_rate(24));
  const bool ticks = airtime.ticks() == 622'667;  // 622.7 us in integer ns

  const bool eff = analytics::efficiency(3.7, 1.9, 2 * 3.7, 2 * 1.9) == 1.0;

  g.report(8, "formula exactness", eq1 && nf && ticks && eff,
           fmt("Eq.1(10 m)=%.2f dB; noise=%.2f dBm; airtime=%lld ns; E(c,d,2c,2d)=%s", pl10,
               noise, static_cast<long long>(airtime.ticks()), eff ? "1 exactly" : "NOT 1"));
}

// ---------------------------------------------------------------- criterion 9
void ledger_oracle(Gate& g) {
  const auto topo = radio::build_small_network(2, 86.0, 64.0, 1);
  radio::RadioParams rp;  // fading on: powers vary inside windows
  const radio::LinkModel links(topo, rp, 901);
  util::Rng rng(902);
  int cases = 0;
  double worst = 0.0;
  while (cases < 1000) {
    phy::Medium medium;
    std::deque<phy::Transmission> pool;
    for (int k = 0; k < 5; ++k) {
      phy::Transmission tx;
      tx.id = k;
      tx.source = (k % 2 == 0) ? 0 : 1;
      tx.channel = 0;
      tx.tx_power_dbm = 5.0 + rng.uniform() * 20.0;
      tx.mcs = phy::mcs_by_rate(24);
      tx.payload_bytes = 1868;
      tx.start = SimTime::ns(static_cast<std::int64_t>(rng.uniform() * 800'000));
      tx.preamble_end = tx.start + sim::kPreamble;
      tx.header_end = tx.preamble_end + sim::kPlcpHeader;
      tx.end = tx.start + phy::frame_airtime(tx.payload_bytes, tx.mcs);
      pool.push_back(tx);
      medium.add(&pool.back());
    }
    const auto& target = pool[rng.uniform_int(4)];
    const SimTime w0 =
        target.start + SimTime::ns(static_cast<std::int64_t>(rng.uniform() * 200'000));
    const SimTime w1 =
        w0 + SimTime::ns(50'000 + static_cast<std::int64_t>(rng.uniform() * 300'000));
    if (w1 > target.end) continue;
    const double ledger = phy::sinr_db(target, 2, w0, w1, medium, links, -94.0);

    const std::int64_t step = 5;  // ns
    double s_acc = 0.0, i_acc = 0.0;
    std::int64_t samples = 0;
    for (std::int64_t t = w0.ticks(); t < w1.ticks(); t += step, ++samples) {
      const SimTime mid = SimTime::ns(t + step / 2);
      for (const auto& tx : pool) {
        if (!(tx.start <= mid && mid < tx.end)) continue;
        const double p =
            std::pow(10.0, (tx.tx_power_dbm + links.gain_db(tx.source, 2, mid)) / 10.0);
        (tx.id == target.id ? s_acc : i_acc) += p;
      }
    }
    const double brute = 10.0 * std::log10((s_acc / samples) /
                                           (std::pow(10.0, -9.4) + i_acc / samples));
    worst = std::max(worst, std::fabs(brute - ledger));
    ++cases;
  }
  g.report(9, "interval SINR vs brute-force grid oracle", worst < 0.01,
           fmt("1000 randomized 5-packet overlaps, worst |delta| = %.4f dB (limit 0.01)", worst));
}

// --------------------------------------------------------------- criterion 10
void determinism(Gate& g) {
  namespace fs = std::filesystem;
  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::SmallNetwork;
  cfg.topology.n_aps = 2;
  cfg.topology.stas_per_ap = 3;
  cfg.duration_s = 0.8;
  cfg.warmup_s = 0.1;
  cfg.mac.traffic = TrafficDirection::Uplink;
  cfg.seed = 1001;

  auto emit = [&](const fs::path& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto out = harness::run_scenario(cfg);
    harness::write_throughput_csv((dir / "throughput.csv").string(), out);
    harness::write_cdf_csv((dir / "cdf.csv").string(), out);
    harness::write_topology_json((dir / "topology.json").string(), out.topology);
    harness::write_config_echo((dir / "config_echo.json").string(), out.config);
    harness::write_report_json((dir / "report.json").string(), out);
  };
  const auto base = fs::temp_directory_path() / "capsim_acceptance_det";
  emit(base / "a");
  emit(base / "b");
  bool identical = true;
  for (const auto name :
       {"throughput.csv", "cdf.csv", "topology.json", "config_echo.json", "report.json"}) {
    std::ifstream fa(base / "a" / name, std::ios::binary);
    std::ifstream fb(base / "b" / name, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    identical = identical && !sa.str().empty() && sa.str() == sb.str();
  }
  g.report(10, "byte-identical outputs for identical (config, seed)", identical,
           identical ? "all five output files identical across two runs"
                     : "output files differ between identical runs");
}

}  // namespace

int main(int argc, char** argv) {
  Gate gate;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--full") == 0) gate.full = true;
    if (std::strcmp(argv[i], "--filter") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) gate.filter.insert(std::stoi(tok));
    }
  }

  if (gate.wants(1)) bianchi_validation(gate);
  if (gate.wants(2)) ed_timesharing(gate);
  if (gate.wants(3)) vcs_leakage(gate);
  if (gate.wants(4)) timeline_replays(gate);
  if (gate.wants(5) || gate.wants(6) || gate.wants(7)) scaling_fairness_lte(gate);
  if (gate.wants(8)) formula_exactness(gate);
  if (gate.wants(9)) ledger_oracle(gate);
  if (gate.wants(10)) determinism(gate);

  if (gate.failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) failed\n", gate.failures);
  }
  return gate.failures;
}
