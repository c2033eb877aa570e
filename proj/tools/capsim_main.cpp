// capsim command line: batch experiment runner for the dense-WLAN simulator.
//
//   capsim run    --config cfg.json [--seed N] [--out DIR] [--format csv|json]
//                 [--trace phy,mac]
//   capsim sweep  --axis isd_m --values 40,20,13.3,10 [--config ...] [--out DIR]
//   capsim replay --timeline fig3|fig3_ed|fig4 [--out DIR]
//   capsim oracle bianchi [--n-max 20] [--out FILE]
//
// Exit codes: 0 success, 2 configuration error, 3 assertion failure.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "capsim/analytics/bianchi.hpp"
#include "capsim/harness/scenario.hpp"

namespace fs = std::filesystem;
using namespace capsim;

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void write_run_dir(const fs::path& dir, const harness::RunOutput& out, const std::string& format,
                   bool trace_phy, bool trace_mac) {
  fs::create_directories(dir);
  harness::write_throughput_csv((dir / "throughput.csv").string(), out);
  if (!out.report.per_sta.empty()) {
    harness::write_cdf_csv((dir / "cdf.csv").string(), out);
  }
  if (format == "json") {
    harness::write_report_json((dir / "report.json").string(), out);
  }
  if (!out.topology.stations.empty()) {
    harness::write_topology_json((dir / "topology.json").string(), out.topology);
  }
  harness::write_config_echo((dir / "config_echo.json").string(), out.config);
  if (!out.bianchi.empty()) {
    harness::write_bianchi_csv((dir / "bianchi.csv").string(), out.bianchi);
  }
  if (trace_phy) harness::write_phy_trace_csv((dir / "phy_trace.csv").string(), out.trace);
  if (trace_mac) harness::write_mac_trace_csv((dir / "mac_trace.csv").string(), out.trace);
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string trace;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

harness::ScenarioConfig load_config(const CommonOpts& opts) {
  harness::ScenarioConfig cfg;
  if (!opts.config_path.empty()) cfg = harness::ScenarioConfig::from_file(opts.config_path);
  if (opts.seed_set) cfg.seed = opts.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capsim: SINR-capture 802.11 DCF network simulator"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto add_common = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("--config", opts.config_path, "JSON scenario config (defaults when omitted)");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override config seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    if (with_format) {
      cmd->add_option("--format", opts.format, "csv|json")
          ->check(CLI::IsMember({"csv", "json"}));
    }
    cmd->add_option("--trace", opts.trace, "comma list: phy,mac");
  };

  auto* run_cmd = app.add_subcommand("run", "run one scenario (all replications)");
  add_common(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "sweep a numeric config axis");
  add_common(sweep_cmd);
  std::string axis;
  std::string values_csv;
  sweep_cmd->add_option("--axis", axis, "axis name")->required();
  sweep_cmd->add_option("--values", values_csv, "comma-separated values")->required();

  auto* replay_cmd = app.add_subcommand("replay", "deterministic timeline replays");
  std::string timeline;
  replay_cmd->add_option("--timeline", timeline, "fig3 | fig3_ed | fig4")->required();
  replay_cmd->add_option("--out", opts.out_dir, "output directory");

  auto* oracle_cmd = app.add_subcommand("oracle", "analytic oracles");
  auto* bianchi_cmd = oracle_cmd->add_subcommand("bianchi", "DCF saturation throughput curve");
  int n_max = 20;
  int oracle_w = 32;
  int oracle_m = 5;
  int oracle_rate = 24;
  std::string oracle_out;
  bianchi_cmd->add_option("--n-max", n_max, "largest station count");
  bianchi_cmd->add_option("--w", oracle_w, "initial window size (slots+1)");
  bianchi_cmd->add_option("--m", oracle_m, "doubling stages");
  bianchi_cmd->add_option("--rate", oracle_rate, "MCS rate in Mbps");
  bianchi_cmd->add_option("--out", oracle_out, "write CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  const bool trace_phy = opts.trace.find("phy") != std::string::npos;
  const bool trace_mac = opts.trace.find("mac") != std::string::npos;

  try {
    if (run_cmd->parsed()) {
      const auto cfg = load_config(opts);
      if (cfg.replications == 1) {
        auto out = harness::run_scenario(cfg, 0, trace_phy, trace_mac);
        write_run_dir(opts.out_dir, out, opts.format, trace_phy, trace_mac);
        std::cout << "total goodput: " << out.report.total_mbps() << " Mbps ("
                  << out.events << " events)\n";
      } else {
        double mean = 0.0;
        for (int r = 0; r < cfg.replications; ++r) {
          auto out = harness::run_scenario(cfg, r, trace_phy, trace_mac);
          write_run_dir(fs::path(opts.out_dir) / ("rep" + std::to_string(r)), out, opts.format,
                        trace_phy, trace_mac);
          mean += out.report.total_mbps();
        }
        std::cout << "mean total goodput over " << cfg.replications
                  << " replications: " << mean / cfg.replications << " Mbps\n";
      }
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const auto cfg = load_config(opts);
      const auto values = parse_values(values_csv);
      if (values.empty()) throw harness::ConfigError("sweep needs at least one value");
      auto result = harness::sweep(cfg, axis, values);
      fs::create_directories(opts.out_dir);
      {
        std::ofstream f(fs::path(opts.out_dir) / "sweep.csv", std::ios::binary);
        f << axis << ",mean_total_mbps,mean_area_capacity_mbps\n";
        char buf[256];
        for (const auto& p : result.points) {
          std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", p.value, p.mean_total_mbps,
                        p.mean_area_capacity);
          f << buf;
        }
      }
      if (axis == "isd_m" && (cfg.scenario == harness::ScenarioKind::Grid ||
                              cfg.scenario == harness::ScenarioKind::LteBaseline)) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : result.points) pts.emplace_back(p.value, p.mean_area_capacity);
        std::sort(pts.begin(), pts.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        harness::write_scaling_csv((fs::path(opts.out_dir) / "scaling.csv").string(),
                                   analytics::scaling_records(pts));
      }
      int idx = 0;
      for (const auto& p : result.points) {
        std::ostringstream name;
        name << axis << "=" << p.value;
        int rep = 0;
        for (const auto& r : p.runs) {
          write_run_dir(fs::path(opts.out_dir) / name.str() / ("rep" + std::to_string(rep)), r,
                        opts.format, false, false);
          ++rep;
        }
        std::cout << axis << "=" << p.value << ": mean total " << p.mean_total_mbps << " Mbps\n";
        ++idx;
      }
      return 0;
    }

    if (replay_cmd->parsed()) {
      harness::TimelineKind kind;
      if (timeline == "fig3") kind = harness::TimelineKind::Fig3;
      else if (timeline == "fig3_ed") kind = harness::TimelineKind::Fig3EdActive;
      else if (timeline == "fig4") kind = harness::TimelineKind::Fig4;
      else throw harness::ConfigError("unknown timeline: " + timeline);

      auto rep = harness::replay_timeline(kind);
      for (const auto& c : rep.checks) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
      }
      if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
        harness::write_phy_trace_csv((fs::path(opts.out_dir) / "phy_trace.csv").string(),
                                     rep.trace);
        harness::write_mac_trace_csv((fs::path(opts.out_dir) / "mac_trace.csv").string(),
                                     rep.trace);
      }
      return rep.ok ? 0 : 3;
    }

    if (oracle_cmd->parsed() && bianchi_cmd->parsed()) {
      analytics::BianchiParams bp;
      bp.w = oracle_w;
      bp.m = oracle_m;
      const auto& mcs = phy::mcs_by_rate(oracle_rate);
      bp.frame_airtime = phy::frame_airtime(1868, mcs);
      std::vector<analytics::BianchiSolution> curve;
      for (int n = 1; n <= n_max; ++n) {
        bp.n = n;
        curve.push_back(analytics::bianchi_throughput(bp));
      }
      if (!oracle_out.empty()) {
        harness::write_bianchi_csv(oracle_out, curve);
      } else {
        std::cout << "n,tau,p,throughput_mbps\n";
        for (std::size_t i = 0; i < curve.size(); ++i) {
          std::cout << i + 1 << "," << curve[i].tau << "," << curve[i].p << ","
                    << curve[i].throughput_mbps << "\n";
        }
      }
      return 0;
    }
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
