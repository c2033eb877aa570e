#include <benchmark/benchmark.h>

#include "capsim/harness/network.hpp"
#include "capsim/phy/medium.hpp"
#include "capsim/radio/jakes.hpp"
#include "capsim/sim/simulator.hpp"

using namespace capsim;
using sim::SimTime;

static void SchedulePopChurn(benchmark::State& state) {
  for (auto _ : state) {
    sim::Simulator sim;
    const int n = static_cast<int>(state.range(0));
    for (int i = 0; i < n; ++i) {
      sim.schedule(SimTime::ns(i * 13 % 9973), sim::EventKind::Generic, 0, [] {});
    }
    benchmark::DoNotOptimize(sim.run_until(SimTime::ms(1)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(SchedulePopChurn)->Range(1 << 10, 1 << 16);

static void JakesSample(benchmark::State& state) {
  radio::JakesFader fader(7, 10.0);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fader.power_gain(t));
    t += 1e-3;
  }
}
BENCHMARK(JakesSample);

static void IntervalSinrFiveOverlaps(benchmark::State& state) {
  const auto topo = radio::build_small_network(2, 86.0, 64.0, 1);
  radio::RadioParams rp;
  const radio::LinkModel links(topo, rp, 3);
  std::vector<phy::Transmission> pool(5);
  phy::Medium medium;
  for (int k = 0; k < 5; ++k) {
    auto& tx = pool[static_cast<std::size_t>(k)];
    tx.id = k;
    tx.source = k % 2;
    tx.channel = 0;
    tx.mcs = phy::mcs_by_rate(24);
    tx.payload_bytes = 1868;
    tx.start = SimTime::ns(k * 137'000);
    tx.preamble_end = tx.start + sim::kPreamble;
    tx.header_end = tx.preamble_end + sim::kPlcpHeader;
    tx.end = tx.start + phy::frame_airtime(1868, tx.mcs);
    medium.add(&tx);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        phy::sinr_db(pool[0], 2, pool[0].start, pool[0].end, medium, links, -94.0));
  }
}
BENCHMARK(IntervalSinrFiveOverlaps);

static void TwoCellSimulatedSecond(benchmark::State& state) {
  harness::ScenarioConfig cfg;
  cfg.scenario = harness::ScenarioKind::SmallNetwork;
  cfg.topology.n_aps = 2;
  cfg.topology.stas_per_ap = 4;
  cfg.topology.intercell_pl_db = 96.0;
  cfg.mac.traffic = harness::TrafficDirection::Uplink;
  cfg.mac.rate_mode = harness::RateMode::Fixed;
  cfg.duration_s = 0.2;
  cfg.warmup_s = 0.0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    harness::Network net(cfg, 11);
    const auto sum = net.run();
    events += sum.events_processed;
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(TwoCellSimulatedSecond)->Unit(benchmark::kMillisecond);

static void GridCellStep(benchmark::State& state) {
  harness::ScenarioConfig cfg;
  cfg.scenario = harness::ScenarioKind::Grid;
  cfg.topology.isd_m = 10.0;
  cfg.duration_s = 0.05;
  cfg.warmup_s = 0.0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    harness::Network net(cfg, 31);
    const auto sum = net.run();
    events += sum.events_processed;
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events),
                                                  benchmark::Counter::kIsRate);
}
BENCHMARK(GridCellStep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
