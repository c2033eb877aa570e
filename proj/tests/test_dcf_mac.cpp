#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "capsim/harness/network.hpp"
#include "capsim/mac/rate_manager.hpp"
#include "capsim/mac/station_mac.hpp"

using namespace capsim;
using capsim::sim::SimTime;

namespace {

harness::ScenarioConfig base_cfg() {
  harness::ScenarioConfig cfg;
  cfg.scenario = harness::ScenarioKind::SingleCell;
  cfg.radio.fading = false;
  cfg.mac.rate_mode = harness::RateMode::Fixed;
  cfg.mac.fixed_rate_mbps = 24;
  cfg.mac.traffic = harness::TrafficDirection::Uplink;
  cfg.duration_s = 0.5;
  cfg.warmup_s = 0.0;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("dcf-mac");

TEST_CASE("backoff draws are uniform over [0, cw]") {
  sim::Simulator sim;
  mac::FixedRate rates(24);
  phy::Trace trace;
  mac::MacParams params;
  mac::StationMac mac(sim, params, 0, rates, 12345, trace);
  // drive draws through a saturated station that never gets a clear channel:
  // simpler to sample the generator through forced-free runs is heavy, so
  // draw indirectly: a fresh station, DIFS completes, one draw per frame.
  // Here we exercise the distribution at the unit level via many MACs.
  std::map<int, int> counts;
  for (int s = 0; s < 4000; ++s) {
    sim::Simulator sm;
    phy::Trace tr;
    tr.mac_enabled = true;
    mac::StationMac m(sm, params, 0, rates, 1000 + s, tr);
    m.set_hooks({[](radio::StationId, const phy::Mcs&, std::uint64_t) { return 0; },
                 [](radio::StationId, int) {}});
    m.start_saturated({1});
    sm.run_until(SimTime::ms(2));  // DIFS + up to 31 slots
    for (const auto& row : tr.mac) {
      if (row.event == phy::MacEvent::BackoffDraw) {
        counts[row.draw] += 1;
        break;
      }
    }
  }
  int total = 0;
  for (const auto& [draw, c] : counts) {
    CHECK(draw >= 0);
    CHECK(draw <= 31);
    total += c;
  }
  CHECK(total == 4000);
  // each of the 32 bins expects 125; allow 4 sigma (~11.1 per bin)
  for (int d = 0; d <= 31; ++d) {
    CHECK(counts[d] > 125 - 45);
    CHECK(counts[d] < 125 + 45);
  }
}

TEST_CASE("nav makes the channel virtually busy until expiry") {
  sim::Simulator sim;
  mac::FixedRate rates(24);
  phy::Trace trace;
  mac::MacParams params;
  mac::StationMac mac(sim, params, 0, rates, 7, trace);
  CHECK_FALSE(mac.channel_busy());
  mac.on_nav_set(SimTime::us(50));
  CHECK(mac.channel_busy());
  sim.run_until(SimTime::us(49));
  CHECK(mac.channel_busy());
  sim.run_until(SimTime::us(50));
  CHECK_FALSE(mac.channel_busy());
}

TEST_CASE("cw doubles per failure, caps, drops after the retry limit, then resets") {
  auto cfg = base_cfg();
  cfg.topology.stas_per_ap = 1;
  cfg.topology.intracell_pl_db = 200.0;  // the AP can never decode: pure timeouts
  cfg.duration_s = 0.12;
  harness::Network net(cfg, 5, false, true);
  auto sum = net.run();
  std::vector<std::pair<int, bool>> draws;  // (cw, was-drop-next)
  std::vector<int> cw_seq;
  int drops = 0;
  for (const auto& row : sum.trace.mac) {
    if (row.station != 1) continue;
    if (row.event == phy::MacEvent::BackoffDraw) cw_seq.push_back(row.cw);
    if (row.event == phy::MacEvent::Drop) ++drops;
  }
  REQUIRE(cw_seq.size() >= 8);
  CHECK(cw_seq[0] == 31);
  CHECK(cw_seq[1] == 63);
  CHECK(cw_seq[2] == 127);
  CHECK(cw_seq[3] == 255);
  CHECK(cw_seq[4] == 511);
  CHECK(cw_seq[5] == 1023);
  CHECK(cw_seq[6] == 1023);  // capped
  CHECK(cw_seq[7] == 31);    // dropped after 7 failures, window resets
  CHECK(drops >= 1);
}

TEST_CASE("clean channel: every draw at cw_min and acks reset the retry count") {
  auto cfg = base_cfg();
  cfg.topology.stas_per_ap = 1;
  harness::Network net(cfg, 5, false, true);
  auto sum = net.run();
  int draws = 0;
  for (const auto& row : sum.trace.mac) {
    if (row.station == 1 && row.event == phy::MacEvent::BackoffDraw) {
      CHECK(row.cw == 31);
      CHECK(row.retry == 0);
      ++draws;
    }
  }
  CHECK(draws > 300);  // ~585 frames in 0.5 s
}

TEST_CASE("round-robin downlink serves every sta equally") {
  auto cfg = base_cfg();
  cfg.mac.traffic = harness::TrafficDirection::Downlink;
  cfg.topology.stas_per_ap = 4;
  harness::Network net(cfg, 9, false, false);
  auto sum = net.run();
  REQUIRE(sum.report.per_sta.size() == 4);
  // equal frame counts within one frame's worth of goodput
  const double frame_mbps = 1800 * 8 / 0.5 / 1e6;
  for (const auto& f : sum.report.per_sta) {
    CHECK(std::fabs(f.goodput_mbps - sum.report.per_sta[0].goodput_mbps) <= frame_mbps + 1e-9);
    CHECK(f.goodput_mbps > 3.0);
  }
}

TEST_CASE("intra-cell transmissions only ever overlap on identical draws") {
  auto cfg = base_cfg();
  cfg.topology.stas_per_ap = 4;
  cfg.duration_s = 1.0;
  harness::Network net(cfg, 21, true, false);
  auto sum = net.run();
  CHECK(sum.overlap.midflight_cross_cell_starts == 0);  // single cell: trivially none
  // all overlapped starts are simultaneous: check via phy trace
  std::map<std::int64_t, int> starts;
  std::map<int, std::pair<std::int64_t, std::int64_t>> spans;
  for (const auto& row : sum.trace.phy) {
    if (row.event == phy::PhyEvent::TxStart) {
      starts[row.t.ticks()] += 1;
      spans[row.tx_id].first = row.t.ticks();
    }
    if (row.event == phy::PhyEvent::TxEnd) spans[row.tx_id].second = row.t.ticks();
  }
  for (const auto& [id, span] : spans) {
    for (const auto& [id2, span2] : spans) {
      if (id2 == id) continue;
      const bool overlap = span.first < span2.second && span2.first < span.second;
      if (overlap) CHECK(span.first == span2.first);
    }
  }
}

TEST_CASE("first-round collision probability matches uniform-draw statistics") {
  // n stations cold-start together.  P(tied minimum of n draws from
  // U{0..31}) = 1 - sum_k n (1/32) ((31-k)/32)^(n-1); for n = 4 this is
  // 1 - (1/8)(1/32^3) sum j^3 = 0.06152.
  const int n = 4;
  const double p_expected = 0.061523;
  const int reps = 500;
  int ties = 0;
  for (int r = 0; r < reps; ++r) {
    auto cfg = base_cfg();
    cfg.topology.stas_per_ap = n;
    cfg.duration_s = 0.002;
    cfg.seed = 50000 + static_cast<std::uint64_t>(r);
    harness::Network net(cfg, cfg.seed, true, false);
    auto sum = net.run();
    std::int64_t first = -1;
    int count = 0;
    for (const auto& row : sum.trace.phy) {
      if (row.event != phy::PhyEvent::TxStart) continue;
      if (first < 0) first = row.t.ticks();
      if (row.t.ticks() == first) ++count;
    }
    REQUIRE(count >= 1);
    if (count >= 2) ++ties;
  }
  const double p_hat = static_cast<double>(ties) / reps;
  const double sigma = std::sqrt(p_expected * (1 - p_expected) / reps);
  CHECK(std::fabs(p_hat - p_expected) < 3.0 * sigma);
}

TEST_CASE("nav correctness: no transmit attempt before busy_until after s3") {
  // Two cells, VCS-only coupling: cross-cell S3 decodes set NAVs.
  auto cfg = base_cfg();
  cfg.scenario = harness::ScenarioKind::SmallNetwork;
  cfg.topology.n_aps = 2;
  cfg.topology.stas_per_ap = 2;
  cfg.topology.intercell_pl_db = 86.0;
  cfg.duration_s = 1.0;
  harness::Network net(cfg, 77, true, false);
  auto sum = net.run();
  // outcome partition: with p_falsepass = 0 an S2 can never occur
  for (const auto& row : sum.trace.phy) CHECK(row.event != phy::PhyEvent::S2);
  std::map<int, std::pair<std::int64_t, std::int64_t>> spans;  // tx -> (start,end)
  for (const auto& row : sum.trace.phy) {
    if (row.event == phy::PhyEvent::TxStart) spans[row.tx_id].first = row.t.ticks();
    if (row.event == phy::PhyEvent::TxEnd) spans[row.tx_id].second = row.t.ticks();
  }
  const std::int64_t ack_hold = (sim::kSifs + SimTime::ns(24'667)).ticks();
  int checked = 0;
  for (const auto& row : sum.trace.phy) {
    if (row.event != phy::PhyEvent::S3) continue;
    const auto it = spans.find(row.tx_id);
    if (it == spans.end() || it->second.second == 0) continue;
    // The decoder's own next transmission must start after the NAV window
    // (data frames hold until end + SIFS + ACK; this S3 may be on an ACK,
    // whose hold ends at its end -- use the data rule only when it applies).
    const bool is_data = (it->second.second - it->second.first) > 100'000;
    const std::int64_t nav_until = it->second.second + (is_data ? ack_hold : 0);
    for (const auto& row2 : sum.trace.phy) {
      if (row2.station != row.station || row2.event != phy::PhyEvent::TxStart) continue;
      const bool inside = row2.t.ticks() > row.t.ticks() && row2.t.ticks() < nav_until;
      if (inside) {
        // ACK responses are exempt: they are sent SIFS after a reception
        // regardless of NAV. Identify them by their duration.
        const auto sp = spans[row2.tx_id];
        const bool is_ack = (sp.second - sp.first) < 100'000;
        CHECK(is_ack);
      }
    }
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("proposition 1: ed serializes two coupled cells" * doctest::timeout(300)) {
  // Two cells with cross-cell power above the ED threshold, no fading.
  auto cfg = base_cfg();
  cfg.scenario = harness::ScenarioKind::SmallNetwork;
  cfg.topology.n_aps = 2;
  cfg.topology.stas_per_ap = 1;
  cfg.topology.intercell_pl_db = 64.0;
  cfg.duration_s = 6.0;
  cfg.warmup_s = 0.5;
  harness::Network net(cfg, 15, false, false);
  auto sum = net.run();
  // The mechanism: energy detection prevents every mid-flight entry; the
  // only concurrency left is simultaneous backoff expiry.
  CHECK(sum.overlap.midflight_cross_cell_starts == 0);
  // Residual same-slot collisions at cw_min=31 occur at ~1/32 of the
  // transmission rounds, i.e. ~3% of airtime. The stated bound is 2%.
  CHECK(sum.overlap.overlap_s / sum.overlap.busy_s < 0.02);
}

TEST_CASE("proposition 2: cross-cell overlap grows as pathloss weakens vcs") {
  double prev = -1.0;
  for (const double pl : {86.0, 96.0, 106.0}) {
    double frac = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      auto cfg = base_cfg();
      cfg.scenario = harness::ScenarioKind::SmallNetwork;
      cfg.radio.fading = true;
      cfg.topology.n_aps = 2;
      cfg.topology.stas_per_ap = 2;
      cfg.topology.intercell_pl_db = pl;
      cfg.duration_s = 2.0;
      cfg.warmup_s = 0.25;
      cfg.seed = 600 + static_cast<std::uint64_t>(rep);
      harness::Network net(cfg, cfg.seed, false, false);
      auto sum = net.run();
      frac += sum.overlap.cross_cell_overlap_s / sum.overlap.busy_s;
    }
    frac /= 3.0;
    CHECK(frac > prev);
    prev = frac;
  }
  CHECK(prev > 0.2);  // at 106 dB the cells are mostly uncoordinated
}

TEST_CASE("fixed rate manager always returns the configured mcs") {
  mac::FixedRate rates(36);
  CHECK(rates.select(3).rate_mbps == 36);
  CHECK(rates.select(9).rate_mbps == 36);
}

TEST_CASE("minstrel converges to 54 Mbps on a clean channel") {
  mac::MinstrelRate rates(11);
  for (int window = 0; window < 10; ++window) {
    for (int k = 0; k < 100; ++k) {
      const auto& m = rates.select(1);
      rates.record(1, m, true);  // everything succeeds
    }
    rates.update_stats();
  }
  CHECK(rates.best_index(1) == 7);  // 54 Mbps
}

TEST_CASE("minstrel settles at 12 Mbps when faster rates always fail") {
  mac::MinstrelRate rates(13);
  for (int window = 0; window < 40; ++window) {
    for (int k = 0; k < 100; ++k) {
      const auto& m = rates.select(1);
      rates.record(1, m, m.rate_mbps <= 12);
    }
    rates.update_stats();
  }
  CHECK(rates.best_index(1) == 2);  // 12 Mbps
  // and it stays there
  for (int window = 0; window < 5; ++window) {
    for (int k = 0; k < 50; ++k) {
      const auto& m = rates.select(1);
      rates.record(1, m, m.rate_mbps <= 12);
    }
    rates.update_stats();
    CHECK(rates.best_index(1) == 2);
  }
}

TEST_CASE("minstrel probes a neighboring rate about 10% of the time") {
  mac::MinstrelRate rates(17);
  // park best at index 4 (24 Mbps)
  for (int window = 0; window < 30; ++window) {
    for (int k = 0; k < 60; ++k) {
      const auto& m = rates.select(1);
      rates.record(1, m, m.rate_mbps <= 24);
    }
    rates.update_stats();
  }
  REQUIRE(rates.best_index(1) == 4);
  int probes = 0;
  const int n = 5000;
  for (int k = 0; k < n; ++k) {
    const auto& m = rates.select(1);
    if (m.index != 4) {
      CHECK(std::abs(m.index - 4) == 1);  // neighbors only
      ++probes;
    }
    rates.record(1, m, m.rate_mbps <= 24);
  }
  const double frac = static_cast<double>(probes) / n;
  CHECK(frac > 0.07);
  CHECK(frac < 0.13);
}

TEST_SUITE_END();
