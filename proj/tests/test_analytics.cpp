#include <doctest.h>

#include <cmath>

#include "capsim/analytics/bianchi.hpp"
#include "capsim/analytics/lte_baseline.hpp"
#include "capsim/analytics/metrics.hpp"
#include "capsim/radio/link_model.hpp"

using namespace capsim;
using namespace capsim::analytics;

namespace {

ThroughputReport make_report(std::vector<double> goodputs) {
  ThroughputReport r;
  r.duration_s = 1.0;
  int id = 0;
  for (const double g : goodputs) {
    r.per_sta.push_back({id, id / 4, g});
    ++id;
  }
  return r;
}

// Independent route to the coupled fixed point: bisection on p, with the
// window expression re-derived inline.
double oracle_tau(int n, int w, int m) {
  const auto tau_of = [&](double p) {
    const double W = w;
    if (std::fabs(1.0 - 2.0 * p) < 1e-12) return 2.0 / (W + 1.0 + 0.5 * W * m);
    const double num = 2.0 * (1.0 - 2.0 * p);
    const double den = (1.0 - 2.0 * p) * (W + 1.0) + p * W * (1.0 - std::pow(2.0 * p, m));
    return num / den;
  };
  const auto g = [&](double p) {
    return p - (1.0 - std::pow(1.0 - tau_of(p), n - 1));
  };
  double lo = 0.0;
  double hi = 1.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return tau_of(0.5 * (lo + hi));
}

}  // namespace

TEST_SUITE_BEGIN("analytics");

TEST_CASE("efficiency identities") {
  CHECK(efficiency(10.0, 1.0, 20.0, 2.0) == 1.0);  // exact
  CHECK(efficiency(10.0, 1.0, 10.0, 2.0) == doctest::Approx(0.5));
  for (const double k : {0.5, 2.0, 7.3}) {
    CHECK(efficiency(3.0, 2.0, 3.0 * k, 2.0 * k) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS(efficiency(0.0, 1.0, 1.0, 2.0));
  CHECK_THROWS(efficiency(1.0, 0.0, 1.0, 2.0));
  CHECK_THROWS(efficiency(1.0, 1.0, 1.0, 0.0));
}

TEST_CASE("cdf is non-decreasing, ends at 1.0, one point per sta") {
  auto rep = make_report({4.0, 1.0, 3.0, 2.0});
  const auto cdf = throughput_cdf(rep);
  REQUIRE(cdf.size() == 4);
  CHECK(cdf.front().first == 1.0);
  CHECK(cdf.back().first == 4.0);
  CHECK(cdf.back().second == doctest::Approx(1.0));
  for (std::size_t i = 1; i < cdf.size(); ++i) {
    CHECK(cdf[i].first >= cdf[i - 1].first);
    CHECK(cdf[i].second > cdf[i - 1].second);
  }
  CHECK_THROWS(throughput_cdf(make_report({})));

  // all equal -> a vertical step
  const auto step = throughput_cdf(make_report({2.0, 2.0, 2.0}));
  for (const auto& [v, p] : step) CHECK(v == 2.0);
}

TEST_CASE("nearest-rank percentile uses the lower-value convention") {
  CHECK(percentile({1.0, 2.0, 3.0, 4.0}, 50.0) == 2.0);
  CHECK(percentile({1.0, 2.0, 3.0, 4.0}, 100.0) == 4.0);
  CHECK(percentile({1.0, 2.0, 3.0, 4.0}, 10.0) == 1.0);
  CHECK_THROWS(percentile({}, 50.0));
  CHECK_THROWS(percentile({1.0}, 0.0));
}

TEST_CASE("fairness ratio") {
  std::vector<double> uniform(12, 5.0);
  CHECK(fairness_ratio(make_report(uniform)) == doctest::Approx(1.0));
  CHECK_THROWS(fairness_ratio(make_report({1, 2, 3})));  // needs >= 10 stas
  std::vector<double> spread;
  for (int i = 1; i <= 20; ++i) spread.push_back(i);
  // p90 = 18th value = 18, p10 = 2nd value = 2
  CHECK(fairness_ratio(make_report(spread)) == doctest::Approx(9.0));
}

TEST_CASE("area capacity normalization") {
  radio::GridParams gp;
  gp.isd_m = 40.0;
  auto topo = radio::build_grid_network(gp, 1);
  auto rep = make_report(std::vector<double>(144, 1.0));
  rep.channels_per_group = 1;
  const double base = area_capacity(rep, topo);
  // 144 Mbps over (240 m)^2 world, scaled to the 1600 m^2 reference area
  CHECK(base == doctest::Approx(144.0 / (240.0 * 240.0) * 1600.0));

  // doubling every sta's goodput doubles area capacity
  auto rep2 = make_report(std::vector<double>(144, 2.0));
  CHECK(area_capacity(rep2, topo) == doctest::Approx(2.0 * base));

  // same total at half the isd (quarter area) -> 4x area capacity
  radio::GridParams gp2 = gp;
  gp2.isd_m = 20.0;
  auto topo2 = radio::build_grid_network(gp2, 1);
  CHECK(area_capacity(rep, topo2) == doctest::Approx(4.0 * base));

  // bandwidth scale: three channels per group carry three times the traffic
  rep.channels_per_group = 3;
  CHECK(area_capacity(rep, topo) == doctest::Approx(3.0 * base));

  // relabeling stations leaves it invariant
  auto rep3 = make_report(std::vector<double>(144, 1.0));
  std::reverse(rep3.per_sta.begin(), rep3.per_sta.end());
  CHECK(area_capacity(rep3, topo) == doctest::Approx(base));

  auto small = radio::build_small_network(2, 86, 64, 2);
  CHECK_THROWS(area_capacity(rep, small));
}

TEST_CASE("scaling records: density ratios and step efficiency") {
  const auto recs = scaling_records({{40.0, 10.0}, {20.0, 30.0}, {10.0, 80.0}});
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].relative_density == doctest::Approx(1.0));
  CHECK(recs[1].relative_density == doctest::Approx(4.0));
  CHECK(recs[2].relative_density == doctest::Approx(16.0));
  CHECK(recs[0].efficiency_e == doctest::Approx(1.0));
  CHECK(recs[1].efficiency_e == doctest::Approx((30.0 / 10.0) / 4.0));
  CHECK(recs[2].efficiency_e == doctest::Approx((80.0 / 30.0) / 4.0));
}

TEST_CASE("bianchi: analytic n=1 limit") {
  BianchiParams bp;
  bp.n = 1;
  const auto sol = bianchi_throughput(bp);
  CHECK(sol.p == doctest::Approx(0.0));
  CHECK(sol.tau == doctest::Approx(2.0 / 33.0).epsilon(1e-12));
  // throughput equals payload over (mean backoff + exchange time)
  const double cycle_s = 15.5 * 9e-6 + (642.667 + 16 + 24.667 + 34) * 1e-6;
  CHECK(sol.throughput_mbps == doctest::Approx(1800 * 8 / cycle_s / 1e6).epsilon(1e-4));
}

TEST_CASE("bianchi matches an independent fixed-point solve") {
  for (const int n : {2, 3, 5, 10, 20}) {
    BianchiParams bp;
    bp.n = n;
    const auto sol = bianchi_throughput(bp);
    CHECK(sol.tau == doctest::Approx(oracle_tau(n, 32, 5)).epsilon(1e-9));
    // residuals of both equations at the returned point
    CHECK(std::fabs(sol.p - (1.0 - std::pow(1.0 - sol.tau, n - 1))) < 1e-10);
    CHECK(std::fabs(sol.tau - bianchi_tau_of_p(sol.p, 32, 5)) < 1e-10);
    CHECK(sol.tau > 0.0);
    CHECK(sol.tau < 1.0);
    CHECK(sol.p >= 0.0);
    CHECK(sol.p < 1.0);
  }
}

TEST_CASE("bianchi throughput decays with n after the peak") {
  BianchiParams bp;
  std::vector<double> s;
  for (int n = 2; n <= 20; ++n) {
    bp.n = n;
    s.push_back(bianchi_throughput(bp).throughput_mbps);
  }
  std::size_t peak = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] > s[peak]) peak = i;
  }
  for (std::size_t i = peak + 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
}

TEST_CASE("lte rate map: cap saturation and the 0 dB point") {
  radio::RadioParams rp;
  rp.fading.enabled = false;

  SUBCASE("strong serving link saturates at the spectral efficiency cap") {
    auto topo = radio::build_small_network(2, 150.0, 64.0, 1);  // interferers negligible
    radio::LinkModel links(topo, rp, 1);
    LteRateMapper mapper;
    auto rates = lte_sta_rates(topo, links, mapper);
    REQUIRE(rates.size() == 2);
    CHECK(rates[0].sinr_db == doctest::Approx(44.0).epsilon(1e-3));
    CHECK(rates[0].rate_mbps == doctest::Approx(4.8 * 20.0));  // cap * BW / 1 STA
  }

  SUBCASE("sinr 0 dB with a large cap gives att * 20 MHz * 1 bit") {
    auto topo = radio::build_small_network(2, 64.0, 64.0, 1);  // S == I at the sta
    radio::LinkModel links(topo, rp, 1);
    LteRateMapper mapper;
    mapper.max_spectral_eff = 100.0;
    auto rates = lte_sta_rates(topo, links, mapper);
    CHECK(rates[0].rate_mbps == doctest::Approx(15.0).epsilon(1e-3));
  }

  SUBCASE("interference only reduces sinr below the serving snr") {
    radio::GridParams gp;
    gp.isd_m = 10.0;
    gp.reuse = 1;
    auto topo = radio::build_grid_network(gp, 3);
    radio::LinkModel links(topo, rp, 3);
    LteRateMapper mapper;
    for (const auto& r : lte_sta_rates(topo, links, mapper)) {
      CHECK(std::isfinite(r.sinr_db));
      const double snr_db =
          mapper.tx_power_dbm + links.large_scale_gain_db(r.serving_ap, r.sta) - mapper.noise_dbm;
      CHECK(r.sinr_db <= snr_db + 1e-9);
      // the strongest-AP rule never picks a weaker server than the planned one
      const auto& sta = topo.at(r.sta);
      CHECK(links.large_scale_gain_db(r.serving_ap, r.sta) + 1e-12 >=
            links.large_scale_gain_db(sta.serving_ap, r.sta));
    }
  }
}

TEST_CASE("noise floor constant is the thermal figure for 20 MHz and 7 dB NF") {
  const double noise = -174.0 + 10.0 * std::log10(20e6) + 7.0;
  CHECK(noise == doctest::Approx(-94.0).epsilon(0.001));
}

TEST_SUITE_END();
