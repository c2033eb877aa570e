#include "capsim/analytics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace capsim::analytics {

double ThroughputReport::total_mbps() const {
  double t = 0.0;
  for (const auto& f : per_sta) t += f.goodput_mbps;
  return t;
}

std::vector<std::pair<int, double>> ThroughputReport::per_cell_mbps() const {
  std::map<int, double> acc;
  for (const auto& f : per_sta) acc[f.cell] += f.goodput_mbps;
  return {acc.begin(), acc.end()};
}

std::vector<std::pair<double, double>> throughput_cdf(const ThroughputReport& report) {
  if (report.per_sta.empty()) {
    throw std::invalid_argument("throughput_cdf: empty report");
  }
  std::vector<double> v;
  v.reserve(report.per_sta.size());
  for (const auto& f : report.per_sta) v.push_back(f.goodput_mbps);
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(v.size());
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    cdf.emplace_back(v[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty() || p <= 0.0 || p > 100.0) {
    throw std::invalid_argument("percentile: bad arguments");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::max<std::size_t>(rank, 1);
  return values[rank - 1];
}

double fairness_ratio(const ThroughputReport& report) {
  if (report.per_sta.size() < 10) {
    throw std::invalid_argument("fairness_ratio: needs at least 10 STAs");
  }
  std::vector<double> v;
  v.reserve(report.per_sta.size());
  for (const auto& f : report.per_sta) v.push_back(f.goodput_mbps);
  const double p10 = percentile(v, 10.0);
  const double p90 = percentile(v, 90.0);
  if (p10 <= 0.0) {
    throw std::domain_error("fairness_ratio: 10th percentile goodput is zero");
  }
  return p90 / p10;
}

double area_capacity(const ThroughputReport& report, const radio::Topology& topo,
                     double reference_cell_area_m2) {
  if (!topo.wraparound || topo.world_side <= 0.0) {
    throw std::invalid_argument("area_capacity: requires a wraparound grid topology");
  }
  const double world_area = topo.world_side * topo.world_side;
  const double total = report.total_mbps() * report.channels_per_group;
  return total / world_area * reference_cell_area_m2;
}

double efficiency(double c0, double d0, double c1, double d1) {
  if (c0 <= 0.0 || d0 <= 0.0 || d1 <= 0.0) {
    throw std::invalid_argument("efficiency: non-positive baseline");
  }
  return (c1 / c0) / (d1 / d0);
}

std::vector<ScalingRecord> scaling_records(
    const std::vector<std::pair<double, double>>& isd_capacity, double isd_ref) {
  std::vector<ScalingRecord> out;
  out.reserve(isd_capacity.size());
  for (std::size_t i = 0; i < isd_capacity.size(); ++i) {
    const auto [isd, cap] = isd_capacity[i];
    ScalingRecord rec;
    rec.isd_m = isd;
    rec.relative_density = (isd_ref / isd) * (isd_ref / isd);
    rec.area_capacity = cap;
    if (i > 0) {
      const auto& prev = out[i - 1];
      rec.efficiency_e =
          efficiency(prev.area_capacity, prev.relative_density, cap, rec.relative_density);
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace capsim::analytics
