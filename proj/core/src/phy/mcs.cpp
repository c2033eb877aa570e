#include "capsim/phy/mcs.hpp"

#include <stdexcept>

namespace capsim::phy {

const std::array<Mcs, 8>& mcs_table() {
  static const std::array<Mcs, 8> table = {{
      {0, 6, 5.0},
      {1, 9, 6.0},
      {2, 12, 8.0},
      {3, 18, 11.0},
      {4, 24, 14.0},
      {5, 36, 18.0},
      {6, 48, 22.0},
      {7, 54, 24.0},
  }};
  return table;
}

const Mcs& mcs_by_rate(int rate_mbps) {
  for (const auto& m : mcs_table()) {
    if (m.rate_mbps == rate_mbps) return m;
  }
  throw std::invalid_argument("mcs_by_rate: unsupported rate " + std::to_string(rate_mbps));
}

const Mcs& mcs_by_index(int index) {
  if (index < 0 || index >= static_cast<int>(mcs_table().size())) {
    throw std::invalid_argument("mcs_by_index: out of range");
  }
  return mcs_table()[static_cast<std::size_t>(index)];
}

sim::SimTime payload_airtime(int bytes, const Mcs& mcs) {
  const std::int64_t bits = static_cast<std::int64_t>(bytes) * 8;
  const std::int64_t rate = mcs.rate_mbps;  // bits per microsecond
  return sim::SimTime::ns((bits * 1000 + rate - 1) / rate);
}

sim::SimTime frame_airtime(int bytes, const Mcs& mcs) {
  return sim::kPreamble + sim::kPlcpHeader + payload_airtime(bytes, mcs);
}

}  // namespace capsim::phy
