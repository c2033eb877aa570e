#include "capsim/radio/pathloss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace capsim::radio {

double pathloss_db(const PathlossModel& model, double r_m) {
  if (r_m <= 0.0) {
    throw std::domain_error("pathloss_db: distance must be positive");
  }
  const double r = std::max(r_m, model.min_distance_m);
  constexpr double four_pi = 4.0 * std::numbers::pi;
  const double lam2 = model.wavelength_m * model.wavelength_m;
  const double gain = (lam2 / four_pi) *
                      (model.absorption_per_m / (four_pi * r) + 1.0 / (four_pi * r * r)) *
                      std::exp(-model.absorption_per_m * r);
  return 10.0 * std::log10(gain);
}

double range_for_rx_level(const PathlossModel& model, double tx_power_dbm, double level_dbm) {
  // Received power is strictly decreasing in r, so bisection is safe.
  double lo = model.min_distance_m;
  double hi = 1000.0;
  if (tx_power_dbm + pathloss_db(model, hi) > level_dbm) return hi;
  if (tx_power_dbm + pathloss_db(model, lo) < level_dbm) return lo;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tx_power_dbm + pathloss_db(model, mid) > level_dbm) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace capsim::radio
