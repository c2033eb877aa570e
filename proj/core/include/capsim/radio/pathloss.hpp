#pragma once

namespace capsim::radio {

/// Indoor diffusion pathloss model. The gain at distance r meters is
///   P_G = (lambda^2 / 4pi) * [kappa_d/(4pi r) + 1/(4pi r^2)] * exp(-kappa_d * r)
/// with lambda the carrier wavelength and kappa_d the absorption coefficient
/// per meter.
struct PathlossModel {
  double wavelength_m = 0.06;     // 5 GHz band
  double absorption_per_m = 0.24;
  // The model diverges as r -> 0; anything closer is clamped to this.
  double min_distance_m = 0.5;
};

/// Gain in dB (negative). Throws std::domain_error for r <= 0.
double pathloss_db(const PathlossModel& model, double r_m);

/// Distance at which a +tx_power_dbm transmitter is received at level_dbm,
/// found by bisection. Used by tests and the topology report.
double range_for_rx_level(const PathlossModel& model, double tx_power_dbm, double level_dbm);

}  // namespace capsim::radio
