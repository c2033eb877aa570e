#pragma once

#include <cstdint>
#include <vector>

namespace capsim::radio {

/// Rayleigh flat-fading generator: sum of equal-power sinusoids with
/// randomized Doppler frequencies f_n = f_d cos(2*pi*u_n) and phases, so the
/// autocorrelation follows the classical Jakes spectrum and |g|^2 is
/// exponentially distributed with unit mean.
class JakesFader {
 public:
  JakesFader(std::uint64_t seed, double doppler_hz, int n_paths = 64);

  /// |g(t)|^2, linear power gain with unit mean.
  double power_gain(double t_seconds) const;

 private:
  std::vector<double> omega_;  // 2*pi*f_n
  std::vector<double> phase_;
  double norm_ = 1.0;
};

}  // namespace capsim::radio
