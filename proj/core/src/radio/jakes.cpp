#include "capsim/radio/jakes.hpp"

#include <cmath>
#include <numbers>

#include "capsim/util/rng.hpp"

namespace capsim::radio {

JakesFader::JakesFader(std::uint64_t seed, double doppler_hz, int n_paths) {
  util::Rng rng(seed);
  omega_.resize(n_paths);
  phase_.resize(n_paths);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int n = 0; n < n_paths; ++n) {
    omega_[n] = two_pi * doppler_hz * std::cos(two_pi * rng.uniform());
    phase_[n] = two_pi * rng.uniform();
  }
  norm_ = 1.0 / std::sqrt(static_cast<double>(n_paths));
}

double JakesFader::power_gain(double t_seconds) const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < omega_.size(); ++n) {
    const double theta = omega_[n] * t_seconds + phase_[n];
    re += std::cos(theta);
    im += std::sin(theta);
  }
  re *= norm_;
  im *= norm_;
  return re * re + im * im;
}

}  // namespace capsim::radio
