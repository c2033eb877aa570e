#include "capsim/analytics/bianchi.hpp"

#include <cmath>
#include <stdexcept>

namespace capsim::analytics {

double bianchi_tau_of_p(double p, int w, int m) {
  const double W = w;
  const double u = 1.0 - 2.0 * p;
  if (std::fabs(u) < 1e-9) {
    // lim_{p->1/2} of the expression below
    return 2.0 / (W + 1.0 + 0.5 * W * m);
  }
  return 2.0 * u / (u * (W + 1.0) + p * W * (1.0 - std::pow(2.0 * p, m)));
}

BianchiSolution bianchi_throughput(const BianchiParams& params) {
  if (params.n < 1 || params.w < 1 || params.m < 0) {
    throw std::invalid_argument("bianchi_throughput: bad parameters");
  }

  // h(tau) = tau - tau_formula(p(tau)) is increasing: p grows with tau and
  // the window form shrinks with p. h(0) < 0, h(1) > 0.
  const auto residual = [&](double tau) {
    const double p = 1.0 - std::pow(1.0 - tau, params.n - 1);
    return tau - bianchi_tau_of_p(p, params.w, params.m);
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  BianchiSolution sol;
  sol.tau = 0.5 * (lo + hi);
  sol.p = 1.0 - std::pow(1.0 - sol.tau, params.n - 1);
  if (std::fabs(residual(sol.tau)) > 1e-10) {
    throw std::runtime_error("bianchi_throughput: fixed point did not converge");
  }

  const double n = params.n;
  const double p_tr = 1.0 - std::pow(1.0 - sol.tau, n);
  const double p_s = n * sol.tau * std::pow(1.0 - sol.tau, n - 1.0) / p_tr;

  // Slot durations in seconds. A successful exchange occupies frame + SIFS +
  // ACK + DIFS; a collision costs the frame plus the ACK timeout wait the
  // simulator's stations actually pay before the next DIFS.
  const double sigma = params.slot.to_seconds();
  const double t_s = (params.frame_airtime + params.sifs + params.ack_airtime + params.difs)
                         .to_seconds();
  const double t_c = (params.frame_airtime + params.sifs + params.ack_airtime +
                      params.ack_timeout_margin + params.difs)
                         .to_seconds();

  const double denom =
      (1.0 - p_tr) * sigma + p_tr * p_s * t_s + p_tr * (1.0 - p_s) * t_c;
  const double throughput_bps = p_tr * p_s * params.payload_bits / denom;
  sol.throughput_mbps = throughput_bps / 1e6;
  return sol;
}

}  // namespace capsim::analytics
