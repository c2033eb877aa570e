#pragma once

#include "capsim/sim/time.hpp"

namespace capsim::analytics {

/// Saturation-throughput model of a single DCF cell (basic access). W is the
/// initial window size in slots (cw_min + 1), m the number of doubling
/// stages to cw_max. Frame timings reuse the simulator's own constants so
/// oracle and simulator compare like-for-like.
struct BianchiParams {
  int n = 1;   // contending stations
  int w = 32;  // initial backoff window size (slots + 1)
  int m = 5;   // doubling stages: W * 2^m = cw_max + 1
  sim::SimTime slot = sim::kSlot;
  sim::SimTime difs = sim::kDifs;
  sim::SimTime sifs = sim::kSifs;
  sim::SimTime frame_airtime = sim::SimTime::ns(642'667);  // 1868 B at 24 Mbps + PLCP
  sim::SimTime ack_airtime = sim::SimTime::ns(24'667);
  sim::SimTime ack_timeout_margin = sim::SimTime::us(25);
  int payload_bits = 1800 * 8;  // goodput accounting: UDP payload only
};

struct BianchiSolution {
  double tau = 0.0;  // per-slot transmit probability
  double p = 0.0;    // conditional collision probability
  double throughput_mbps = 0.0;
};

/// Solves the coupled fixed point
///   tau = 2(1-2p) / ((1-2p)(W+1) + p W (1-(2p)^m)),  p = 1 - (1-tau)^(n-1)
/// by bisection on tau to residual < 1e-12, then evaluates saturation
/// throughput from the slot-type probabilities.
BianchiSolution bianchi_throughput(const BianchiParams& params);

/// The window-form expression tau(p) alone, with the removable singularity
/// at p = 1/2 handled; exposed for the solver tests.
double bianchi_tau_of_p(double p, int w, int m);

}  // namespace capsim::analytics
