#pragma once

#include <cmath>

namespace capsim::radio {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

inline double direct_distance(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Euclidean distance minimized over the toroidal images of b. For a square
/// world this reduces to taking the shorter way around per axis.
inline double wraparound_distance(Position a, Position b, double world_side) {
  double dx = std::fabs(a.x - b.x);
  double dy = std::fabs(a.y - b.y);
  dx = std::min(dx, world_side - dx);
  dy = std::min(dy, world_side - dy);
  return std::hypot(dx, dy);
}

}  // namespace capsim::radio
