#pragma once

#include <cstdint>
#include <cmath>
#include <compare>

namespace capsim::sim {

/// Simulation time in integer nanoseconds. Every 802.11 interval used by the
/// simulator (slot, DIFS, SIFS, preamble, PLCP header) is an exact multiple
/// of one tick, so timing arithmetic never drifts.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime ns(std::int64_t v) { return SimTime{v}; }
  static constexpr SimTime us(std::int64_t v) { return SimTime{v * 1000}; }
  static constexpr SimTime ms(std::int64_t v) { return SimTime{v * 1'000'000}; }
  static constexpr SimTime zero() { return SimTime{0}; }
  static SimTime seconds(double v) {
    return SimTime{static_cast<std::int64_t>(std::llround(v * 1e9))};
  }

  constexpr std::int64_t ticks() const { return ticks_; }
  constexpr double to_seconds() const { return static_cast<double>(ticks_) * 1e-9; }
  constexpr double to_us() const { return static_cast<double>(ticks_) * 1e-3; }

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.ticks_ + b.ticks_}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.ticks_ - b.ticks_}; }
  friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return SimTime{a.ticks_ * k}; }
  friend constexpr SimTime operator*(std::int64_t k, SimTime a) { return a * k; }
  SimTime& operator+=(SimTime o) { ticks_ += o.ticks_; return *this; }
  SimTime& operator-=(SimTime o) { ticks_ -= o.ticks_; return *this; }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;

 private:
  constexpr explicit SimTime(std::int64_t t) : ticks_(t) {}
  std::int64_t ticks_ = 0;
};

// 802.11a timing constants (OFDM PHY, 5 GHz).
inline constexpr SimTime kSlot = SimTime::us(9);
inline constexpr SimTime kDifs = SimTime::us(34);
inline constexpr SimTime kSifs = SimTime::us(16);
inline constexpr SimTime kPreamble = SimTime::us(4);
inline constexpr SimTime kPlcpHeader = SimTime::us(16);  // preamble end -> header end

}  // namespace capsim::sim
