#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "capsim/sim/time.hpp"

namespace capsim::sim {

enum class EventKind {
  TxStart,
  TxEnd,
  PreambleEnd,
  HeaderEnd,
  BackoffSlot,
  NavExpiry,
  DifsExpiry,
  AckTimeout,
  FadingUpdate,
  RateUpdate,
  Generic,
};

using EventFn = std::function<void()>;

namespace detail {
struct EventNode {
  SimTime fire_at;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Generic;
  int target = -1;
  EventFn fn;
  bool cancelled = false;
  bool fired = false;
};
}  // namespace detail

/// Handle to a scheduled event. Permits cancellation; expires once the event
/// has fired and been released by the queue.
class EventHandle {
 public:
  EventHandle() = default;
  bool pending() const {
    auto n = node_.lock();
    return n && !n->cancelled && !n->fired;
  }
  SimTime fire_at() const {
    auto n = node_.lock();
    return n ? n->fire_at : SimTime::zero();
  }

 private:
  friend class Simulator;
  explicit EventHandle(std::weak_ptr<detail::EventNode> n) : node_(std::move(n)) {}
  std::weak_ptr<detail::EventNode> node_;
};

/// Deterministic discrete-event engine. Events fire in strict (fire_at, seq)
/// order; seq is the insertion order, which makes simultaneous events (equal
/// backoff expiries, simultaneous transmissions) reproducible.
class Simulator {
 public:
  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }

  /// Scheduling in the past is a simulator bug, not a recoverable condition.
  EventHandle schedule(SimTime fire_at, EventKind kind, int target, EventFn fn);
  EventHandle schedule_in(SimTime delay, EventKind kind, int target, EventFn fn) {
    return schedule(now_ + delay, kind, target, std::move(fn));
  }

  /// True if the event was pending and is now removed; false if it already
  /// fired or was already cancelled.
  bool cancel(const EventHandle& h);

  /// Processes every event with fire_at <= t_end in order, leaves the clock
  /// at t_end, and returns the number of events processed.
  std::size_t run_until(SimTime t_end);

  std::size_t pending_count() const;

 private:
  using NodePtr = std::shared_ptr<detail::EventNode>;
  struct Later {
    bool operator()(const NodePtr& a, const NodePtr& b) const {
      if (a->fire_at != b->fire_at) return a->fire_at > b->fire_at;
      return a->seq > b->seq;
    }
  };
  std::vector<NodePtr> heap_;
  SimTime now_ = SimTime::zero();
  std::uint64_t next_seq_ = 0;
  std::uint64_t last_fired_seq_ = 0;
  SimTime last_fired_at_ = SimTime::zero();
};

}  // namespace capsim::sim
