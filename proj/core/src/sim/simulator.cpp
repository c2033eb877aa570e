#include "capsim/sim/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace capsim::sim {

EventHandle Simulator::schedule(SimTime fire_at, EventKind kind, int target, EventFn fn) {
  if (fire_at < now_) {
    throw std::logic_error("Simulator::schedule: event scheduled in the past");
  }
  auto node = std::make_shared<detail::EventNode>();
  node->fire_at = fire_at;
  node->seq = next_seq_++;
  node->kind = kind;
  node->target = target;
  node->fn = std::move(fn);
  heap_.push_back(node);
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return EventHandle{node};
}

bool Simulator::cancel(const EventHandle& h) {
  auto n = h.node_.lock();
  if (!n || n->cancelled || n->fired) return false;
  n->cancelled = true;
  n->fn = nullptr;  // cancelled events never fire; drop captured state now
  return true;
}

std::size_t Simulator::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw std::logic_error("Simulator::run_until: horizon in the past");
  }
  std::size_t fired = 0;
  while (!heap_.empty() && heap_.front()->fire_at <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    NodePtr node = std::move(heap_.back());
    heap_.pop_back();
    if (node->cancelled) continue;

    assert(node->fire_at > last_fired_at_ ||
           (node->fire_at == last_fired_at_ && node->seq > last_fired_seq_) ||
           (fired == 0 && last_fired_seq_ == 0));
    last_fired_at_ = node->fire_at;
    last_fired_seq_ = node->seq;

    now_ = node->fire_at;
    node->fired = true;
    EventFn fn = std::move(node->fn);
    node->fn = nullptr;
    ++fired;
    fn();
  }
  now_ = t_end;
  return fired;
}

std::size_t Simulator::pending_count() const {
  std::size_t n = 0;
  for (const auto& e : heap_) {
    if (!e->cancelled) ++n;
  }
  return n;
}

}  // namespace capsim::sim
