#include "capsim/radio/link_model.hpp"

#include <cmath>
#include <stdexcept>

#include "capsim/util/rng.hpp"

namespace capsim::radio {

LinkModel::LinkModel(const Topology& topo, const RadioParams& params, std::uint64_t seed)
    : topo_(&topo), params_(params), seed_(seed), n_(topo.stations.size()) {
  large_scale_db_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const Station& a = topo.stations[i];
      const Station& b = topo.stations[j];
      double g;
      if (topo.fixed_pathloss) {
        g = (a.cell == b.cell) ? -topo.intracell_pl_db : -topo.intercell_pl_db;
      } else {
        const double r = topo.wraparound
                             ? wraparound_distance(a.pos, b.pos, topo.world_side)
                             : direct_distance(a.pos, b.pos);
        g = pathloss_db(params_.pathloss, std::max(r, params_.pathloss.min_distance_m));
        if (params_.shadowing_sigma_db > 0.0) {
          // One symmetric draw per unordered pair, reproducible from the seed.
          util::Rng srng(util::mix(seed_, 0x73686164ULL, pair_key(a.id, b.id)));
          g += srng.normal(0.0, params_.shadowing_sigma_db);
        }
      }
      large_scale_db_[i * n_ + j] = g;
      large_scale_db_[j * n_ + i] = g;
    }
  }
}

std::uint64_t LinkModel::pair_key(StationId a, StationId b) const {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

double LinkModel::large_scale_gain_db(StationId a, StationId b) const {
  if (a == b || a < 0 || b < 0 || static_cast<std::size_t>(a) >= n_ ||
      static_cast<std::size_t>(b) >= n_) {
    throw std::invalid_argument("LinkModel: bad station pair");
  }
  return large_scale_db_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
}

double LinkModel::fading_db(StationId a, StationId b, sim::SimTime t) const {
  const std::uint64_t key = pair_key(a, b);
  auto [it, inserted] = faders_.try_emplace(key);
  FadingSlot& slot = it->second;
  if (inserted) {
    slot.fader = std::make_unique<JakesFader>(util::mix(seed_, 0x6a616b65ULL, key),
                                              params_.fading.doppler_hz, params_.fading.n_paths);
  }
  const std::int64_t bucket = t.ticks() / params_.fading.sample_interval.ticks();
  if (bucket != slot.bucket) {
    slot.bucket = bucket;
    const double ts = static_cast<double>(bucket) *
                      params_.fading.sample_interval.to_seconds();
    slot.power_db = 10.0 * std::log10(std::max(slot.fader->power_gain(ts), 1e-30));
  }
  return slot.power_db;
}

double LinkModel::gain_db(StationId a, StationId b, sim::SimTime t) const {
  double g = large_scale_gain_db(a, b);
  if (params_.fading.enabled) g += fading_db(a, b, t);
  for (const auto& ov : overrides_) {
    if (((ov.a == a && ov.b == b) || (ov.a == b && ov.b == a)) && t >= ov.from && t < ov.to) {
      g += ov.extra_db;
    }
  }
  return g;
}

void LinkModel::add_override(StationId a, StationId b, sim::SimTime from, sim::SimTime to,
                             double extra_db) {
  overrides_.push_back(Override{a, b, from, to, extra_db});
}

void LinkModel::gain_breakpoints(StationId a, StationId b, sim::SimTime from, sim::SimTime to,
                                 std::vector<sim::SimTime>& out) const {
  if (params_.fading.enabled) {
    const std::int64_t step = params_.fading.sample_interval.ticks();
    std::int64_t k = from.ticks() / step + 1;
    for (; k * step < to.ticks(); ++k) out.push_back(sim::SimTime::ns(k * step));
  }
  for (const auto& ov : overrides_) {
    if ((ov.a == a && ov.b == b) || (ov.a == b && ov.b == a)) {
      if (ov.from > from && ov.from < to) out.push_back(ov.from);
      if (ov.to > from && ov.to < to) out.push_back(ov.to);
    }
  }
}

}  // namespace capsim::radio
