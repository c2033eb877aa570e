#include "capsim/radio/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "capsim/util/rng.hpp"

namespace capsim::radio {

std::vector<StationId> Topology::aps() const {
  std::vector<StationId> out;
  for (const auto& s : stations) {
    if (s.role == Role::Ap) out.push_back(s.id);
  }
  return out;
}

std::vector<StationId> Topology::stas_of(StationId ap) const {
  std::vector<StationId> out;
  for (const auto& s : stations) {
    if (s.role == Role::Sta && s.serving_ap == ap) out.push_back(s.id);
  }
  return out;
}

int Topology::n_channels() const {
  int hi = -1;
  for (const auto& s : stations) hi = std::max(hi, s.channel);
  return hi + 1;
}

Topology build_small_network(int n_aps, double intercell_pl_db, double intracell_pl_db,
                             int stas_per_ap) {
  if (n_aps < 1 || n_aps > 4) {
    throw std::invalid_argument("build_small_network: n_aps must be in 1..4");
  }
  if (stas_per_ap < 0) {
    throw std::invalid_argument("build_small_network: negative stas_per_ap");
  }
  Topology topo;
  topo.fixed_pathloss = true;
  topo.intercell_pl_db = intercell_pl_db;
  topo.intracell_pl_db = intracell_pl_db;
  topo.n_cells = n_aps;
  topo.stas_per_ap = stas_per_ap;
  topo.plan.reuse = 1;
  topo.plan.channels_per_group = 1;
  topo.plan.group_of_cell.assign(static_cast<std::size_t>(n_aps), 0);
  // Nominal positions for topology dumps only; propagation ignores them.
  topo.world_side = 100.0 * n_aps;
  StationId next = 0;
  for (int c = 0; c < n_aps; ++c) {
    Station ap;
    ap.id = next++;
    ap.role = Role::Ap;
    ap.cell = c;
    ap.channel = 0;
    ap.pos = {50.0 + 100.0 * c, 50.0};
    ap.serving_ap = ap.id;
    topo.stations.push_back(ap);
  }
  for (int c = 0; c < n_aps; ++c) {
    const StationId ap_id = c;
    for (int k = 0; k < stas_per_ap; ++k) {
      Station sta;
      sta.id = next++;
      sta.role = Role::Sta;
      sta.cell = c;
      sta.channel = 0;
      const double ang = 2.0 * std::numbers::pi * k / std::max(1, stas_per_ap);
      sta.pos = {50.0 + 100.0 * c + 5.0 * std::cos(ang), 50.0 + 5.0 * std::sin(ang)};
      sta.serving_ap = ap_id;
      topo.stations.push_back(sta);
    }
  }
  return topo;
}

namespace {

int reuse_group(int reuse, int cx, int cy) {
  switch (reuse) {
    case 1:
      return 0;
    case 4:
      return (cx % 2) + 2 * (cy % 2);
    case 12:
      // Cosets of the sublattice generated by (2,2) and (0,6): 12 groups,
      // co-channel neighbors at distance 2*sqrt(2) cells.
      return (cx % 2) + 2 * ((((cx - cy) % 6) + 6) % 6);
    default:
      throw std::invalid_argument("reuse factor must be 1, 4 or 12");
  }
}

void check_tiling(int reuse, int side) {
  const bool ok = (reuse == 1) || (reuse == 4 && side % 2 == 0) || (reuse == 12 && side % 6 == 0);
  if (!ok) {
    throw std::invalid_argument("build_grid_network: reuse pattern does not tile a " +
                                std::to_string(side) + "x" + std::to_string(side) + " grid");
  }
}

}  // namespace

Topology build_grid_network(const GridParams& params, std::uint64_t seed) {
  if (params.cells_per_side < 1) {
    throw std::invalid_argument("build_grid_network: empty grid");
  }
  if (params.stas_per_ap < 1) {
    throw std::invalid_argument("build_grid_network: need at least one STA per AP");
  }
  check_tiling(params.reuse, params.cells_per_side);

  const int side = params.cells_per_side;
  Topology topo;
  topo.wraparound = true;
  topo.isd_m = params.isd_m;
  topo.cells_per_side = side;
  topo.n_cells = side * side;
  topo.stas_per_ap = params.stas_per_ap;
  topo.world_side = side * params.isd_m;
  topo.plan.reuse = params.reuse;
  topo.plan.channels_per_group = 12 / params.reuse;
  topo.plan.group_of_cell.resize(static_cast<std::size_t>(topo.n_cells));

  util::Rng rng(util::mix(seed, 0x746f706fULL));  // placement stream

  StationId next = 0;
  for (int cy = 0; cy < side; ++cy) {
    for (int cx = 0; cx < side; ++cx) {
      const int cell = cy * side + cx;
      const int group = reuse_group(params.reuse, cx, cy);
      topo.plan.group_of_cell[static_cast<std::size_t>(cell)] = group;
      Station ap;
      ap.id = next++;
      ap.role = Role::Ap;
      ap.cell = cell;
      ap.channel = group;
      ap.pos = {(cx + 0.5) * params.isd_m, (cy + 0.5) * params.isd_m};
      ap.serving_ap = ap.id;
      topo.stations.push_back(ap);
    }
  }
  for (int cell = 0; cell < topo.n_cells; ++cell) {
    const Station ap = topo.stations[static_cast<std::size_t>(cell)];
    for (int k = 0; k < params.stas_per_ap; ++k) {
      Station sta;
      sta.id = next++;
      sta.role = Role::Sta;
      sta.cell = cell;
      sta.channel = ap.channel;
      sta.serving_ap = ap.id;
      if (params.placement == StaPlacement::CellUniform) {
        const double cx0 = ap.pos.x - 0.5 * params.isd_m;
        const double cy0 = ap.pos.y - 0.5 * params.isd_m;
        sta.pos = {cx0 + rng.uniform() * params.isd_m, cy0 + rng.uniform() * params.isd_m};
      } else {
        const double rmax = params.disk_radius_m > 0.0 ? params.disk_radius_m
                                                       : params.disk_radius_fraction * params.isd_m;
        const double r = rmax * std::sqrt(rng.uniform());
        const double ang = 2.0 * std::numbers::pi * rng.uniform();
        double x = ap.pos.x + r * std::cos(ang);
        double y = ap.pos.y + r * std::sin(ang);
        // wrap into the world
        x = std::fmod(x + topo.world_side, topo.world_side);
        y = std::fmod(y + topo.world_side, topo.world_side);
        sta.pos = {x, y};
      }
      topo.stations.push_back(sta);
    }
  }
  return topo;
}

}  // namespace capsim::radio
