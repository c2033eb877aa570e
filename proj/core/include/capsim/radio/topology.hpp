#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capsim/radio/geometry.hpp"

namespace capsim::radio {

using StationId = int;

enum class Role { Ap, Sta };

struct Station {
  StationId id = -1;
  Role role = Role::Sta;
  Position pos;
  int cell = -1;
  int channel = -1;        // channel group index; co-channel == same value
  StationId serving_ap = -1;  // for STAs; the AP's own id for APs
};

/// Channel group assignment over grid cells. Reuse 4 tiles 2x2; reuse 12 uses
/// diagonal cosets (x mod 2, (x - y) mod 6) so that same-group cells sit at
/// the maximal separation the square lattice allows (2*sqrt(2) * ISD).
struct FrequencyPlan {
  int reuse = 12;
  int channels_per_group = 1;  // 12 available 20 MHz channels / reuse
  std::vector<int> group_of_cell;
};

enum class StaPlacement {
  CellUniform,  // uniform over the AP's square cell
  Disk,         // uniform over a disk around the AP
};

struct Topology {
  std::vector<Station> stations;
  double world_side = 0.0;
  bool wraparound = false;
  double isd_m = 0.0;
  int cells_per_side = 0;
  int n_cells = 0;
  int stas_per_ap = 0;
  FrequencyPlan plan;

  // Small-network mode: propagation is given by two fixed pathloss values
  // instead of geometry.
  bool fixed_pathloss = false;
  double intercell_pl_db = 0.0;
  double intracell_pl_db = 0.0;

  std::vector<StationId> aps() const;
  std::vector<StationId> stas_of(StationId ap) const;
  const Station& at(StationId id) const { return stations.at(static_cast<std::size_t>(id)); }
  int n_channels() const;
};

/// Two to four co-channel cells whose propagation is specified directly by
/// fixed inter-/intra-cell pathloss values rather than by coordinates.
Topology build_small_network(int n_aps, double intercell_pl_db, double intracell_pl_db,
                             int stas_per_ap);

struct GridParams {
  int cells_per_side = 6;
  double isd_m = 40.0;
  int reuse = 12;
  int stas_per_ap = 4;
  StaPlacement placement = StaPlacement::Disk;
  double disk_radius_fraction = 0.2;  // of ISD, used when disk_radius_m == 0
  // Absolute user scatter radius; users keep their physical spread while the
  // grid densifies, which is what makes per-user SINR fall with density.
  double disk_radius_m = 8.0;
};

/// APs on a square grid at cell centers, STAs placed around them, channel
/// groups in the repeating reuse pattern, wraparound enabled.
/// Throws std::invalid_argument when the reuse pattern cannot tile the grid.
Topology build_grid_network(const GridParams& params, std::uint64_t seed);

}  // namespace capsim::radio
