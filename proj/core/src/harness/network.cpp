#include "capsim/harness/network.hpp"

#include <algorithm>

#include "capsim/util/rng.hpp"

namespace capsim::harness {

using sim::EventKind;
using sim::SimTime;

namespace {
constexpr int kAckBytes = 14;

radio::Topology make_topology(const ScenarioConfig& cfg, std::uint64_t seed) {
  switch (cfg.scenario) {
    case ScenarioKind::SingleCell:
      return radio::build_small_network(1, cfg.topology.intercell_pl_db,
                                        cfg.topology.intracell_pl_db, cfg.topology.stas_per_ap);
    case ScenarioKind::SmallNetwork:
    case ScenarioKind::TimelineFig3:
    case ScenarioKind::TimelineFig4:
      return radio::build_small_network(cfg.topology.n_aps, cfg.topology.intercell_pl_db,
                                        cfg.topology.intracell_pl_db, cfg.topology.stas_per_ap);
    case ScenarioKind::Grid:
    case ScenarioKind::LteBaseline: {
      radio::GridParams gp;
      gp.cells_per_side = cfg.topology.grid_side;
      gp.isd_m = cfg.topology.isd_m;
      gp.reuse = cfg.topology.reuse;
      gp.stas_per_ap = cfg.topology.stas_per_ap;
      gp.placement = cfg.topology.sta_placement == "cell_uniform"
                         ? radio::StaPlacement::CellUniform
                         : radio::StaPlacement::Disk;
      gp.disk_radius_fraction = cfg.topology.disk_radius_fraction;
      gp.disk_radius_m = cfg.topology.disk_radius_m;
      return radio::build_grid_network(gp, seed);
    }
    default:
      throw ConfigError("scenario has no event-driven network");
  }
}

radio::RadioParams make_radio_params(const ScenarioConfig& cfg, bool fixed_pathloss) {
  radio::RadioParams rp;
  rp.pathloss.wavelength_m = cfg.radio.wavelength_m;
  rp.pathloss.absorption_per_m = cfg.radio.absorption_per_m;
  rp.pathloss.min_distance_m = cfg.radio.min_distance_m;
  rp.shadowing_sigma_db = fixed_pathloss ? 0.0 : cfg.radio.shadowing_sigma_db;
  rp.fading.enabled = cfg.radio.fading;
  rp.fading.doppler_hz = cfg.radio.doppler_hz;
  return rp;
}
}  // namespace

Network::Network(const ScenarioConfig& cfg, std::uint64_t run_seed, bool trace_phy,
                 bool trace_mac)
    : cfg_(cfg), seed_(run_seed), topo_(make_topology(cfg, run_seed)) {
  links_ = std::make_unique<radio::LinkModel>(topo_, make_radio_params(cfg, topo_.fixed_pathloss),
                                              run_seed);
  trace_.phy_enabled = trace_phy;
  trace_.mac_enabled = trace_mac;

  const auto& ack_mcs = phy::mcs_by_rate(24);
  const SimTime ack_air = phy::frame_airtime(kAckBytes, ack_mcs);
  const int frame_bytes = cfg.mac.payload_bytes + cfg.mac.header_bytes;

  phy_params_.noise_dbm = cfg.radio.noise_dbm;
  phy_params_.ed_threshold_dbm = cfg.radio.ed_threshold_dbm;
  phy_params_.detection_floor_dbm = cfg.radio.detection_floor_dbm;
  phy_params_.header_gate_db = cfg.radio.header_gate_db;
  phy_params_.p_falsepass = cfg.phy.p_falsepass;
  phy_params_.logistic_per = cfg.phy.logistic_per;
  phy_params_.logistic_width_db = cfg.phy.logistic_width_db;
  phy_params_.max_nav = phy::frame_airtime(frame_bytes, phy::mcs_by_rate(6));
  phy_params_.ack_airtime = ack_air;

  mac_params_.cw_min = cfg.mac.cw_min;
  mac_params_.cw_max = cfg.mac.cw_max;
  mac_params_.retry_limit = cfg.mac.retry_limit;
  mac_params_.payload_bytes = cfg.mac.payload_bytes;
  mac_params_.header_bytes = cfg.mac.header_bytes;
  mac_params_.ack_airtime = ack_air;

  warmup_end_ = SimTime::seconds(cfg.warmup_s);
  horizon_ = SimTime::seconds(cfg.warmup_s + cfg.duration_s);

  media_.resize(static_cast<std::size_t>(topo_.n_channels()));
  accounting_.resize(media_.size());
  channel_members_.resize(media_.size());
  for (const auto& st : topo_.stations) {
    channel_members_[static_cast<std::size_t>(st.channel)].push_back(st.id);
  }
  build_stations();
}

Network::~Network() = default;

void Network::build_stations() {
  const std::size_t n = topo_.stations.size();
  receivers_.resize(n);
  macs_.resize(n);
  rate_mgrs_.resize(n);

  for (const auto& st : topo_.stations) {
    const auto id = st.id;
    if (cfg_.mac.rate_mode == RateMode::Fixed) {
      rate_mgrs_[id] = std::make_unique<mac::FixedRate>(cfg_.mac.fixed_rate_mbps);
    } else {
      rate_mgrs_[id] = std::make_unique<mac::MinstrelRate>(util::mix(seed_, 0x72617465ULL, id));
    }
    receivers_[id] = std::make_unique<phy::ReceiverProcess>(
        sim_, media_[st.channel], *links_, phy_params_, id, util::mix(seed_, 0x7278ULL, id),
        trace_);
    macs_[id] = std::make_unique<mac::StationMac>(sim_, mac_params_, id, *rate_mgrs_[id],
                                                  util::mix(seed_, 0x6d6163ULL, id), trace_);
    delivered_payload_bits_[id];  // flows report zero goodput if never served

    phy::ReceiverProcess::Callbacks cb;
    cb.on_nav_set = [this, id](SimTime until) { macs_[id]->on_nav_set(until); };
    cb.on_frame_complete = [this, id](const phy::Transmission& tx, bool ok) {
      deliver(id, tx, ok);
    };
    cb.on_cca_change = [this, id](bool busy) { macs_[id]->on_phy_cca(busy); };
    receivers_[id]->set_callbacks(std::move(cb));

    mac::StationMac::Hooks hooks;
    hooks.start_data_tx = [this, id](radio::StationId dest, const phy::Mcs& mcs,
                                     std::uint64_t seq) {
      return begin_data_tx(id, dest, mcs, seq);
    };
    hooks.start_ack_tx = [this, id](radio::StationId dest, int ack_for) {
      begin_ack_tx(id, dest, ack_for);
    };
    macs_[id]->set_hooks(std::move(hooks));
  }
  // Only STA flows appear in the throughput report.
  for (auto it = delivered_payload_bits_.begin(); it != delivered_payload_bits_.end();) {
    if (topo_.at(it->first).role != radio::Role::Sta) {
      it = delivered_payload_bits_.erase(it);
    } else {
      ++it;
    }
  }
}

void Network::start_traffic() {
  if (cfg_.mac.traffic == TrafficDirection::Uplink) {
    for (const auto& st : topo_.stations) {
      if (st.role == radio::Role::Sta) macs_[st.id]->start_saturated({st.serving_ap});
    }
  } else {
    for (const auto ap : topo_.aps()) {
      auto stas = topo_.stas_of(ap);
      if (!stas.empty()) macs_[ap]->start_saturated(std::move(stas));
    }
  }
}

int Network::begin_data_tx(radio::StationId src, radio::StationId dest, const phy::Mcs& mcs,
                           std::uint64_t flow_seq) {
  phy::Transmission tx;
  tx.source = src;
  tx.destination = dest;
  tx.source_cell = topo_.at(src).cell;
  tx.channel = topo_.at(src).channel;
  tx.type = phy::FrameType::Data;
  tx.tx_power_dbm = cfg_.radio.tx_power_dbm;
  tx.mcs = mcs;
  tx.payload_bytes = cfg_.mac.payload_bytes + cfg_.mac.header_bytes;
  tx.flow_seq = flow_seq;
  tx.start = sim_.now();
  tx.preamble_end = tx.start + sim::kPreamble;
  tx.header_end = tx.preamble_end + sim::kPlcpHeader;
  tx.end = tx.start + phy::frame_airtime(tx.payload_bytes, mcs);
  return launch(tx);
}

void Network::begin_ack_tx(radio::StationId src, radio::StationId dest, int ack_for_tx_id) {
  phy::Transmission tx;
  tx.source = src;
  tx.destination = dest;
  tx.source_cell = topo_.at(src).cell;
  tx.channel = topo_.at(src).channel;
  tx.type = phy::FrameType::Ack;
  tx.tx_power_dbm = cfg_.radio.tx_power_dbm;
  tx.mcs = phy::mcs_by_rate(24);
  tx.payload_bytes = kAckBytes;
  tx.ack_for_tx_id = ack_for_tx_id;
  tx.start = sim_.now();
  tx.preamble_end = tx.start + sim::kPreamble;
  tx.header_end = tx.preamble_end + sim::kPlcpHeader;
  tx.end = tx.start + phy::frame_airtime(tx.payload_bytes, tx.mcs);
  launch(tx);
}

int Network::launch(phy::Transmission tx) {
  tx.id = next_tx_id_++;
  auto& medium = media_[static_cast<std::size_t>(tx.channel)];
  // Every medium must drop its stale pointers before the shared pool frees
  // the transmissions behind them.
  for (auto& m : media_) m.retire_before(sim_.now());
  while (!tx_pool_.empty() && tx_pool_.front().end + sim::SimTime::ms(10) < sim_.now()) {
    tx_pool_.pop_front();
  }

  account_channel(tx.channel, +1, &tx);
  tx_pool_.push_back(tx);
  phy::Transmission* ptr = &tx_pool_.back();
  medium.add(ptr);

  trace_.phy_log(sim_.now(), tx.source, phy::PhyEvent::TxStart, tx.id);
  receivers_[tx.source]->suspend_for_tx();
  for (const auto id : channel_members_[static_cast<std::size_t>(tx.channel)]) {
    if (id != tx.source) receivers_[id]->on_tx_added(*ptr);
  }
  sim_.schedule(ptr->end, EventKind::TxEnd, tx.source, [this, ptr] { finish_tx(ptr); });
  return ptr->id;
}

void Network::finish_tx(const phy::Transmission* tx) {
  account_channel(tx->channel, -1, nullptr);
  trace_.phy_log(sim_.now(), tx->source, phy::PhyEvent::TxEnd, tx->id);
  receivers_[tx->source]->resume_after_tx();
  for (const auto id : channel_members_[static_cast<std::size_t>(tx->channel)]) {
    if (id != tx->source) receivers_[id]->on_tx_ended(*tx);
  }
  if (tx->type == phy::FrameType::Data) {
    macs_[tx->source]->on_own_data_tx_end();
  } else {
    macs_[tx->source]->on_own_ack_tx_end();
  }
}

void Network::account_channel(int channel, int delta_on_air, const phy::Transmission* added) {
  auto& acc = accounting_[static_cast<std::size_t>(channel)];
  const SimTime now = sim_.now();
  const SimTime t0 = std::max(acc.last_change, warmup_end_);
  if (now > t0 && acc.on_air >= 1) {
    const double dt = (now - t0).to_seconds();
    acc.stats.busy_s += dt;
    if (acc.on_air >= 2) {
      acc.stats.overlap_s += dt;
      int cells_active = 0;
      for (const auto& [cell, cnt] : acc.on_air_per_cell) {
        if (cnt > 0) ++cells_active;
      }
      if (cells_active >= 2) acc.stats.cross_cell_overlap_s += dt;
    }
  }
  acc.last_change = now;

  if (added != nullptr) {
    // A start strictly inside a foreign-cell packet means carrier sense did
    // not (or could not) hold this station off.
    const auto& medium = media_[static_cast<std::size_t>(channel)];
    for (const auto* other : medium.entries()) {
      if (other->source_cell != added->source_cell && other->start < now &&
          other->on_air_at(now)) {
        acc.stats.midflight_cross_cell_starts += 1;
        break;
      }
    }
    acc.on_air_per_cell[added->source_cell] += 1;
    acc.on_air += 1;
  } else if (delta_on_air < 0) {
    acc.on_air -= 1;
    // Recompute per-cell occupancy from the ledger; the ended packet no
    // longer counts as on air at its own end instant.
    auto& medium = media_[static_cast<std::size_t>(channel)];
    std::map<int, int> fresh;
    for (const auto* e : medium.entries()) {
      if (e->on_air_at(now)) fresh[e->source_cell] += 1;
    }
    acc.on_air_per_cell = std::move(fresh);
  }
}

void Network::deliver(radio::StationId receiver, const phy::Transmission& tx, bool ok) {
  if (tx.type == phy::FrameType::Data && ok && tx.destination == receiver) {
    const radio::StationId owner =
        topo_.at(tx.source).role == radio::Role::Sta ? tx.source : tx.destination;
    // Retry duplicates carry the same flow_seq and are ACKed but not counted.
    auto& next_expected = last_delivered_seq_[owner];
    if (tx.flow_seq >= next_expected) {
      next_expected = tx.flow_seq + 1;
      if (sim_.now() > warmup_end_) {
        delivered_payload_bits_[owner] += static_cast<std::int64_t>(cfg_.mac.payload_bytes) * 8;
      }
    }
  }
  macs_[receiver]->on_frame_complete(tx, ok);
}

void Network::fading_tick() {
  for (std::size_t ch = 0; ch < media_.size(); ++ch) {
    media_[ch].retire_before(sim_.now());
    if (media_[ch].on_air_count(sim_.now()) == 0) continue;
    for (const auto id : channel_members_[ch]) receivers_[id]->on_fading_tick();
  }
  sim_.schedule_in(links_->params().fading.sample_interval, EventKind::FadingUpdate, -1,
                   [this] { fading_tick(); });
}

void Network::rate_update_tick() {
  for (auto& mgr : rate_mgrs_) mgr->update_stats();
  sim_.schedule_in(SimTime::seconds(cfg_.mac.rate_update_interval_s), EventKind::RateUpdate, -1,
                   [this] { rate_update_tick(); });
}

RunSummary Network::run() {
  if (links_->fading_enabled()) {
    sim_.schedule_in(links_->params().fading.sample_interval, EventKind::FadingUpdate, -1,
                     [this] { fading_tick(); });
  }
  if (cfg_.mac.rate_mode == RateMode::Minstrel) {
    sim_.schedule_in(SimTime::seconds(cfg_.mac.rate_update_interval_s), EventKind::RateUpdate, -1,
                     [this] { rate_update_tick(); });
  }
  start_traffic();
  const std::uint64_t events = sim_.run_until(horizon_);
  for (std::size_t ch = 0; ch < media_.size(); ++ch) {
    account_channel(static_cast<int>(ch), 0, nullptr);  // flush trailing airtime
  }

  RunSummary out;
  out.events_processed = events;
  out.report.duration_s = cfg_.duration_s;
  out.report.channels_per_group = topo_.plan.channels_per_group;
  for (const auto& [sta, bits] : delivered_payload_bits_) {
    analytics::FlowResult f;
    f.sta = sta;
    f.cell = topo_.at(sta).cell;
    f.goodput_mbps = static_cast<double>(bits) / cfg_.duration_s / 1e6;
    out.report.per_sta.push_back(f);
  }
  for (const auto& acc : accounting_) out.overlap += acc.stats;
  out.trace = std::move(trace_);
  return out;
}

}  // namespace capsim::harness
