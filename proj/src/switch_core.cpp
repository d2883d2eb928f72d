#include "l2sw/switch_core.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "l2sw/error.hpp"

namespace l2sw {

namespace {

constexpr std::size_t kMaxPorts = 8;

/// Fixed-size request vector viewed as a span of the first n clients.
class Requests {
 public:
  explicit Requests(std::size_t n) : n_(n) { bits_.fill(false); }
  bool& operator[](std::size_t i) { return bits_[i]; }
  std::span<const bool> view() const { return std::span<const bool>(bits_.data(), n_); }

 private:
  std::array<bool, 2 * kMaxPorts + 1> bits_{};
  std::size_t n_;
};

}  // namespace

void SwitchConfig::validate() const {
  if (ports < 2 || ports > kMaxPorts) {
    throw InputError("port count must be within 2..8, got " + std::to_string(ports));
  }
  BlockGeometry{blocks, block_payload}.validate();
  if (voq_depth == 0) throw InputError("VOQ depth must be at least 1");
  if (learn_entries == 0) throw InputError("learn table needs at least one entry");
  if (counter_bits == 0 || counter_bits > 8) throw InputError("counter width must be 1..8 bits");
  if (cdc_depth == 0) throw InputError("CDC depth must be at least 1");
  if (clock_ratio == 0) throw InputError("clock ratio must be at least 1");
  if (max_cycles == 0) throw InputError("max cycles must be at least 1");
}

std::optional<GmiiSymbol> CdcQueue::push(const GmiiSymbol& s, std::uint64_t now) {
  std::optional<GmiiSymbol> evicted;
  if (entries_.size() >= capacity_) {
    evicted = entries_.front().second;
    entries_.pop_front();
  }
  entries_.emplace_back(now + latency_, s);
  return evicted;
}

std::optional<GmiiSymbol> CdcQueue::pop(std::uint64_t now) {
  if (entries_.empty() || entries_.front().first > now) return std::nullopt;
  const GmiiSymbol s = entries_.front().second;
  entries_.pop_front();
  return s;
}

SwitchCore::SwitchCore(SwitchConfig config, const std::vector<IngressFrame>& trace)
    : config_((config.validate(), config)),
      ports_(config.ports),
      ingress_(config.ports),
      cdc_(config.ports, CdcQueue(config.cdc_depth, config.cdc_latency)),
      rx_(config.ports),
      wr_(config.ports, WriteController(config.block_payload)),
      rd_(config.ports, ReadController(config.blocks)),
      voqs_(config.ports, Voq(config.voq_depth)),
      tx_(config.ports, Tx(config.block_payload, config.cdc_depth)),
      sram_(BlockGeometry{config.blocks, config.block_payload}),
      free_list_(config.blocks, static_cast<unsigned>(std::max<std::size_t>(4, config.ports - 1))),
      table_(config.learn_entries, config.counter_bits),
      write_arb_(config.ports),
      read_arb_(config.ports),
      release_arb_(2 * config.ports + 1),
      table_arb_(2 * config.ports),
      alloc_queue_(config.ports),
      wr_ready_(config.ports, true),
      alloc_posted_(config.ports, false),
      tx_voq_ready_(config.ports, true),
      read_start_(config.ports),
      read_pull_(config.ports, false),
      frame_dst_(config.ports),
      learn_pending_(config.ports),
      route_pending_(config.ports),
      voq_push_(config.ports),
      monitors_(config.ports),
      last_pushed_dv_(config.ports, false),
      cdc_overflow_(config.ports) {
  std::vector<std::vector<ScheduledFrame>> per_port(ports_);
  for (const IngressFrame& f : trace) {
    if (f.port >= ports_) {
      throw InputError("ingress frame on port " + std::to_string(f.port) + " of a " +
                       std::to_string(ports_) + "-port switch");
    }
    per_port[f.port].push_back(ScheduledFrame{f.frame, f.corrupt_fcs, f.start_gmii_cycle});
  }
  for (std::size_t p = 0; p < ports_; ++p) {
    ingress_[p] = to_gmii_stream(per_port[p]);
    last_ingress_gmii_ = std::max<std::uint64_t>(last_ingress_gmii_, ingress_[p].size());
  }
  stats_.ports.resize(ports_);
  stats_.free_list_low_watermark = free_list_.free_count();
}

CycleRecord SwitchCore::step() {
  CycleRecord rec;
  rec.cycle = cycle_;
  rec.gmii_boundary = cycle_ % config_.clock_ratio == 0;
  const std::uint64_t gmii = cycle_ / config_.clock_ratio;
  rec.tx.assign(ports_, GmiiSymbol{});

  // (1) ingress sampling. Runs of idle symbols collapse to one; the parser
  // only reacts to the first.
  if (rec.gmii_boundary) {
    for (std::size_t p = 0; p < ports_; ++p) {
      const GmiiSymbol s = gmii < ingress_[p].size() ? ingress_[p][gmii] : GmiiSymbol{};
      if (s.dv || last_pushed_dv_[p]) cdc_overflow_[p] = cdc_[p].push(s, cycle_);
      last_pushed_dv_[p] = s.dv;
    }
  }

  // (2) grants
  std::optional<std::size_t> write_grant;
  {
    Requests req(ports_);
    for (std::size_t p = 0; p < ports_; ++p) req[p] = wr_[p].write_request().has_value();
    write_grant = write_arb_.grant(req.view());
  }
  std::optional<std::size_t> read_grant;
  {
    Requests req(ports_);
    for (std::size_t p = 0; p < ports_; ++p) req[p] = rd_[p].read_request().has_value();
    read_grant = read_arb_.grant(req.view());
  }
  std::optional<std::size_t> alloc_port;
  std::optional<BlockIndex> alloc_block;
  {
    Requests req(ports_);
    for (std::size_t p = 0; p < ports_; ++p) req[p] = alloc_posted_[p];
    std::fill(alloc_posted_.begin(), alloc_posted_.end(), false);
    alloc_port = alloc_queue_.grant(req.view(), !free_list_.empty());
    if (alloc_port) {
      alloc_block = free_list_.allocate();
      if (!alloc_block) throw InvariantViolation("allocation granted on an empty free list");
    }
  }
  std::optional<std::size_t> release_grant;
  {
    Requests req(2 * ports_ + 1);
    for (std::size_t p = 0; p < ports_; ++p) {
      req[p] = rd_[p].free_request().has_value();
      req[ports_ + p] = wr_[p].release_request().has_value();
    }
    req[2 * ports_] = !fixer_queue_.empty();
    release_grant = release_arb_.grant(req.view());
    if (release_grant) {
      const std::size_t g = *release_grant;
      BlockIndex idx;
      if (g < ports_) {
        idx = *rd_[g].free_request();
      } else if (g < 2 * ports_) {
        idx = *wr_[g - ports_].release_request();
      } else {
        idx = fixer_queue_.front();
        fixer_queue_.pop_front();
      }
      free_list_.release(idx);
    }
  }
  std::optional<std::size_t> table_grant;
  {
    Requests req(2 * ports_);
    for (std::size_t p = 0; p < ports_; ++p) {
      req[p] = learn_pending_[p].has_value();
      req[ports_ + p] = route_pending_[p].has_value() && !learn_pending_[p].has_value();
    }
    table_grant = table_arb_.grant(req.view());
  }

  // (3) RX
  std::vector<RxOutput> rx_out(ports_);
  for (std::size_t p = 0; p < ports_; ++p) {
    if (cdc_overflow_[p]) {
      rx_out[p] = rx_[p].tick(cdc_overflow_[p], false);
      cdc_overflow_[p].reset();
    } else if (wr_ready_[p]) {
      rx_out[p] = rx_[p].tick(cdc_[p].pop(cycle_), true);
    }
    if (rx_out[p].dst_ready) frame_dst_[p] = rx_out[p].dst;
    if (rx_out[p].src_ready) {
      if (learn_pending_[p]) throw InvariantViolation("second source learn queued on one port");
      learn_pending_[p] = rx_out[p].src;
    }
  }

  // (4) write controllers
  rec.wr_ready.resize(ports_);
  for (std::size_t p = 0; p < ports_; ++p) {
    WriteCtrlInputs in;
    in.rx = rx_out[p];
    if (alloc_port == p) in.alloc_grant = alloc_block;
    in.mem_write_grant = write_grant == p;
    in.release_grant = release_grant == ports_ + p;
    if (in.mem_write_grant) {
      const BlockWrite& w = *wr_[p].write_request();
      sram_.write_block(w.idx, w.block);
    }
    WriteCtrlOutputs out = wr_[p].tick(in);
    for (BlockIndex b : out.surrendered) free_list_.set_refcount(b, 1);
    if (out.cancel_alloc) alloc_queue_.cancel(p);
    alloc_posted_[p] = out.alloc_request;
    wr_ready_[p] = out.ready;
    rec.wr_ready[p] = out.ready;
    if (out.frame_done && !out.frame_done->error) {
      if (route_pending_[p]) throw InvariantViolation("second frame awaiting route on one port");
      route_pending_[p] = PendingRoute{std::move(*out.frame_done), frame_dst_[p]};
    }
  }

  // (5) learn / lookup / route
  std::fill(voq_push_.begin(), voq_push_.end(), std::nullopt);
  routed_.reset();
  routed_blocks_.clear();
  if (table_grant) {
    const std::size_t g = *table_grant;
    if (g < ports_) {
      const LearnOutcome outcome = table_.learn(*learn_pending_[g], g);
      learn_pending_[g].reset();
      ++stats_.learns;
      if (outcome.kind == LearnKind::Evicted) ++stats_.evictions;
    } else {
      handle_route(g - ports_);
    }
  }

  // (6) VOQs
  std::vector<std::optional<VoqEntry>> popped(ports_);
  bool leak_counted = false;
  for (std::size_t p = 0; p < ports_; ++p) {
    const VoqTickResult res = voqs_[p].tick(voq_push_[p], tx_voq_ready_[p]);
    popped[p] = res.popped;
    if (voq_push_[p] && !res.push_accepted) {
      ++stats_.ports[p].voq_drops;
      if (routed_->kind == RouteKind::Flood) ++stats_.flood_voq_drops;
      handle_voq_drop(routed_blocks_, leak_counted);
    }
  }

  // (7) read controllers
  std::vector<std::optional<DeliveredBlock>> delivered(ports_);
  std::optional<PortId> issuer;
  for (std::size_t p = 0; p < ports_; ++p) {
    ReadCtrlInputs in;
    in.start = read_start_[p];
    read_start_[p].reset();
    in.pull = read_pull_[p];
    read_pull_[p] = false;
    in.mem_read_grant = read_grant == p;
    if (read_issuer_ == p) {
      if (!sram_.read_data()) throw InvariantViolation("SRAM read returned no data");
      in.mem_read_data = sram_.read_data();
    }
    in.free_grant = release_grant == p;
    ReadCtrlOutputs out = rd_[p].tick(in);
    if (out.issue_read) {
      sram_.read_block(*out.issue_read);
      issuer = p;
    }
    delivered[p] = std::move(out.block_out);
  }
  read_issuer_ = issuer;

  // (8) TX and egress drain
  for (std::size_t p = 0; p < ports_; ++p) {
    const TxOutputs out = tx_[p].tick(TxInputs{popped[p], std::move(delivered[p])});
    read_start_[p] = out.start_read;
    read_pull_[p] = out.pull;
    if (rec.gmii_boundary) {
      rec.tx[p] = tx_[p].drain();
      const std::size_t before = egress_.size();
      observe_egress(p, rec.tx[p], gmii);
      rec.egress_completed += egress_.size() - before;
    }
    tx_voq_ready_[p] = tx_[p].voq_ready();
  }

  // (9) clock edge
  sram_.clock();
  free_list_.commit();

  // (10) audit
  audit();
  stats_.free_list_low_watermark = std::min(stats_.free_list_low_watermark, free_list_.free_count());
  rec.free_blocks = free_list_.free_count();
  ++cycle_;
  return rec;
}

void SwitchCore::handle_route(PortId ingress) {
  PendingRoute pending = std::move(*route_pending_[ingress]);
  route_pending_[ingress].reset();
  const std::optional<PortId> hit = table_.lookup(pending.dst);
  RouteDecision d =
      route(pending.frame.start(), pending.frame.length, ingress, hit, ports_);
  for (BlockIndex b : pending.frame.blocks) free_list_.set_refcount(b, d.refcount);
  for (PortId t : d.targets) voq_push_[t] = d.entry();
  if (d.kind == RouteKind::Flood) {
    ++stats_.floods;
  } else {
    ++stats_.unicasts;
  }
  routed_ = std::move(d);
  routed_blocks_ = std::move(pending.frame.blocks);
}

void SwitchCore::handle_voq_drop(const std::vector<BlockIndex>& blocks, bool& leak_counted) {
  if (config_.fix_flood_leak) {
    // one compensating release per block for the reference this queue lost
    fixer_queue_.insert(fixer_queue_.end(), blocks.begin(), blocks.end());
  } else if (!leak_counted) {
    stats_.leaked_blocks += blocks.size();
    leak_counted = true;
  }
}

void SwitchCore::observe_egress(PortId p, const GmiiSymbol& s, std::uint64_t gmii_cycle) {
  EgressMonitor& m = monitors_[p];
  if (s.dv) {
    if (!m.active) {
      m.active = true;
      m.first_cycle = gmii_cycle;
      m.bytes.clear();
    }
    m.bytes.push_back(s.data);
    return;
  }
  if (!m.active) return;
  m.active = false;
  EgressFrame f;
  f.port = p;
  f.first_gmii_cycle = m.first_cycle;
  const std::size_t pre = std::min(m.bytes.size(), kPreambleAndSfdLen);
  f.preamble_ok = pre == kPreambleAndSfdLen &&
                  std::all_of(m.bytes.begin(), m.bytes.begin() + kPreambleLen,
                              [](Byte b) { return b == kPreambleByte; }) &&
                  m.bytes[kPreambleLen] == kSfdByte;
  f.body.assign(m.bytes.begin() + static_cast<std::ptrdiff_t>(pre), m.bytes.end());
  egress_.push_back(std::move(f));
  ++stats_.ports[p].tx_frames;
}

bool SwitchCore::quiescent() const {
  if (cycle_ < (last_ingress_gmii_ + 1) * config_.clock_ratio) return false;
  for (std::size_t p = 0; p < ports_; ++p) {
    if (!cdc_[p].empty() || rx_[p].frame_active() || !wr_[p].quiescent() ||
        !rd_[p].quiescent() || !tx_[p].quiescent() || !voqs_[p].empty() ||
        learn_pending_[p] || route_pending_[p] || read_start_[p] || monitors_[p].active) {
      return false;
    }
  }
  return fixer_queue_.empty() && alloc_queue_.pending().empty();
}

void SwitchCore::audit() const {
  std::vector<unsigned> seen(config_.blocks, 0);
  for (BlockIndex b : free_list_.stack()) ++seen[b.value];
  for (std::size_t i = 0; i < config_.blocks; ++i) {
    if (free_list_.refcount(BlockIndex{static_cast<std::uint8_t>(i)}) > 0) ++seen[i];
  }
  for (std::size_t p = 0; p < ports_; ++p) {
    for (BlockIndex b : wr_[p].held_blocks()) {
      if (free_list_.refcount(b) != 0) {
        throw InvariantViolation("block " + std::to_string(b.value) +
                                 " held by a write controller has a refcount");
      }
      ++seen[b.value];
    }
    if (route_pending_[p]) {
      for (BlockIndex b : route_pending_[p]->frame.blocks) ++seen[b.value];
    }
  }
  for (std::size_t i = 0; i < config_.blocks; ++i) {
    if (seen[i] != 1) {
      throw InvariantViolation("cycle " + std::to_string(cycle_) + ": block " + std::to_string(i) +
                               " accounted " + std::to_string(seen[i]) + " times");
    }
  }
}

SwitchStats SwitchCore::stats() const {
  SwitchStats s = stats_;
  for (std::size_t p = 0; p < ports_; ++p) {
    const RxCounters& c = rx_[p].counters();
    s.ports[p].rx_frames = c.frames;
    s.ports[p].rx_crc_drops = c.crc_errors;
    s.ports[p].rx_backpressure_corruptions = c.backpressure_frames;
    s.ports[p].rx_gmii_errors = c.gmii_error_frames;
    s.ports[p].rx_runts = c.runts;
    s.wr_active_cycles += wr_[p].active_cycles();
    s.wr_stall_cycles += wr_[p].stall_cycles();
  }
  s.wr_stall_cycle_fraction =
      s.wr_active_cycles == 0 ? 0.0
                              : static_cast<double>(s.wr_stall_cycles) / static_cast<double>(s.wr_active_cycles);
  s.final_free_blocks = free_list_.free_count();
  s.cycles = cycle_;
  s.truncated = !quiescent();
  return s;
}

std::size_t SwitchCore::held_block_count() const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < ports_; ++p) {
    n += wr_[p].held_blocks().size();
    if (route_pending_[p]) n += route_pending_[p]->frame.blocks.size();
  }
  return n;
}

RunResult run(const SwitchConfig& config, const std::vector<IngressFrame>& trace) {
  SwitchCore core(config, trace);
  while (core.cycle() < config.max_cycles) {
    core.step();
    if (core.quiescent()) break;
  }
  RunResult result{core.egress(), core.stats()};

  if (!result.stats.truncated) {
    std::uint64_t tx_total = 0;
    std::uint64_t drops = 0;
    for (const PortStats& p : result.stats.ports) {
      tx_total += p.tx_frames;
      drops += p.voq_drops;
    }
    const std::uint64_t expected =
        result.stats.unicasts + result.stats.floods * (config.ports - 1) - drops;
    if (tx_total != expected) {
      throw InvariantViolation("delivered " + std::to_string(tx_total) + " frames, expected " +
                               std::to_string(expected));
    }
  }
  return result;
}

}  // namespace l2sw
