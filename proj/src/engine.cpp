// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#include "flextdd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <queue>
#include <tuple>

#include "flextdd/errors.hpp"
#include "flextdd/rng.hpp"

namespace flextdd {

cli_coupling cli_coupling::uniform(int n_cells, double value) {
  cli_coupling c;
  c.chi.assign(n_cells, std::vector<double>(n_cells, value));
  for (int i = 0; i < n_cells; ++i) c.chi[i][i] = 0.0;
  return c;
}

bool cli_coupling::empty_or_zero() const {
  for (const auto& row : chi) {
    for (double v : row) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

void cli_coupling::validate(int n_cells) const {
  if (chi.empty()) return;
  if (static_cast<int>(chi.size()) != n_cells) {
    throw config_error("cli.chi must be a " + std::to_string(n_cells) + "x" +
                       std::to_string(n_cells) + " matrix");
  }
  for (int i = 0; i < n_cells; ++i) {
    if (static_cast<int>(chi[i].size()) != n_cells) {
      throw config_error("cli.chi row " + std::to_string(i) + " has wrong length");
    }
    for (int j = 0; j < n_cells; ++j) {
      if (!(chi[i][j] >= 0.0 && chi[i][j] <= 1.0)) {
        throw config_error("cli.chi entries must be in [0,1]");
      }
    }
    if (chi[i][i] != 0.0) {
      throw config_error("cli.chi diagonal must be zero");
    }
  }
}

void sim_config::validate() const {
  if (n_cells < 1) throw config_error("n_cells must be >= 1");
  make_numerology(scs_khz);
  make_tti_grid(tti_symbols);
  if (duplex.gamma_slots < 1) throw config_error("duplex.gamma_slots must be >= 1");
  if (!(duplex.dl_bandwidth_fraction >= 0.0 && duplex.dl_bandwidth_fraction <= 1.0)) {
    throw config_error("duplex.dl_bandwidth_fraction must be in [0,1]");
  }
  if (!(duplex.guard_prb_fraction >= 0.0 && duplex.guard_prb_fraction <= 0.5)) {
    throw config_error("duplex.guard_prb_fraction must be in [0,0.5]");
  }
  if (traffic.k_dl < 0 || traffic.k_ul < 0) throw config_error("traffic.k must be >= 0");
  if (traffic.f_dl_bits < 0 || traffic.f_ul_bits < 0) {
    throw config_error("traffic payload sizes must be >= 0");
  }
  if (traffic.lambda_dl < 0.0 || traffic.lambda_ul < 0.0) {
    throw config_error("traffic.lambda must be >= 0");
  }
  delays.validate();
  if (n_prb < 1) throw config_error("n_prb must be >= 1");
  if (bits_per_prb_symbol < 1) throw config_error("bits_per_prb_symbol must be >= 1");
  // 1.0 is allowed so tests can force failures deterministically.
  if (!(bler_base >= 0.0 && bler_base <= 1.0) || !(bler_retx >= 0.0 && bler_retx <= 1.0)) {
    throw config_error("bler values must be in [0,1]");
  }
  for (double v : bler_per_attempt) {
    if (!(v >= 0.0 && v <= 1.0)) throw config_error("bler_per_attempt entries must be in [0,1]");
  }
  if (max_harq < 0) throw config_error("max_harq must be >= 0");
  cli.validate(n_cells);
  if (horizon_symbols <= 0) throw config_error("horizon_symbols must be > 0");
  for (const packet& p : trace) {
    if (p.arrival_symbol < 0 || p.arrival_symbol >= horizon_symbols) {
      throw config_error("trace packet " + std::to_string(p.id) +
                         " arrives outside the horizon");
    }
    if (p.size_bits <= 0) throw config_error("trace packet sizes must be > 0");
    if (p.cell_id < 0 || p.cell_id >= n_cells) {
      throw config_error("trace packet " + std::to_string(p.id) + " has invalid cell");
    }
  }
}

double sim_config::bler_for_attempt(int attempt) const {
  if (!bler_per_attempt.empty()) {
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(attempt - 1),
                                                  bler_per_attempt.size() - 1);
    return bler_per_attempt[idx];
  }
  return attempt == 1 ? bler_base : bler_retx;
}

const char* to_string(packet_outcome o) {
  switch (o) {
    case packet_outcome::delivered: return "delivered";
    case packet_outcome::dropped_max_harq: return "dropped_max_harq";
    default: return "in_flight";
  }
}

namespace {

enum class ev_kind : std::uint8_t {
  pattern_update = 0,
  arrival = 1,
  feedback = 2,
  scheduling = 3,
  tx_complete = 4,
};

struct event {
  std::int64_t time = 0;
  ev_kind kind = ev_kind::arrival;
  std::uint64_t seq = 0;
  std::int64_t payload = 0;
};

struct event_after {
  bool operator()(const event& a, const event& b) const {
    return std::tie(a.time, a.kind, a.seq) > std::tie(b.time, b.kind, b.seq);
  }
};

constexpr int kDl = 0;
constexpr int kUl = 1;

class engine {
public:
  explicit engine(const sim_config& cfg)
      : cfg_(cfg), num_(make_numerology(cfg.scs_khz)), grid_(make_tti_grid(cfg.tti_symbols)) {
    cfg_.validate();
    tdd_ = cfg_.duplex.kind == duplex_kind::dynamic_tdd;
    cli_active_ = tdd_ && !cfg_.cli.empty_or_zero();
    fdd_prb_[kDl] = static_cast<int>(
        std::lround(cfg_.duplex.dl_bandwidth_fraction * cfg_.n_prb));
    fdd_prb_[kUl] = cfg_.n_prb - fdd_prb_[kDl];
  }

  run_result execute();

private:
  struct pkt_state {
    packet pkt{};
    std::int64_t unallocated = 0;    // bits not yet handed to a window
    std::int64_t undelivered = 0;    // bits not yet successfully transmitted
    std::int64_t ready = -1;         // eligible-from; -1 while blocked
    std::int64_t attr_from = -1;     // start of the pending unattributed wait
    std::int64_t prev_completion = -1;
    std::int64_t current_seg_bits = 0;
    int attempt = 0;
    bool finished = false;
    packet_record rec{};
  };

  struct cell_state {
    std::deque<std::int32_t> queue[2];
    std::deque<std::int32_t> retx[2];
    std::int64_t z_bits[2] = {0, 0};
    std::vector<slot_format> adopted;
    cell_schedule view;
    prb_partition partition;
    // Disjoint, sorted, merged-when-adjacent busy window spans per direction.
    std::vector<std::pair<std::int64_t, std::int64_t>> busy[2];
    std::mt19937_64 outcome_rng;
  };

  struct chain_state {
    enum class stage : std::uint8_t { dg_sr, dg_grant, harq_dl_nack, harq_ul_nack };
    std::int32_t pkt = -1;
    stage st = stage::dg_sr;
    std::int64_t cursor = 0;
    bool done = false;
  };

  struct allocation {
    std::int32_t pkt = -1;
    int cell = 0;
    int dir = kDl;
    std::int64_t win_start = 0;
    int win_len = 0;
    std::int64_t bits = 0;
    int attempt = 1;
  };

  sim_config cfg_;
  numerology num_;
  tti_grid grid_;
  bool tdd_ = false;
  bool cli_active_ = false;
  int fdd_prb_[2] = {0, 0};

  std::vector<packet> arrivals_;
  std::vector<pkt_state> pkts_;
  std::vector<cell_state> cells_;
  std::vector<chain_state> chains_;
  std::vector<allocation> allocs_;
  std::priority_queue<event, std::vector<event>, event_after> events_;
  std::uint64_t seq_ = 0;
  std::uint64_t event_count_ = 0;
  std::int64_t known_until_ = 0;  // schedule defined for symbols < known_until_
  std::int64_t arrived_ = 0, delivered_ = 0, dropped_ = 0, live_ = 0;

  void push_event(std::int64_t time, ev_kind kind, std::int64_t payload) {
    if (time >= cfg_.horizon_symbols) return;
    events_.push(event{time, kind, seq_++, payload});
  }

  const cell_schedule& view(int cell) const { return cells_[cell].view; }

  bool capable(int cell, std::int64_t symbol, int dir) const {
    return view(cell).capable(symbol, dir == kDl);
  }

  // --- event handlers -----------------------------------------------------

  void on_pattern_update(std::int64_t now) {
    const std::int64_t period_symbols =
        static_cast<std::int64_t>(cfg_.duplex.gamma_slots) * kSymbolsPerSlot;
    for (int c = 0; c < cfg_.n_cells; ++c) {
      cell_state& cell = cells_[c];
      if (cfg_.audit) audit_buffers(c);
      const auto ratio =
          buffered_ratio(cell_buffers{cell.z_bits[kDl], cell.z_bits[kUl]});
      if (tdd_) {
        cell.adopted.push_back(select_slot_format(ratio));
        cell.view.periods.push_back(cell.adopted.back());
      } else {
        // Flexible FDD re-partitions PRBs; empty buffers fall back to the
        // equal split.
        cell.partition = flexfdd_partition(ratio.value_or(0.5), cfg_.n_prb,
                                           cfg_.duplex.guard_prb_fraction);
      }
    }
    if (tdd_) known_until_ = now + period_symbols;
    push_event(now + period_symbols, ev_kind::pattern_update, 0);
  }

  void on_arrival(std::int64_t index) {
    const packet& p = arrivals_[index];
    pkt_state& ps = pkts_[index];
    ++arrived_;
    ++live_;
    cell_state& cell = cells_[p.cell_id];
    const int dir = p.dir == direction::dl ? kDl : kUl;
    cell.z_bits[dir] += p.size_bits;
    if (p.dir == direction::dl) {
      ps.ready = p.arrival_symbol + cfg_.delays.bs_proc;
      ps.attr_from = ps.ready;
      ps.rec.breakdown.bs_proc = cfg_.delays.bs_proc;
      cell.queue[kDl].push_back(static_cast<std::int32_t>(index));
    } else if (cfg_.ul_scheme == ul_grant_scheme::grant_free) {
      ps.ready = p.arrival_symbol;
      ps.attr_from = ps.ready;
      cell.queue[kUl].push_back(static_cast<std::int32_t>(index));
    } else {
      chains_.push_back(chain_state{static_cast<std::int32_t>(index),
                                    chain_state::stage::dg_sr,
                                    p.arrival_symbol + cfg_.delays.ue_proc_dl, false});
      advance_chain(static_cast<std::int64_t>(chains_.size()) - 1);
    }
    if (index + 1 < static_cast<std::int64_t>(arrivals_.size())) {
      push_event(arrivals_[index + 1].arrival_symbol, ev_kind::arrival, index + 1);
    }
  }

  // Advances a grant or NACK feedback chain as far as the known schedule
  // allows; suspends until the next pattern update otherwise.
  void advance_chain(std::int64_t chain_id) {
    chain_state& ch = chains_[chain_id];
    if (ch.done) return;
    pkt_state& ps = pkts_[ch.pkt];
    const int c = ps.pkt.cell_id;
    const delay_config& d = cfg_.delays;
    const std::int64_t limit = known_until_;

    const auto suspend = [&] {
      if (limit < cfg_.horizon_symbols) {
        push_event(limit, ev_kind::feedback, chain_id);
      } else {
        ch.done = true;  // packet stays in flight past the horizon
      }
    };

    for (;;) {
      switch (ch.st) {
        case chain_state::stage::dg_sr: {
          const auto sr = next_sr_opportunity(view(c), grid_, ch.cursor,
                                              d.sr_periodicity_ttis, limit);
          if (!sr) return suspend();
          const std::int64_t sr_end = *sr + d.sr_tx;
          ch.cursor = std::max(sr_end + d.bs_proc,
                               sr_end + static_cast<std::int64_t>(d.sg_delay_ttis) *
                                            grid_.tti_symbols);
          ch.st = chain_state::stage::dg_grant;
          break;
        }
        case chain_state::stage::dg_grant: {
          const auto sg = next_dl_control(view(c), grid_, ch.cursor, limit);
          if (!sg) return suspend();
          const std::int64_t eligible = *sg + d.sg_tx + d.ue_proc_ul_prep;
          ps.ready = eligible;
          ps.attr_from = eligible;
          ps.rec.breakdown.dg = eligible - ps.pkt.arrival_symbol;
          cells_[c].queue[kUl].push_back(ch.pkt);
          ch.done = true;
          return;
        }
        case chain_state::stage::harq_dl_nack: {
          const auto opp = next_ul_control(view(c), grid_, ch.cursor, limit);
          if (!opp) return suspend();
          ps.ready = *opp + d.nack_tx_ul + d.bs_proc;
          cells_[c].retx[kDl].push_back(ch.pkt);
          ch.done = true;
          return;
        }
        case chain_state::stage::harq_ul_nack: {
          const auto opp = next_dl_control(view(c), grid_, ch.cursor, limit);
          if (!opp) return suspend();
          ps.ready = *opp + d.nack_tx_dl + d.ue_proc_dl;
          cells_[c].retx[kUl].push_back(ch.pkt);
          ch.done = true;
          return;
        }
      }
    }
  }

  struct win_cap {
    int usable = 0;
    std::int64_t capacity = 0;
  };

  win_cap window_capability(int cell, int dir, std::int64_t start, int len) const {
    int prbs;
    switch (cfg_.duplex.kind) {
      case duplex_kind::fdd: prbs = fdd_prb_[dir]; break;
      case duplex_kind::flexible_fdd:
        prbs = dir == kDl ? cells_[cell].partition.n_dl_prb
                          : cells_[cell].partition.n_ul_prb;
        break;
      default: prbs = cfg_.n_prb; break;
    }
    if (prbs <= 0) return {};
    win_cap out;
    if (!tdd_) {
      out.usable = len;
    } else {
      for (std::int64_t s = start; s < start + len; ++s) {
        if (capable(cell, s, dir)) ++out.usable;
      }
    }
    out.capacity = static_cast<std::int64_t>(out.usable) * prbs * cfg_.bits_per_prb_symbol;
    return out;
  }

  // Classifies the wait [ps.attr_from, now) of a packet about to transmit:
  // wrong-direction or guard symbols -> tdd_switch; right-direction symbols
  // overlapping a same-cell same-direction busy window -> queue; the rest
  // -> frame_align.
  void attribute_wait(pkt_state& ps, int cell, int dir, std::int64_t now) {
    const auto& busy = cells_[cell].busy[dir];
    auto it = std::upper_bound(
        busy.begin(), busy.end(), ps.attr_from,
        [](std::int64_t v, const auto& iv) { return v < iv.second; });
    for (std::int64_t s = ps.attr_from; s < now; ++s) {
      if (!capable(cell, s, dir)) {
        ++ps.rec.breakdown.tdd_switch;
        continue;
      }
      while (it != busy.end() && s >= it->second) ++it;
      if (it != busy.end() && s >= it->first && s < it->second) {
        ++ps.rec.breakdown.queue;
      } else {
        ++ps.rec.breakdown.frame_align;
      }
    }
    ps.attr_from = -1;
  }

  void mark_busy(int cell, int dir, std::int64_t start, std::int64_t end) {
    auto& busy = cells_[cell].busy[dir];
    if (!busy.empty() && busy.back().second == start) {
      busy.back().second = end;
    } else {
      busy.emplace_back(start, end);
    }
  }

  void emit_allocation(std::int32_t pkt, int cell, int dir, std::int64_t start,
                       int len, std::int64_t bits, int attempt) {
    allocs_.push_back(allocation{pkt, cell, dir, start, len, bits, attempt});
    // Outcome resolves at the window's last symbol so an abutting window can
    // pick up follow-on work; latency math uses the window end.
    push_event(start + len - 1, ev_kind::tx_complete,
               static_cast<std::int64_t>(allocs_.size()) - 1);
  }

  void allocate_window(int cell, int dir, std::int64_t start, int len) {
    const win_cap wc = window_capability(cell, dir, start, len);
    if (wc.capacity <= 0) return;
    std::int64_t cap = wc.capacity;
    bool any = false;

    const auto oldest_first = [this](std::int32_t a, std::int32_t b) {
      return std::tie(pkts_[a].pkt.arrival_symbol, pkts_[a].pkt.id) <
             std::tie(pkts_[b].pkt.arrival_symbol, pkts_[b].pkt.id);
    };

    cell_state& cs = cells_[cell];

    // HARQ retransmissions first, oldest packet first; a retransmission
    // that does not fit is skipped, never segmented.
    std::vector<std::int32_t> eligible;
    for (std::int32_t p : cs.retx[dir]) {
      const pkt_state& ps = pkts_[p];
      if (!ps.finished && ps.ready >= 0 && ps.ready <= start) eligible.push_back(p);
    }
    std::sort(eligible.begin(), eligible.end(), oldest_first);
    for (std::int32_t p : eligible) {
      pkt_state& ps = pkts_[p];
      if (ps.current_seg_bits > cap) continue;
      cap -= ps.current_seg_bits;
      ps.ready = -1;
      ++ps.attempt;
      std::erase(cs.retx[dir], p);
      emit_allocation(p, cell, dir, start, len, ps.current_seg_bits, ps.attempt);
      any = true;
      if (cap <= 0) break;
    }

    // New transmissions, oldest arrival first.
    if (cap > 0) {
      eligible.clear();
      for (std::int32_t p : cs.queue[dir]) {
        const pkt_state& ps = pkts_[p];
        if (!ps.finished && ps.ready >= 0 && ps.ready <= start) eligible.push_back(p);
      }
      std::sort(eligible.begin(), eligible.end(), oldest_first);
      for (std::int32_t p : eligible) {
        pkt_state& ps = pkts_[p];
        if (!cfg_.allow_segmentation && ps.unallocated > cap) break;
        const std::int64_t seg = std::min(ps.unallocated, cap);
        attribute_wait(ps, cell, dir, start);
        ps.current_seg_bits = seg;
        ps.attempt = 1;
        ps.prev_completion = -1;
        ps.unallocated -= seg;
        ps.ready = -1;
        ps.rec.breakdown.tx += len;
        if (ps.unallocated == 0) std::erase(cs.queue[dir], p);
        emit_allocation(p, cell, dir, start, len, seg, 1);
        cap -= seg;
        any = true;
        if (cap <= 0) break;
      }
    }

    if (any) mark_busy(cell, dir, start, start + len);
  }

  void on_scheduling(std::int64_t start) {
    const int len = grid_.window_length(start);
    for (int c = 0; c < cfg_.n_cells; ++c) {
      allocate_window(c, kDl, start, len);
      allocate_window(c, kUl, start, len);
    }
    push_event(start + len, ev_kind::scheduling, 0);
  }

  bool busy_at(int cell, int dir, std::int64_t s) const {
    const auto& busy = cells_[cell].busy[dir];
    auto it = std::upper_bound(
        busy.begin(), busy.end(), s,
        [](std::int64_t v, const auto& iv) { return v < iv.second; });
    return it != busy.end() && s >= it->first && s < it->second;
  }

  // Additive UL-BLER penalty at the victim: sum over aggressors of
  // chi * (fraction of the victim's used UL symbols on which the aggressor
  // transmits DL).
  double cli_penalty(const allocation& al) const {
    const auto& chi = cfg_.cli.chi;
    std::vector<std::int64_t> used;
    for (std::int64_t s = al.win_start; s < al.win_start + al.win_len; ++s) {
      if (capable(al.cell, s, kUl)) used.push_back(s);
    }
    if (used.empty()) return 0.0;
    double penalty = 0.0;
    for (int j = 0; j < cfg_.n_cells; ++j) {
      if (j == al.cell || chi[al.cell][j] == 0.0) continue;
      int overlap = 0;
      for (std::int64_t s : used) {
        if (capable(j, s, kDl) && busy_at(j, kDl, s)) ++overlap;
      }
      penalty += chi[al.cell][j] * static_cast<double>(overlap) /
                 static_cast<double>(used.size());
    }
    return penalty;
  }

  void finish_delivered(pkt_state& ps, std::int64_t completion) {
    const bool dl = ps.pkt.dir == direction::dl;
    const std::int64_t proc = dl ? cfg_.delays.ue_proc_dl : cfg_.delays.bs_proc;
    if (dl) {
      ps.rec.breakdown.ue_proc = proc;
    } else {
      ps.rec.breakdown.bs_proc = proc;
    }
    ps.rec.delivery_symbol = completion + proc;
    ps.rec.outcome = packet_outcome::delivered;
    ps.rec.breakdown.total_symbols = ps.rec.delivery_symbol - ps.pkt.arrival_symbol;
    ps.finished = true;
    ++delivered_;
    --live_;
    if (cfg_.audit && ps.rec.breakdown.total_symbols != ps.rec.breakdown.component_sum()) {
      throw std::logic_error("breakdown accounting identity violated");
    }
  }

  void drop_packet(std::int32_t pkt, int cell, int dir) {
    pkt_state& ps = pkts_[pkt];
    cells_[cell].z_bits[dir] -= ps.undelivered;
    if (ps.unallocated > 0) std::erase(cells_[cell].queue[dir], pkt);
    ps.rec.outcome = packet_outcome::dropped_max_harq;
    ps.rec.breakdown.total_symbols = ps.rec.breakdown.component_sum();
    ps.finished = true;
    ++dropped_;
    --live_;
  }

  void on_tx_complete(std::int64_t alloc_id) {
    const allocation al = allocs_[alloc_id];
    pkt_state& ps = pkts_[al.pkt];
    cell_state& cell = cells_[al.cell];
    const std::int64_t completion = al.win_start + al.win_len;

    const double p_base = cfg_.bler_for_attempt(al.attempt);
    const double penalty = (al.dir == kUl && cli_active_) ? cli_penalty(al) : 0.0;
    const double p_eff = std::min(1.0, p_base + penalty);
    const bool fail = uniform01(cell.outcome_rng) < p_eff;

    ++ps.rec.n_transmissions;
    if (al.attempt >= 2) {
      ps.rec.breakdown.harq += completion - ps.prev_completion;
    }
    ps.prev_completion = completion;

    if (!fail) {
      ps.undelivered -= al.bits;
      cell.z_bits[al.dir] -= al.bits;
      if (ps.undelivered == 0) {
        finish_delivered(ps, completion);
      } else {
        // Segment delivered; the remainder becomes eligible immediately.
        ps.ready = completion;
        ps.attr_from = completion;
        ps.attempt = 0;
        ps.current_seg_bits = 0;
        ps.prev_completion = -1;
      }
      return;
    }

    ps.rec.failures.push_back(penalty > p_base ? failure_cause::cli
                                               : failure_cause::channel);
    if (al.attempt >= cfg_.max_harq + 1) {
      drop_packet(al.pkt, al.cell, al.dir);
      return;
    }
    const bool dl = al.dir == kDl;
    chains_.push_back(chain_state{
        al.pkt,
        dl ? chain_state::stage::harq_dl_nack : chain_state::stage::harq_ul_nack,
        completion + (dl ? cfg_.delays.ue_proc_dl : cfg_.delays.bs_proc), false});
    advance_chain(static_cast<std::int64_t>(chains_.size()) - 1);
  }

  // --- audit helpers -------------------------------------------------------

  // Re-derives the buffer view from live packets; the perfect-knowledge
  // assumption requires the incremental Z counters to match exactly.
  void audit_buffers(int cell) const {
    std::int64_t z[2] = {0, 0};
    for (std::size_t i = 0; i < pkts_.size(); ++i) {
      const pkt_state& ps = pkts_[i];
      if (ps.finished || !arrived_yet_[i] || ps.pkt.cell_id != cell) continue;
      z[ps.pkt.dir == direction::dl ? kDl : kUl] += ps.undelivered;
    }
    if (z[kDl] != cells_[cell].z_bits[kDl] || z[kUl] != cells_[cell].z_bits[kUl]) {
      throw std::logic_error("buffer view diverged from live packet bits");
    }
  }

  void audit_conservation() const {
    if (arrived_ != delivered_ + dropped_ + live_) {
      throw std::logic_error(
          "conservation violated: arrived != delivered + dropped + in-flight");
    }
  }

  std::vector<bool> arrived_yet_;
};

run_result engine::execute() {
  // Arrival stream: explicit trace or generated FTP3 traffic.
  if (!cfg_.trace.empty()) {
    arrivals_ = cfg_.trace;
    std::sort(arrivals_.begin(), arrivals_.end(), [](const packet& a, const packet& b) {
      return std::tie(a.arrival_symbol, a.cell_id, a.ue_id, a.dir, a.id) <
             std::tie(b.arrival_symbol, b.cell_id, b.ue_id, b.dir, b.id);
    });
  } else {
    arrivals_ = generate_arrivals(cfg_.traffic, num_, cfg_.horizon_symbols,
                                  cfg_.seed, cfg_.n_cells);
  }

  pkts_.resize(arrivals_.size());
  arrived_yet_.assign(arrivals_.size(), false);
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    pkts_[i].pkt = arrivals_[i];
    pkts_[i].unallocated = arrivals_[i].size_bits;
    pkts_[i].undelivered = arrivals_[i].size_bits;
    pkts_[i].rec.pkt = arrivals_[i];
    pkts_[i].rec.breakdown.dir = arrivals_[i].dir;
  }

  cells_.resize(cfg_.n_cells);
  for (int c = 0; c < cfg_.n_cells; ++c) {
    cell_state& cell = cells_[c];
    switch (cfg_.duplex.kind) {
      case duplex_kind::fdd: cell.view = cell_schedule::fdd(); break;
      case duplex_kind::flexible_fdd: cell.view = cell_schedule::flexible_fdd(); break;
      case duplex_kind::dynamic_tdd:
        cell.view.kind = duplex_kind::dynamic_tdd;
        cell.view.gamma_slots = cfg_.duplex.gamma_slots;
        break;
    }
    cell.partition = flexfdd_partition(0.5, cfg_.n_prb, cfg_.duplex.guard_prb_fraction);
    cell.outcome_rng.seed(
        splitmix64(splitmix64(cfg_.seed ^ 0xC2B2AE3D27D4EB4Full) +
                   static_cast<std::uint64_t>(c)));
  }

  if (cfg_.duplex.kind == duplex_kind::fdd) {
    known_until_ = cfg_.horizon_symbols;
  } else if (cfg_.duplex.kind == duplex_kind::flexible_fdd) {
    known_until_ = cfg_.horizon_symbols;
    push_event(0, ev_kind::pattern_update, 0);
  } else {
    push_event(0, ev_kind::pattern_update, 0);
  }
  if (!arrivals_.empty()) {
    push_event(arrivals_[0].arrival_symbol, ev_kind::arrival, 0);
  }
  push_event(0, ev_kind::scheduling, 0);

  while (!events_.empty()) {
    const event ev = events_.top();
    events_.pop();
    if (ev.time >= cfg_.horizon_symbols) break;
    ++event_count_;
    switch (ev.kind) {
      case ev_kind::pattern_update: on_pattern_update(ev.time); break;
      case ev_kind::arrival:
        arrived_yet_[ev.payload] = true;
        on_arrival(ev.payload);
        break;
      case ev_kind::feedback: advance_chain(ev.payload); break;
      case ev_kind::scheduling: on_scheduling(ev.time); break;
      case ev_kind::tx_complete: on_tx_complete(ev.payload); break;
    }
    if (cfg_.audit) audit_conservation();
  }

  run_result result;
  result.event_count = event_count_;
  result.records.reserve(pkts_.size());
  for (pkt_state& ps : pkts_) {
    if (!ps.finished) {
      ps.rec.outcome = packet_outcome::in_flight;
      ps.rec.breakdown.total_symbols = ps.rec.breakdown.component_sum();
    }
    result.records.push_back(std::move(ps.rec));
  }

  result.realized_schedules.reserve(cells_.size());
  const std::int64_t n_slots =
      (cfg_.horizon_symbols + kSymbolsPerSlot - 1) / kSymbolsPerSlot;
  for (int c = 0; c < cfg_.n_cells; ++c) {
    if (tdd_) {
      result.realized_schedules.push_back(
          cell_schedule::dynamic_tdd(cfg_.duplex.gamma_slots, cells_[c].adopted));
      for (std::int64_t slot = 0; slot < n_slots; ++slot) {
        const std::size_t period = std::min<std::size_t>(
            static_cast<std::size_t>(slot / cfg_.duplex.gamma_slots),
            cells_[c].adopted.size() - 1);
        result.schedule_log.push_back(
            schedule_log_entry{c, slot, cells_[c].adopted[period].to_string()});
      }
    } else {
      result.realized_schedules.push_back(cfg_.duplex.kind == duplex_kind::fdd
                                              ? cell_schedule::fdd()
                                              : cell_schedule::flexible_fdd());
      for (std::int64_t slot = 0; slot < n_slots; ++slot) {
        result.schedule_log.push_back(
            schedule_log_entry{c, slot, std::string(kSymbolsPerSlot, 'B')});
      }
    }
  }
  return result;
}

}  // namespace

run_result run(const sim_config& cfg) { return engine(cfg).execute(); }

void write_records_csv(std::ostream& out, const run_result& result,
                       const numerology& num) {
  out << "id,cell,ue,dir,arrival_symbol,delivery_symbol,outcome,n_tx,bs_proc,"
         "queue,tdd_switch,frame_align,tx,dg,harq,ue_proc,total_symbols,total_us\n";
  char us[32];
  for (const packet_record& r : result.records) {
    std::snprintf(us, sizeof(us), "%.3f",
                  symbols_to_us(r.breakdown.total_symbols, num));
    out << r.pkt.id << ',' << r.pkt.cell_id << ',' << r.pkt.ue_id << ','
        << to_string(r.pkt.dir) << ',' << r.pkt.arrival_symbol << ','
        << r.delivery_symbol << ',' << to_string(r.outcome) << ','
        << r.n_transmissions << ',' << r.breakdown.bs_proc << ','
        << r.breakdown.queue << ',' << r.breakdown.tdd_switch << ','
        << r.breakdown.frame_align << ',' << r.breakdown.tx << ','
        << r.breakdown.dg << ',' << r.breakdown.harq << ','
        << r.breakdown.ue_proc << ',' << r.breakdown.total_symbols << ',' << us
        << '\n';
  }
}

void write_schedule_log(std::ostream& out, const run_result& result) {
  for (const schedule_log_entry& e : result.schedule_log) {
    out << e.cell << ',' << e.slot << ',' << e.format << '\n';
  }
}

}  // namespace flextdd
