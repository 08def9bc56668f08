// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#include "flextdd/latency_analytic.hpp"

#include <algorithm>
#include <sstream>

#include "flextdd/errors.hpp"

namespace flextdd {

void delay_config::validate() const {
  if (bs_proc < 0 || ue_proc_dl < 0 || ue_proc_ul_prep < 0 || nack_tx_dl < 0 ||
      nack_tx_ul < 0 || sr_tx < 0 || sg_tx < 0 || sg_delay_ttis < 0) {
    throw config_error("delay_config: all delays must be >= 0");
  }
  if (ue_proc_ul_prep <= ue_proc_dl) {
    throw config_error("delay_config: ue_proc_ul_prep must exceed ue_proc_dl");
  }
  if (sr_periodicity_ttis < 1) {
    throw config_error("delay_config: sr_periodicity_ttis must be >= 1");
  }
  if (!(target_bler >= 0.0 && target_bler < 1.0)) {
    throw config_error("delay_config: target_bler must be in [0,1)");
  }
}

delay_config table1_delays(ue_capability cap) {
  delay_config d;
  if (cap == ue_capability::slow) {
    d.ue_proc_dl = 9;
    d.ue_proc_ul_prep = 11;
  }
  return d;
}

delay_config reference_timeline_delays() {
  delay_config d;
  d.bs_proc = 2;
  d.ue_proc_dl = 6;
  d.ue_proc_ul_prep = 8;
  d.nack_tx_dl = 0;
  d.nack_tx_ul = 1;
  d.sr_tx = 0;
  d.sg_tx = 0;
  d.sr_periodicity_ttis = 1;
  d.sg_delay_ttis = 0;
  return d;
}

namespace {

struct wait_split {
  std::int64_t tdd = 0;
  std::int64_t fa = 0;
};

struct tx_window {
  std::int64_t start = 0;
  int length = 0;
  wait_split wait;
};

/// Earliest TTI window starting at or after `ready` with at least one
/// usable symbol for the direction. The wait is classified per symbol:
/// wrong direction or guard -> tdd_switch, right direction -> frame_align.
tx_window find_tx_window(const cell_schedule& sched, const tti_grid& grid,
                         bool dl, std::int64_t ready, std::int64_t limit) {
  for (std::int64_t w = grid.next_window_start(ready); w < limit;
       w += grid.window_length(w)) {
    const int len = grid.window_length(w);
    bool usable = false;
    for (std::int64_t s = w; s < w + len && !usable; ++s) {
      usable = sched.capable(s, dl);
    }
    if (!usable) continue;
    tx_window out{w, len, {}};
    for (std::int64_t s = ready; s < w; ++s) {
      if (sched.capable(s, dl)) {
        ++out.wait.fa;
      } else {
        ++out.wait.tdd;
      }
    }
    return out;
  }
  throw starvation_error(std::string("no usable ") + (dl ? "DL" : "UL") +
                         " TTI window before the search limit");
}

std::int64_t require(std::optional<std::int64_t> symbol, const char* what) {
  if (!symbol) {
    throw starvation_error(std::string("no ") + what + " before the search limit");
  }
  return *symbol;
}

}  // namespace

latency_breakdown dl_latency(const delay_config& delays, const cell_schedule& sched,
                             const tti_grid& grid, std::int64_t arrival_symbol,
                             int n_harq, std::int64_t search_limit) {
  delays.validate();
  latency_breakdown b;
  b.dir = direction::dl;
  b.bs_proc = delays.bs_proc;

  const tx_window first =
      find_tx_window(sched, grid, true, arrival_symbol + delays.bs_proc, search_limit);
  b.tdd_switch = first.wait.tdd;
  b.frame_align = first.wait.fa;
  b.tx = first.length;
  std::int64_t tx_end = first.start + first.length;

  for (int k = 0; k < n_harq; ++k) {
    const std::int64_t chain_start = tx_end;
    // UE identifies the corrupted block, NACKs at the next UL control
    // opportunity, BS re-queues after processing.
    const std::int64_t nack_opp = require(
        next_ul_control(sched, grid, chain_start + delays.ue_proc_dl, search_limit),
        "UL control opportunity");
    const std::int64_t requeued = nack_opp + delays.nack_tx_ul + delays.bs_proc;
    const tx_window retx = find_tx_window(sched, grid, true, requeued, search_limit);
    tx_end = retx.start + retx.length;
    b.harq += tx_end - chain_start;
  }

  b.ue_proc = delays.ue_proc_dl;
  b.total_symbols = tx_end + delays.ue_proc_dl - arrival_symbol;
  return b;
}

latency_breakdown ul_latency(const delay_config& delays, const cell_schedule& sched,
                             const tti_grid& grid, std::int64_t arrival_symbol,
                             int n_harq, ul_grant_scheme scheme,
                             std::int64_t search_limit) {
  delays.validate();
  latency_breakdown b;
  b.dir = direction::ul;

  std::int64_t eligible = arrival_symbol;
  if (scheme == ul_grant_scheme::dynamic_grant) {
    const std::int64_t sr_ready = arrival_symbol + delays.ue_proc_dl;
    const std::int64_t sr = require(
        next_sr_opportunity(sched, grid, sr_ready, delays.sr_periodicity_ttis,
                            search_limit),
        "SR opportunity");
    const std::int64_t sr_end = sr + delays.sr_tx;
    const std::int64_t grant_ready =
        std::max(sr_end + delays.bs_proc,
                 sr_end + static_cast<std::int64_t>(delays.sg_delay_ttis) *
                              grid.tti_symbols);
    const std::int64_t sg =
        require(next_dl_control(sched, grid, grant_ready, search_limit),
                "DL control opportunity for the scheduling grant");
    eligible = sg + delays.sg_tx + delays.ue_proc_ul_prep;
    b.dg = eligible - arrival_symbol;
  }

  const tx_window first = find_tx_window(sched, grid, false, eligible, search_limit);
  b.tdd_switch = first.wait.tdd;
  b.frame_align = first.wait.fa;
  b.tx = first.length;
  std::int64_t tx_end = first.start + first.length;

  for (int k = 0; k < n_harq; ++k) {
    const std::int64_t chain_start = tx_end;
    // BS identifies the corrupted block, NACKs the UE on the DL control
    // channel, UE turns the retransmission around.
    const std::int64_t nack_opp = require(
        next_dl_control(sched, grid, chain_start + delays.bs_proc, search_limit),
        "DL control opportunity");
    const std::int64_t ue_ready = nack_opp + delays.nack_tx_dl + delays.ue_proc_dl;
    const tx_window retx = find_tx_window(sched, grid, false, ue_ready, search_limit);
    tx_end = retx.start + retx.length;
    b.harq += tx_end - chain_start;
  }

  b.bs_proc = delays.bs_proc;  // final decode at the BS
  b.total_symbols = tx_end + delays.bs_proc - arrival_symbol;
  return b;
}

double expected_latency(const latency_breakdown& first_tx,
                        std::int64_t harq_chain_symbols, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw config_error("expected_latency: alpha must be in [0,1)");
  }
  if (harq_chain_symbols < 0) {
    throw config_error("expected_latency: harq chain must be >= 0 symbols");
  }
  return static_cast<double>(first_tx.total_symbols) +
         alpha * static_cast<double>(harq_chain_symbols);
}

std::string format_timeline(const latency_breakdown& b) {
  struct row {
    const char* name;
    std::int64_t len;
  };
  const row rows_dl[] = {{"bs_proc", b.bs_proc},         {"queue", b.queue},
                         {"tdd_switch", b.tdd_switch},   {"frame_align", b.frame_align},
                         {"tx", b.tx},                   {"harq", b.harq},
                         {"ue_proc", b.ue_proc}};
  const row rows_ul[] = {{"dg", b.dg},                   {"queue", b.queue},
                         {"tdd_switch", b.tdd_switch},   {"frame_align", b.frame_align},
                         {"tx", b.tx},                   {"harq", b.harq},
                         {"bs_proc", b.bs_proc}};
  std::ostringstream out;
  out << (b.dir == direction::dl ? "DL" : "UL") << " latency, "
      << b.total_symbols << " symbols total (stacked view)\n";
  std::int64_t at = 0;
  for (const row& r : (b.dir == direction::dl ? rows_dl : rows_ul)) {
    if (r.len == 0) continue;
    out << "  " << r.name;
    for (std::size_t pad = std::string(r.name).size(); pad < 12; ++pad) out << ' ';
    out << "[" << at << ", " << at + r.len << ")  " << r.len << "\n";
    at += r.len;
  }
  return out.str();
}

}  // namespace flextdd
