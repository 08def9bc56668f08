// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "flextdd/duplexing.hpp"
#include "flextdd/numerology.hpp"
#include "flextdd/traffic.hpp"

namespace flextdd {

/// Fixed signalling and processing delays, in whole OFDM symbols.
struct delay_config {
  std::int64_t bs_proc = 2;          // BS processing, both directions
  std::int64_t ue_proc_dl = 5;       // UE decode / NACK-turnaround processing
  std::int64_t ue_proc_ul_prep = 6;  // UE grant decode + UL transport block prep
  std::int64_t nack_tx_dl = 1;       // NACK transmission BS -> UE
  std::int64_t nack_tx_ul = 1;       // NACK transmission UE -> BS
  std::int64_t sr_tx = 1;            // scheduling request transmission
  std::int64_t sg_tx = 1;            // scheduling grant transmission
  int sr_periodicity_ttis = 16;      // SR opportunity recurrence
  int sg_delay_ttis = 4;             // minimum SR-end to SG spacing
  double target_bler = 0.01;         // alpha of the expected-latency weighting

  void validate() const;  // config_error on violation
};

enum class ue_capability { fast, slow };

/// Table-style UE processing presets: fast decodes in 5/6 symbols (DL/UL
/// prep), slow in 9/11.
delay_config table1_delays(ue_capability cap = ue_capability::fast);

/// The documented reference configuration for the single-packet golden
/// timelines: SCS 30 kHz, TTI = 2 symbols, direction-free schedule,
/// arrival at symbol 0. With one HARQ retransmission it yields exactly
/// 22 symbols DL and 30 symbols UL under dynamic grant.
delay_config reference_timeline_delays();

enum class ul_grant_scheme { grant_free, dynamic_grant };

/// Per-packet latency decomposition, all in symbols. harq covers the whole
/// retransmission chain (detection, feedback, re-queue, re-transmission)
/// summed over attempts; dg is the UL grant-acquisition chain and is zero
/// for DL and for grant-free UL. total_symbols always equals the component
/// sum.
struct latency_breakdown {
  direction dir = direction::dl;
  std::int64_t bs_proc = 0;
  std::int64_t queue = 0;
  std::int64_t tdd_switch = 0;
  std::int64_t frame_align = 0;
  std::int64_t tx = 0;
  std::int64_t harq = 0;
  std::int64_t dg = 0;
  std::int64_t ue_proc = 0;
  std::int64_t total_symbols = 0;

  std::int64_t component_sum() const {
    return bs_proc + queue + tdd_switch + frame_align + tx + harq + dg + ue_proc;
  }
};

inline constexpr std::int64_t kDefaultSearchLimit = 1'000'000;

/// One-way DL latency of a single packet through an otherwise empty system:
/// BS processing, wait to the first usable DL TTI window (wrong-direction
/// symbols count as tdd_switch, right-direction ones as frame_align),
/// transmission to the window end, n_harq NACK/retransmission chains, final
/// UE decode. Throws starvation_error when no usable window or control
/// opportunity exists before search_limit.
latency_breakdown dl_latency(const delay_config& delays, const cell_schedule& sched,
                             const tti_grid& grid, std::int64_t arrival_symbol,
                             int n_harq,
                             std::int64_t search_limit = kDefaultSearchLimit);

/// One-way UL latency. Dynamic grant prepends the grant chain: UE prep,
/// wait to the SR opportunity, SR, BS processing (plus the sg_delay_ttis
/// floor), SG on the DL control channel, grant decode + transport block
/// prep. Grant-free packets are eligible at arrival.
latency_breakdown ul_latency(const delay_config& delays, const cell_schedule& sched,
                             const tti_grid& grid, std::int64_t arrival_symbol,
                             int n_harq, ul_grant_scheme scheme,
                             std::int64_t search_limit = kDefaultSearchLimit);

/// First-transmission total plus alpha-weighted HARQ chain (the
/// one-retransmission expectation; alpha = 0 reproduces the first
/// transmission).
double expected_latency(const latency_breakdown& first_tx,
                        std::int64_t harq_chain_symbols, double alpha);

/// Plain-text stacked timeline of a breakdown, one row per non-zero
/// component with its symbol span.
std::string format_timeline(const latency_breakdown& b);

}  // namespace flextdd
