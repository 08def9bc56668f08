// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "flextdd/duplexing.hpp"
#include "flextdd/latency_analytic.hpp"
#include "flextdd/numerology.hpp"
#include "flextdd/traffic.hpp"

namespace flextdd {

/// BS-BS cross-link interference coupling. chi[i][j] is the additive
/// UL-BLER penalty at victim cell i while aggressor cell j transmits DL on
/// the same symbols. Zero matrix (or empty) means CLI-free.
struct cli_coupling {
  std::vector<std::vector<double>> chi;

  static cli_coupling none() { return {}; }
  static cli_coupling uniform(int n_cells, double value);
  bool empty_or_zero() const;
  void validate(int n_cells) const;
};

struct sim_config {
  int n_cells = 3;
  int scs_khz = 30;
  int tti_symbols = 4;
  duplex_mode duplex{};  // dynamic TDD, gamma = 20 slots (one 10 ms frame at 30 kHz)
  traffic_config traffic{};
  delay_config delays{};
  ul_grant_scheme ul_scheme = ul_grant_scheme::grant_free;
  int n_prb = 50;
  int bits_per_prb_symbol = 8;
  double bler_base = 0.01;
  double bler_retx = 0.001;
  /// Optional per-attempt BLER override: entry k applies to attempt k+1,
  /// the last entry repeats. Lets tests force exact HARQ counts.
  std::vector<double> bler_per_attempt{};
  int max_harq = 6;
  cli_coupling cli{};
  std::int64_t horizon_symbols = 280000;
  std::uint64_t seed = 1;
  bool allow_segmentation = true;
  /// Debug-audit mode: conservation checked after every event, buffer
  /// views re-derived from live packets at every pattern update,
  /// allocations validated against the schedule.
  bool audit = false;
  /// When non-empty, replaces the generated arrival stream.
  std::vector<packet> trace{};

  void validate() const;  // throws config_error
  double bler_for_attempt(int attempt) const;
};

enum class packet_outcome { delivered, dropped_max_harq, in_flight };

const char* to_string(packet_outcome o);

enum class failure_cause { channel, cli };

struct packet_record {
  packet pkt{};
  latency_breakdown breakdown{};
  packet_outcome outcome = packet_outcome::in_flight;
  int n_transmissions = 0;
  std::vector<failure_cause> failures{};  // one entry per failed attempt
  std::int64_t delivery_symbol = -1;
};

struct schedule_log_entry {
  int cell = 0;
  std::int64_t slot = 0;
  std::string format;  // 14 chars; D/U/F under TDD, B under direction-free modes
};

struct run_result {
  std::vector<packet_record> records;
  std::vector<schedule_log_entry> schedule_log;
  std::uint64_t event_count = 0;
  /// Realized per-cell schedules, suitable for replaying a run through the
  /// closed-form latency walker.
  std::vector<cell_schedule> realized_schedules;
};

/// Executes the discrete-event simulation. Deterministic: identical
/// (config, seed) produces identical output.
run_result run(const sim_config& cfg);

/// Per-packet record CSV:
/// id,cell,ue,dir,arrival_symbol,delivery_symbol,outcome,n_tx,bs_proc,queue,
/// tdd_switch,frame_align,tx,dg,harq,ue_proc,total_symbols,total_us
void write_records_csv(std::ostream& out, const run_result& result,
                       const numerology& num);

/// One line per (cell, slot): "cell,slot,FORMAT".
void write_schedule_log(std::ostream& out, const run_result& result);

}  // namespace flextdd
