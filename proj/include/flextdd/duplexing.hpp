// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flextdd/numerology.hpp"

namespace flextdd {

enum class link_symbol : char { dl = 'D', ul = 'U', flex = 'F' };

/// Placement of DL/UL/flexible symbols within one 14-symbol slot.
struct slot_format {
  std::array<link_symbol, kSymbolsPerSlot> symbols{};

  link_symbol at(int local_symbol) const { return symbols[local_symbol]; }
  int count(link_symbol s) const;
  std::string to_string() const;
  static slot_format from_string(const std::string& text);  // config_error on bad input

  /// Every D->U transition, cyclically across slot repetition, has at
  /// least one F between the D and the U.
  bool guard_rule_holds() const;

  bool operator==(const slot_format&) const = default;
};

/// Aggregated buffered traffic per direction at one cell, in bits.
struct cell_buffers {
  std::int64_t z_dl_bits = 0;
  std::int64_t z_ul_bits = 0;
};

/// Buffered traffic ratio z_dl / (z_dl + z_ul). Undefined (nullopt) when
/// both buffers are empty; the caller falls back to the default format.
std::optional<double> buffered_ratio(const cell_buffers& b);

/// Maps the buffered traffic ratio onto a three-block slot format.
///
/// Template: three 4-symbol data blocks and two F symbols. The number of
/// DL blocks is clamp(round(3*ratio), 0, 3); block orders are fixed per
/// count (0 -> U,U,U; 1 -> U,D,U; 2 -> D,U,D; 3 -> D,D,D). The first F
/// always follows block 1. The second F sits between blocks 2 and 3 when
/// that transition is D->U (needed to keep the guard rule) and at the end
/// of the slot otherwise. ratio 2/3 therefore yields DDDDFUUUUDDDDF.
slot_format select_slot_format(std::optional<double> ratio);

/// Fallback when the ratio is undefined: DDDDDDFUUUUUUF, equal DL and UL
/// symbol share.
slot_format default_slot_format();

enum class duplex_kind { fdd, dynamic_tdd, flexible_fdd };

struct duplex_mode {
  duplex_kind kind = duplex_kind::dynamic_tdd;
  /// FDD: share of PRBs reserved for DL (rest is UL).
  double dl_bandwidth_fraction = 0.5;
  /// Dynamic TDD: slots between slot-format re-selections.
  int gamma_slots = 20;
  /// Flexible FDD: share of PRBs configured as guard band.
  double guard_prb_fraction = 0.0;
};

struct prb_partition {
  int n_dl_prb = 0;
  int n_ul_prb = 0;
  int n_guard_prb = 0;
};

/// Splits total_prb into guard = round(guard_fraction * total) plus a
/// DL/UL split of the remainder with n_dl/(n_dl+n_ul) ~ ratio
/// (largest-remainder rounding). Conserves PRBs exactly.
prb_partition flexfdd_partition(double ratio, int total_prb, double guard_fraction);

enum class link_direction { dl_only, ul_only, guard, both };

/// A realized schedule for one cell: under dynamic TDD, the sequence of
/// formats adopted at successive pattern updates, each repeated for
/// gamma_slots; the last entry repeats beyond the recorded periods.
/// FDD / flexible FDD schedules are direction-free (every symbol Both).
struct cell_schedule {
  duplex_kind kind = duplex_kind::fdd;
  int gamma_slots = 1;
  std::vector<slot_format> periods;

  link_direction direction_at(std::int64_t symbol) const;
  bool capable(std::int64_t symbol, bool dl) const;
  bool dl_capable(std::int64_t symbol) const { return capable(symbol, true); }
  bool ul_capable(std::int64_t symbol) const { return capable(symbol, false); }

  static cell_schedule fdd();
  static cell_schedule flexible_fdd();
  static cell_schedule dynamic_tdd(int gamma_slots, std::vector<slot_format> periods);
};

/// Per-symbol link availability under a duplexing mode.
link_direction link_direction_at(const duplex_mode& mode,
                                 const cell_schedule& sched,
                                 std::int64_t symbol);

// Control-channel opportunity rules, shared by the closed-form walker and
// the event engine. DL control (SG, NACK towards the UE) rides the first
// DL-capable symbol of a TTI window; UL control (SR, NACK towards the BS)
// rides the first symbol of a maximal UL run. Under direction-free modes
// both collapse to every window start.
bool is_dl_control_opportunity(const cell_schedule& sched, const tti_grid& grid,
                               std::int64_t symbol);
bool is_ul_control_opportunity(const cell_schedule& sched, const tti_grid& grid,
                               std::int64_t symbol);

/// First symbol >= from satisfying the predicate, or nullopt if none exists
/// before `limit`.
std::optional<std::int64_t> next_dl_control(const cell_schedule& sched,
                                            const tti_grid& grid,
                                            std::int64_t from, std::int64_t limit);
std::optional<std::int64_t> next_ul_control(const cell_schedule& sched,
                                            const tti_grid& grid,
                                            std::int64_t from, std::int64_t limit);

/// Next scheduling-request opportunity at or after `from`: the first UL
/// control opportunity at or after the first SR tick >= from. SR ticks are
/// the starts of windows whose global index is a multiple of
/// sr_periodicity_ttis.
std::optional<std::int64_t> next_sr_opportunity(const cell_schedule& sched,
                                                const tti_grid& grid,
                                                std::int64_t from,
                                                int sr_periodicity_ttis,
                                                std::int64_t limit);

}  // namespace flextdd
