// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#include "flextdd/duplexing.hpp"

#include <algorithm>
#include <cmath>

#include "flextdd/errors.hpp"

namespace flextdd {

int slot_format::count(link_symbol s) const {
  return static_cast<int>(std::count(symbols.begin(), symbols.end(), s));
}

std::string slot_format::to_string() const {
  std::string out(kSymbolsPerSlot, '?');
  for (int i = 0; i < kSymbolsPerSlot; ++i) out[i] = static_cast<char>(symbols[i]);
  return out;
}

slot_format slot_format::from_string(const std::string& text) {
  if (text.size() != kSymbolsPerSlot) {
    throw config_error("slot format '" + text + "' must have exactly 14 symbols");
  }
  slot_format fmt;
  for (int i = 0; i < kSymbolsPerSlot; ++i) {
    switch (text[i]) {
      case 'D': fmt.symbols[i] = link_symbol::dl; break;
      case 'U': fmt.symbols[i] = link_symbol::ul; break;
      case 'F': fmt.symbols[i] = link_symbol::flex; break;
      default:
        throw config_error("slot format '" + text + "' has invalid symbol '" +
                           std::string(1, text[i]) + "'");
    }
  }
  return fmt;
}

bool slot_format::guard_rule_holds() const {
  // A D->U transition without an F in between shows up as cyclic D,U adjacency.
  for (int i = 0; i < kSymbolsPerSlot; ++i) {
    if (symbols[i] == link_symbol::dl &&
        symbols[(i + 1) % kSymbolsPerSlot] == link_symbol::ul) {
      return false;
    }
  }
  return true;
}

std::optional<double> buffered_ratio(const cell_buffers& b) {
  if (b.z_dl_bits <= 0 && b.z_ul_bits <= 0) return std::nullopt;
  return static_cast<double>(b.z_dl_bits) /
         static_cast<double>(b.z_dl_bits + b.z_ul_bits);
}

slot_format select_slot_format(std::optional<double> ratio) {
  if (!ratio.has_value()) return default_slot_format();
  const long n_dl = std::clamp(std::lround(3.0 * *ratio), 0L, 3L);
  static constexpr link_symbol kOrders[4][3] = {
      {link_symbol::ul, link_symbol::ul, link_symbol::ul},
      {link_symbol::ul, link_symbol::dl, link_symbol::ul},
      {link_symbol::dl, link_symbol::ul, link_symbol::dl},
      {link_symbol::dl, link_symbol::dl, link_symbol::dl},
  };
  const link_symbol* blocks = kOrders[n_dl];

  // Second F moves between blocks 2 and 3 when that transition is D->U;
  // otherwise it pads the end of the slot.
  const bool guard_before_block3 =
      blocks[1] == link_symbol::dl && blocks[2] == link_symbol::ul;

  slot_format fmt;
  int pos = 0;
  for (int b = 0; b < 3; ++b) {
    for (int k = 0; k < 4; ++k) fmt.symbols[pos++] = blocks[b];
    if (b == 0 || (b == 1 && guard_before_block3)) {
      fmt.symbols[pos++] = link_symbol::flex;
    }
  }
  if (!guard_before_block3) fmt.symbols[pos++] = link_symbol::flex;
  return fmt;
}

slot_format default_slot_format() {
  return slot_format::from_string("DDDDDDFUUUUUUF");
}

prb_partition flexfdd_partition(double ratio, int total_prb, double guard_fraction) {
  if (total_prb <= 0) throw config_error("flexfdd_partition: total_prb must be > 0");
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw config_error("flexfdd_partition: ratio must be in [0,1]");
  }
  if (!(guard_fraction >= 0.0 && guard_fraction <= 0.5)) {
    throw config_error("flexfdd_partition: guard_fraction must be in [0,0.5]");
  }
  prb_partition p;
  p.n_guard_prb = static_cast<int>(std::lround(guard_fraction * total_prb));
  const int data = total_prb - p.n_guard_prb;
  const double dl_exact = ratio * data;
  const double ul_exact = data - dl_exact;
  p.n_dl_prb = static_cast<int>(std::floor(dl_exact));
  p.n_ul_prb = static_cast<int>(std::floor(ul_exact));
  // Largest-remainder rounding; at most one PRB remains, DL wins ties.
  int rem = data - p.n_dl_prb - p.n_ul_prb;
  while (rem-- > 0) {
    if (dl_exact - p.n_dl_prb >= ul_exact - p.n_ul_prb) {
      ++p.n_dl_prb;
    } else {
      ++p.n_ul_prb;
    }
  }
  return p;
}

link_direction cell_schedule::direction_at(std::int64_t symbol) const {
  if (kind != duplex_kind::dynamic_tdd) return link_direction::both;
  const std::int64_t slot = symbol / kSymbolsPerSlot;
  const std::size_t period = std::min<std::size_t>(
      static_cast<std::size_t>(slot / gamma_slots), periods.size() - 1);
  switch (periods[period].at(static_cast<int>(symbol % kSymbolsPerSlot))) {
    case link_symbol::dl: return link_direction::dl_only;
    case link_symbol::ul: return link_direction::ul_only;
    default: return link_direction::guard;
  }
}

bool cell_schedule::capable(std::int64_t symbol, bool dl) const {
  const link_direction d = direction_at(symbol);
  if (d == link_direction::both) return true;
  return dl ? d == link_direction::dl_only : d == link_direction::ul_only;
}

cell_schedule cell_schedule::fdd() {
  cell_schedule s;
  s.kind = duplex_kind::fdd;
  return s;
}

cell_schedule cell_schedule::flexible_fdd() {
  cell_schedule s;
  s.kind = duplex_kind::flexible_fdd;
  return s;
}

cell_schedule cell_schedule::dynamic_tdd(int gamma_slots,
                                         std::vector<slot_format> periods) {
  if (gamma_slots < 1) throw config_error("gamma_slots must be >= 1");
  if (periods.empty()) throw config_error("dynamic TDD schedule needs at least one period");
  cell_schedule s;
  s.kind = duplex_kind::dynamic_tdd;
  s.gamma_slots = gamma_slots;
  s.periods = std::move(periods);
  return s;
}

link_direction link_direction_at(const duplex_mode& mode,
                                 const cell_schedule& sched,
                                 std::int64_t symbol) {
  if (mode.kind != duplex_kind::dynamic_tdd) return link_direction::both;
  return sched.direction_at(symbol);
}

bool is_dl_control_opportunity(const cell_schedule& sched, const tti_grid& grid,
                               std::int64_t symbol) {
  if (!sched.dl_capable(symbol)) return false;
  // First DL-capable symbol of its TTI window.
  for (std::int64_t s = grid.window_start(symbol); s < symbol; ++s) {
    if (sched.dl_capable(s)) return false;
  }
  return true;
}

bool is_ul_control_opportunity(const cell_schedule& sched, const tti_grid& grid,
                               std::int64_t symbol) {
  if (sched.kind != duplex_kind::dynamic_tdd) return grid.is_window_start(symbol);
  // First symbol of a maximal UL run.
  if (sched.direction_at(symbol) != link_direction::ul_only) return false;
  return symbol == 0 || sched.direction_at(symbol - 1) != link_direction::ul_only;
}

std::optional<std::int64_t> next_dl_control(const cell_schedule& sched,
                                            const tti_grid& grid,
                                            std::int64_t from, std::int64_t limit) {
  for (std::int64_t s = std::max<std::int64_t>(from, 0); s < limit; ++s) {
    if (is_dl_control_opportunity(sched, grid, s)) return s;
  }
  return std::nullopt;
}

std::optional<std::int64_t> next_ul_control(const cell_schedule& sched,
                                            const tti_grid& grid,
                                            std::int64_t from, std::int64_t limit) {
  for (std::int64_t s = std::max<std::int64_t>(from, 0); s < limit; ++s) {
    if (is_ul_control_opportunity(sched, grid, s)) return s;
  }
  return std::nullopt;
}

std::optional<std::int64_t> next_sr_opportunity(const cell_schedule& sched,
                                                const tti_grid& grid,
                                                std::int64_t from,
                                                int sr_periodicity_ttis,
                                                std::int64_t limit) {
  if (sr_periodicity_ttis < 1) throw config_error("sr_periodicity_ttis must be >= 1");
  // First SR tick >= from, then the first UL control opportunity at or
  // after it.
  const std::int64_t first_boundary = grid.next_window_start(std::max<std::int64_t>(from, 0));
  const std::int64_t idx = grid.window_index(first_boundary);
  const std::int64_t p = sr_periodicity_ttis;
  const std::int64_t tick_idx = (idx + p - 1) / p * p;
  const int wps = grid.windows_per_slot();
  const std::int64_t tick = tick_idx / wps * kSymbolsPerSlot +
                            tick_idx % wps * grid.tti_symbols;
  if (tick >= limit) return std::nullopt;
  return next_ul_control(sched, grid, tick, limit);
}

}  // namespace flextdd
