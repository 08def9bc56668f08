// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#include "flextdd/numerology.hpp"

#include <algorithm>
#include <string>

#include "flextdd/errors.hpp"

namespace flextdd {

numerology make_numerology(int scs_khz) {
  int m;
  switch (scs_khz) {
    case 15: m = 0; break;
    case 30: m = 1; break;
    case 60: m = 2; break;
    default:
      throw config_error("unsupported sub-carrier spacing " +
                         std::to_string(scs_khz) + " kHz (expected 15, 30 or 60)");
  }
  numerology num;
  num.scs_khz = scs_khz;
  num.symbols_per_slot = kSymbolsPerSlot;
  num.slot_duration_us = 1000.0 / static_cast<double>(1 << m);
  num.symbol_duration_us = num.slot_duration_us / kSymbolsPerSlot;
  num.symbols_per_second = static_cast<std::int64_t>(14000) << m;
  return num;
}

double symbols_to_us(std::int64_t n, const numerology& num) {
  return static_cast<double>(n) * num.symbol_duration_us;
}

int tti_grid::windows_per_slot() const {
  return (kSymbolsPerSlot + tti_symbols - 1) / tti_symbols;
}

std::int64_t tti_grid::window_start(std::int64_t symbol) const {
  const std::int64_t slot = symbol / kSymbolsPerSlot;
  const std::int64_t local = symbol % kSymbolsPerSlot;
  return slot * kSymbolsPerSlot + (local / tti_symbols) * tti_symbols;
}

std::int64_t tti_grid::next_window_start(std::int64_t t) const {
  const std::int64_t start = window_start(t);
  return start == t ? t : start + window_length(start);
}

int tti_grid::window_length(std::int64_t start) const {
  const int local = static_cast<int>(start % kSymbolsPerSlot);
  return std::min(tti_symbols, kSymbolsPerSlot - local);
}

std::int64_t tti_grid::window_index(std::int64_t start) const {
  const std::int64_t slot = start / kSymbolsPerSlot;
  const std::int64_t local = start % kSymbolsPerSlot;
  return slot * windows_per_slot() + local / tti_symbols;
}

bool tti_grid::is_window_start(std::int64_t t) const {
  return t >= 0 && t % kSymbolsPerSlot % tti_symbols == 0;
}

tti_grid make_tti_grid(int tti_symbols) {
  if (tti_symbols != 2 && tti_symbols != 4 && tti_symbols != 7 &&
      tti_symbols != 14) {
    throw config_error("unsupported TTI size " + std::to_string(tti_symbols) +
                       " symbols (expected 2, 4, 7 or 14)");
  }
  return tti_grid{tti_symbols};
}

}  // namespace flextdd
