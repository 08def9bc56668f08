// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace flextdd {

inline constexpr int kSymbolsPerSlot = 14;

/// Symbol-indexed time base derived from the sub-carrier spacing.
///
/// All simulation time is counted in whole OFDM symbols; microseconds are a
/// presentation unit only. Symbols are assumed uniform within a slot
/// (slot / 14), cyclic-prefix asymmetry is not modeled.
struct numerology {
  int scs_khz = 30;
  int symbols_per_slot = kSymbolsPerSlot;
  double slot_duration_us = 500.0;
  double symbol_duration_us = 500.0 / kSymbolsPerSlot;
  // Exact integer: 14'000 * 2^m symbols per second, m = log2(scs/15).
  std::int64_t symbols_per_second = 28000;
};

/// Builds the time base for scs_khz in {15, 30, 60}. Throws config_error
/// otherwise.
numerology make_numerology(int scs_khz);

/// n symbols expressed in microseconds.
double symbols_to_us(std::int64_t n, const numerology& num);

/// TTI window grid over the 14-symbol slot, boundaries at local symbol
/// indices 0, mu, 2mu, ... When mu does not divide 14 the last window of
/// each slot is truncated (mu = 4 gives windows of 4, 4, 4, 2 symbols).
struct tti_grid {
  int tti_symbols = 4;

  int windows_per_slot() const;
  /// Start of the window containing `symbol`.
  std::int64_t window_start(std::int64_t symbol) const;
  /// First window start >= t.
  std::int64_t next_window_start(std::int64_t t) const;
  /// Length of the window that starts at `start` (start must be a boundary).
  int window_length(std::int64_t start) const;
  /// Global (slot-crossing) index of the window that starts at `start`.
  std::int64_t window_index(std::int64_t start) const;
  bool is_window_start(std::int64_t t) const;
};

/// mu must be one of {2, 4, 7, 14}; throws config_error otherwise.
tti_grid make_tti_grid(int tti_symbols);

}  // namespace flextdd
