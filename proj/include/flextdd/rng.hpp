// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace flextdd {

/// SplitMix64 mixing step. Used everywhere a derived seed is needed so the
/// splitting rule is a single documented function.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent substream seed for one (cell, ue, direction) triple.
/// Adding UEs or cells never perturbs another triple's stream.
inline std::uint64_t substream_seed(std::uint64_t master, int cell, int ue,
                                    int direction_index) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (0x632BE59BD9B4E019ull * static_cast<std::uint64_t>(cell + 1)));
  s = splitmix64(s ^ (0xD1B54A32D192ED03ull * static_cast<std::uint64_t>(ue + 1)));
  s = splitmix64(s ^ static_cast<std::uint64_t>(direction_index + 1));
  return s;
}

/// Uniform double in [0, 1) with 53 random bits. Hand-rolled so streams are
/// identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace flextdd
