// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "flextdd/numerology.hpp"

namespace flextdd {

enum class direction { dl, ul };

inline const char* to_string(direction d) { return d == direction::dl ? "DL" : "UL"; }

/// FTP3 traffic description: K UEs per cell and direction, fixed payload
/// sizes, Poisson arrivals per UE.
struct traffic_config {
  int k_dl = 10;
  int k_ul = 10;
  std::int64_t f_dl_bits = 400;
  std::int64_t f_ul_bits = 400;
  double lambda_dl = 100.0;  // packets/s per UE
  double lambda_ul = 100.0;
};

struct offered_load_bps {
  double dl_bps = 0.0;
  double ul_bps = 0.0;
  double total_bps = 0.0;
};

/// Average offered load per cell: K * f * lambda per direction.
offered_load_bps offered_load(const traffic_config& cfg);

struct packet {
  std::int64_t id = 0;
  int cell_id = 0;
  int ue_id = 0;
  direction dir = direction::dl;
  std::int64_t size_bits = 0;
  std::int64_t arrival_symbol = 0;
};

/// Generates the full arrival stream for n_cells cells over the horizon.
///
/// Each (cell, ue, direction) triple draws i.i.d. exponential inter-arrival
/// times from its own substream (see substream_seed), quantized to the
/// symbol grid by floor. The stream is sorted by
/// (arrival_symbol, cell, ue, direction DL<UL) and ids are assigned in that
/// order, so the same seed always yields the identical stream.
std::vector<packet> generate_arrivals(const traffic_config& cfg,
                                      const numerology& num,
                                      std::int64_t horizon_symbols,
                                      std::uint64_t seed, int n_cells = 1);

/// Arrival-trace CSV: id,cell,ue,dir,bits,symbol. Lets the same traffic be
/// replayed across duplexing modes.
void write_arrival_trace(std::ostream& out, std::span<const packet> packets);
std::vector<packet> read_arrival_trace(std::istream& in);

}  // namespace flextdd
