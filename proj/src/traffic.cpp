// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#include "flextdd/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "flextdd/errors.hpp"
#include "flextdd/rng.hpp"

namespace flextdd {

offered_load_bps offered_load(const traffic_config& cfg) {
  offered_load_bps load;
  load.dl_bps = static_cast<double>(cfg.k_dl) * static_cast<double>(cfg.f_dl_bits) *
                cfg.lambda_dl;
  load.ul_bps = static_cast<double>(cfg.k_ul) * static_cast<double>(cfg.f_ul_bits) *
                cfg.lambda_ul;
  load.total_bps = load.dl_bps + load.ul_bps;
  return load;
}

namespace {

void generate_stream(std::vector<packet>& out, int cell, int ue, direction dir,
                     std::int64_t size_bits, double lambda,
                     const numerology& num, std::int64_t horizon_symbols,
                     std::uint64_t master_seed) {
  if (lambda <= 0.0 || size_bits <= 0) return;
  std::mt19937_64 rng(substream_seed(master_seed, cell, ue,
                                     dir == direction::dl ? 0 : 1));
  double t_seconds = 0.0;
  for (;;) {
    t_seconds += -std::log1p(-uniform01(rng)) / lambda;
    const auto symbol = static_cast<std::int64_t>(
        std::floor(t_seconds * static_cast<double>(num.symbols_per_second)));
    if (symbol >= horizon_symbols) return;
    out.push_back(packet{0, cell, ue, dir, size_bits, symbol});
  }
}

}  // namespace

std::vector<packet> generate_arrivals(const traffic_config& cfg,
                                      const numerology& num,
                                      std::int64_t horizon_symbols,
                                      std::uint64_t seed, int n_cells) {
  if (horizon_symbols <= 0) throw config_error("horizon_symbols must be > 0");
  if (n_cells < 1) throw config_error("n_cells must be >= 1");
  std::vector<packet> out;
  for (int cell = 0; cell < n_cells; ++cell) {
    for (int ue = 0; ue < cfg.k_dl; ++ue) {
      generate_stream(out, cell, ue, direction::dl, cfg.f_dl_bits, cfg.lambda_dl,
                      num, horizon_symbols, seed);
    }
    for (int ue = 0; ue < cfg.k_ul; ++ue) {
      generate_stream(out, cell, ue, direction::ul, cfg.f_ul_bits, cfg.lambda_ul,
                      num, horizon_symbols, seed);
    }
  }
  std::sort(out.begin(), out.end(), [](const packet& a, const packet& b) {
    return std::tie(a.arrival_symbol, a.cell_id, a.ue_id, a.dir) <
           std::tie(b.arrival_symbol, b.cell_id, b.ue_id, b.dir);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<std::int64_t>(i);
  return out;
}

void write_arrival_trace(std::ostream& out, std::span<const packet> packets) {
  out << "id,cell,ue,dir,bits,symbol\n";
  for (const packet& p : packets) {
    out << p.id << ',' << p.cell_id << ',' << p.ue_id << ','
        << to_string(p.dir) << ',' << p.size_bits << ',' << p.arrival_symbol
        << '\n';
  }
}

std::vector<packet> read_arrival_trace(std::istream& in) {
  std::vector<packet> out;
  std::string line;
  if (!std::getline(in, line)) throw config_error("arrival trace: empty input");
  if (line != "id,cell,ue,dir,bits,symbol") {
    throw config_error("arrival trace: unexpected header '" + line + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    packet p;
    std::string field;
    try {
      std::getline(row, field, ',');
      p.id = std::stoll(field);
      std::getline(row, field, ',');
      p.cell_id = std::stoi(field);
      std::getline(row, field, ',');
      p.ue_id = std::stoi(field);
      std::getline(row, field, ',');
      if (field == "DL") {
        p.dir = direction::dl;
      } else if (field == "UL") {
        p.dir = direction::ul;
      } else {
        throw config_error("bad direction '" + field + "'");
      }
      std::getline(row, field, ',');
      p.size_bits = std::stoll(field);
      std::getline(row, field, ',');
      p.arrival_symbol = std::stoll(field);
    } catch (const config_error&) {
      throw;
    } catch (const std::exception&) {
      throw config_error("arrival trace: malformed line " + std::to_string(line_no));
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace flextdd
