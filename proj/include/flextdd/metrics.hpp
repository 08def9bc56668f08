// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "flextdd/engine.hpp"

namespace flextdd {

enum class series_tag { dl, ul, combined };

const char* to_string(series_tag t);

/// Sorted latency samples in symbols plus the symbol duration for the
/// microsecond view. Immutable once built.
struct latency_series {
  series_tag tag = series_tag::combined;
  double symbol_us = 0.0;
  std::vector<std::int64_t> samples;  // ascending

  std::size_t count() const { return samples.size(); }
};

latency_series make_series(series_tag tag, double symbol_us,
                           std::vector<std::int64_t> samples);

/// Total one-way latency of every delivered packet matching the tag.
latency_series delivered_latency_series(std::span<const packet_record> records,
                                        series_tag tag, const numerology& num);

struct outage_result {
  std::int64_t value_symbols = 0;
  double value_us = 0.0;
  /// n * epsilon >= 10; below that the tail estimate is anecdotal.
  bool reliable = false;
};

/// Radio latency at outage probability epsilon: the conservative
/// (1-epsilon)-quantile, i.e. the 1-indexed order statistic at rank
/// ceil(n * (1 - epsilon)), no interpolation.
outage_result outage_latency(const latency_series& series, double epsilon);

/// P(X > x) at each grid point (grid in symbols). Monotone non-increasing.
std::vector<std::pair<double, double>> ccdf(const latency_series& series,
                                            std::span<const double> grid);

struct empirical_cdf {
  std::vector<std::int64_t> samples;  // ascending

  double eval(double x) const;  // P(X <= x)
  std::int64_t quantile(double p) const;
  std::size_t count() const { return samples.size(); }
};

/// ECDF of the combined scheduling delay (queue + tdd_switch + frame_align,
/// processing excluded) over every record that was transmitted at least
/// once, both directions pooled.
empirical_cdf scheduling_delay_ecdf(std::span<const packet_record> records);

/// Associative, commutative merge of two series with identical tag and
/// symbol duration. Throws config_error on mismatch.
latency_series merge(const latency_series& a, const latency_series& b);

/// Mean per-component breakdown over delivered records matching the tag.
struct breakdown_means {
  double bs_proc = 0, queue = 0, tdd_switch = 0, frame_align = 0, tx = 0,
         harq = 0, dg = 0, ue_proc = 0, total = 0;
  std::size_t count = 0;
};
breakdown_means mean_breakdown(std::span<const packet_record> records,
                               series_tag tag);

void write_ccdf_csv(std::ostream& out,
                    std::span<const std::pair<double, double>> points);
void write_ecdf_csv(std::ostream& out, const empirical_cdf& e);

}  // namespace flextdd
