// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdemon/engine/monitor.hpp"
#include "rdemon/obd/cdp.hpp"
#include "rdemon/obd/convert.hpp"
#include "rdemon/rde/params.hpp"

namespace rdemon::reporting {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownStream : public ReportError {
 public:
  explicit UnknownStream(const std::string& name);
};

struct SegmentRow {
  std::string segment;  // "urban", "rural", "motorway" or "total"
  double distance_km = 0.0;
  double nox_mg = 0.0;
  double co2_g = 0.0;
  std::optional<double> nox_mg_per_km;  // absent for zero distance
  std::optional<double> co2_g_per_km;
};

struct SegmentTable {
  std::vector<SegmentRow> rows;  // urban, rural, motorway
  SegmentRow total;
};

/// Aggregates converted engine events with the trip accumulator up to the
/// last event time.
SegmentTable segment_table(std::span<const engine::Event> events, const rde::RdeParameters& params = {});

/// Throws ReportError if the trip's sensor profile is not RDE capable.
SegmentTable segment_table(const obd::CdpTrip& trip, const rde::RdeParameters& params = {},
                           const obd::ConversionOptions& options = {});

/// Printed precision: 0.01 km, 1 mg/km, 1 g/km.
SegmentRow rounded(const SegmentRow& row);

/// Fixed-width text table of rounded rows.
std::string format_table(const SegmentTable& table);

/// Columns: segment,distance_km,nox_mg_per_km,co2_g_per_km. Rounded; an
/// absent rate is an empty field.
std::string format_csv(const SegmentTable& table);

/// {"segments": [row...], "total": row}; rows carry rounded values, absent
/// rates are null.
nlohmann::json to_json(const SegmentTable& table);

struct Series {
  std::string stream;
  std::vector<double> t;
  std::vector<double> value;
};

/// Keeps at most `max_points` samples: the series is cut into max_points/2
/// buckets and each contributes its minimum and maximum (first and last
/// sample when the bucket is flat), so global extrema always survive. A
/// series that already fits is returned unchanged.
Series downsample(const Series& s, std::size_t max_points);

/// Time series of decoded trip streams (velo_kmph, nox_mgps, lat, ...) or
/// of outputs of the RDE specification (urban_pctl_dyn, ...). Boolean
/// streams read as 0/1. Throws UnknownStream for anything else.
std::vector<Series> series(const obd::CdpTrip& trip, const std::vector<std::string>& streams,
                           std::optional<std::size_t> max_points = std::nullopt,
                           const rde::RdeParameters& params = {}, const obd::ConversionOptions& options = {});

nlohmann::json to_json(const std::vector<Series>& series);

}  // namespace rdemon::reporting
