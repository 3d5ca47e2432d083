// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/rde/rules.hpp"

#include <cmath>

namespace rdemon::rde {

namespace {

void require(bool ok, const char* field) {
  if (!ok) throw DomainError(std::string("invalid RDE parameter: ") + field);
}

void require_bounds(const ShareBounds& b, const char* field) {
  require(b.lo_pct > 0.0 && b.lo_pct < b.hi_pct && b.hi_pct <= 100.0, field);
}

}  // namespace

void RdeParameters::validate() const {
  require(temp_min_K > 0.0 && temp_min_K < temp_max_K, "temp_min_K/temp_max_K");
  require(duration_min_s > 0.0 && duration_min_s < duration_max_s, "duration_min_s/duration_max_s");
  require(urban_avg_v_min_kmph > 0.0 && urban_avg_v_min_kmph < urban_avg_v_max_kmph, "urban_avg_v");
  require(speed_limit_kmph > 0.0, "speed_limit_kmph");
  require(nox_limit_mg_per_km > 0.0, "nox_limit_mg_per_km");
  require(expected_trip_km > 0.0, "expected_trip_km");
  require(window_s > 0.0, "window_s");
  require(urban_max_kmph > 0.0 && urban_max_kmph < rural_max_kmph, "urban_max_kmph/rural_max_kmph");
  require_bounds(urban_share, "urban_share");
  require_bounds(rural_share, "rural_share");
  require_bounds(motorway_share, "motorway_share");
  require(min_segment_km > 0.0, "min_segment_km");
  require(dyn_slope > 0.0 && dyn_intercept > 0.0 && dyn_cutoff_kmph > 0.0, "dyn_*");
  require(dyn_high_slope > 0.0 && dyn_high_intercept > 0.0, "dyn_high_*");
  require(rpa_slope > 0.0 && rpa_intercept > 0.0 && rpa_cutoff_kmph > 0.0 && rpa_floor > 0.0, "rpa_*");
  require(rpa_accel_min_mps2 > 0.0, "rpa_accel_min_mps2");
  require(horizon_s >= duration_max_s, "horizon_s");
}

std::string_view to_string(SegmentClass s) {
  switch (s) {
    case SegmentClass::Urban: return "urban";
    case SegmentClass::Rural: return "rural";
    case SegmentClass::Motorway: return "motorway";
  }
  return "?";
}

const ShareBounds& share_bounds(const RdeParameters& p, SegmentClass s) {
  switch (s) {
    case SegmentClass::Urban: return p.urban_share;
    case SegmentClass::Rural: return p.rural_share;
    case SegmentClass::Motorway: break;
  }
  return p.motorway_share;
}

SegmentClass classify_segment(double velocity_kmph, const RdeParameters& p) {
  if (!(velocity_kmph >= 0.0)) throw DomainError("velocity must be non-negative");
  if (velocity_kmph <= p.urban_max_kmph) return SegmentClass::Urban;
  if (velocity_kmph <= p.rural_max_kmph) return SegmentClass::Rural;
  return SegmentClass::Motorway;
}

double dynamics_threshold(double v_avg_kmph, const RdeParameters& p) {
  if (v_avg_kmph <= p.dyn_cutoff_kmph) return p.dyn_slope * v_avg_kmph + p.dyn_intercept;
  return p.dyn_high_slope * v_avg_kmph + p.dyn_high_intercept;
}

double rpa_bound(double v_avg_kmph, const RdeParameters& p) {
  if (v_avg_kmph <= p.rpa_cutoff_kmph) return p.rpa_intercept - p.rpa_slope * v_avg_kmph;
  return p.rpa_floor;
}

std::optional<double> rpa(std::span<const MotionSample> samples, double accel_min_mps2) {
  double distance = 0.0;
  double positive = 0.0;
  for (const auto& s : samples) {
    distance += s.velocity_mps * s.dt_s;
    if (s.accel_mps2 > accel_min_mps2) positive += s.velocity_mps * s.accel_mps2 * s.dt_s;
  }
  if (distance <= 0.0) return std::nullopt;
  return positive / distance;
}

}  // namespace rdemon::rde
