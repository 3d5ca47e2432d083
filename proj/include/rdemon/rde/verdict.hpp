// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdemon/engine/monitor.hpp"
#include "rdemon/rde/rules.hpp"

namespace rdemon::rde {

struct SegmentStats {
  double distance_km = 0.0;
  double avg_velocity_kmph = 0.0;
  double dynamics_p95 = 0.0;  // m^2/s^3
  std::optional<double> rpa;  // m/s^2, absent while the segment has no distance
  double nox_mg = 0.0;
  double co2_g = 0.0;
};

/// Everything the verdict depends on, as of one 1 Hz tick.
struct TripStats {
  double elapsed_s = 0.0;
  std::array<SegmentStats, 3> segments;  // indexed by SegmentClass
  std::optional<double> ambient_min_K;
  std::optional<double> ambient_max_K;
  double max_speed_kmph = 0.0;

  const SegmentStats& segment(SegmentClass s) const { return segments[static_cast<std::size_t>(s)]; }
  SegmentStats& segment(SegmentClass s) { return segments[static_cast<std::size_t>(s)]; }
  double total_km() const;
  double total_nox_mg() const;
  double total_co2_g() const;
  /// Distance share in percent; 0 when nothing has been driven.
  double share_pct(SegmentClass s) const;
};

enum class Overall { Valid, Invalid, Inconclusive };
enum class Status { Ok, Violated, Pending };

std::string_view to_string(Overall o);  // "valid", "invalid", "?"
std::string_view to_string(Status s);   // "ok", "violated", "pending"

struct ConstraintEntry {
  std::string id;
  std::string description;
  Status status = Status::Pending;
  std::optional<double> value;
  std::optional<double> lo;
  std::optional<double> hi;
};

struct RdeVerdict {
  Overall overall = Overall::Inconclusive;
  bool irrecoverable = false;
  std::vector<ConstraintEntry> constraints;
  std::optional<double> nox_mg_per_km;
  bool nox_over_limit = false;

  const ConstraintEntry* find(std::string_view id) const;
};

/// Pure function of the accumulated statistics. Lower-bound and share
/// constraints stay pending until the minimum duration is reached; speed,
/// duration and ambient violations are irrecoverable.
RdeVerdict update_verdict(const TripStats& stats, const RdeParameters& p = {});

/// Reads the statistics from a monitor running compile_rde_spec().
TripStats stats_from_monitor(const engine::Monitor& monitor);

}  // namespace rdemon::rde
