// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "rdemon/rde/params.hpp"

namespace rdemon::rde {

enum class SegmentClass { Urban, Rural, Motorway };

inline constexpr std::array<SegmentClass, 3> kSegments = {SegmentClass::Urban, SegmentClass::Rural,
                                                           SegmentClass::Motorway};

std::string_view to_string(SegmentClass s);  // "urban", "rural", "motorway"

const ShareBounds& share_bounds(const RdeParameters& p, SegmentClass s);

/// Throws DomainError for negative or NaN velocity.
SegmentClass classify_segment(double velocity_kmph, const RdeParameters& p = {});

/// v*a/3.6 in m^2/s^3.
inline double dynamics(double velocity_kmph, double accel_mps2) { return velocity_kmph * accel_mps2 / 3.6; }

double dynamics_threshold(double v_avg_kmph, const RdeParameters& p = {});

double rpa_bound(double v_avg_kmph, const RdeParameters& p = {});

struct MotionSample {
  double velocity_mps = 0.0;
  double accel_mps2 = 0.0;
  double dt_s = 1.0;
};

/// Relative positive acceleration: sum of v*a*dt over samples with
/// a > accel_min, divided by the distance sum of v*dt. Absent for zero distance.
std::optional<double> rpa(std::span<const MotionSample> samples, double accel_min_mps2 = 0.1);

}  // namespace rdemon::rde
