// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "rdemon/emissions/emissions.hpp"
#include "rdemon/obd/cdp.hpp"
#include "rdemon/rde/rules.hpp"

namespace rdemon::sim {

struct SegmentTarget {
  rde::SegmentClass segment = rde::SegmentClass::Urban;
  double distance_km = 0.0;  // multiple of 0.01
  double nox_mg_per_km = 0.0;
  double co2_g_per_km = 0.0;
};

/// Trip that drives each segment at a constant speed (36, 72 or 108 km/h,
/// plus a few faster ticks to hit the distance to 0.01 km) and dithers the
/// raw NOx and fuel codes so the segment emission rates come out as given.
obd::CdpTrip segment_fixture(const std::vector<SegmentTarget>& segments,
                             const emissions::EmissionCoefficients& c = {});

/// Per-segment rows of the two reference test drives.
std::vector<SegmentTarget> drive1_targets();
std::vector<SegmentTarget> drive2_targets();

}  // namespace rdemon::sim
