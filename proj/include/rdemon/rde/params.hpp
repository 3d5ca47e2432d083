// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace rdemon::rde {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ShareBounds {
  double lo_pct = 0.0;
  double hi_pct = 100.0;
};

/// Regulation bounds and coefficients. Defaults follow the EU RDE rules.
struct RdeParameters {
  double temp_min_K = 273.0;
  double temp_max_K = 303.0;
  double duration_min_s = 5400.0;
  double duration_max_s = 7200.0;
  double urban_avg_v_min_kmph = 15.0;
  double urban_avg_v_max_kmph = 40.0;
  double speed_limit_kmph = 160.0;
  double nox_limit_mg_per_km = 168.0;
  double expected_trip_km = 83.0;
  double window_s = 7200.0;

  // Segment classification: urban v <= urban_max, rural v <= rural_max.
  double urban_max_kmph = 60.0;
  double rural_max_kmph = 90.0;
  ShareBounds urban_share{29.0, 44.0};
  ShareBounds rural_share{23.0, 43.0};
  ShareBounds motorway_share{23.0, 43.0};
  double min_segment_km = 16.0;

  // 95th percentile of v*a bound: slope*v + intercept up to the cutoff.
  double dyn_slope = 0.136;
  double dyn_intercept = 14.44;
  double dyn_cutoff_kmph = 74.6;
  double dyn_high_slope = 0.0742;
  double dyn_high_intercept = 18.966;

  // Relative positive acceleration lower bound: intercept - slope*v up to
  // the cutoff, then a constant floor.
  double rpa_slope = 0.0016;
  double rpa_intercept = 0.1755;
  double rpa_cutoff_kmph = 94.05;
  double rpa_floor = 0.025;
  double rpa_accel_min_mps2 = 0.1;

  // Window used for whole-trip totals in the generated specification.
  double horizon_s = 86400.0;

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

/// `key = value` lines, `#` comments; keys are the field names above with
/// share bounds spelled `urban_share_lo_pct` etc. Missing keys keep their
/// defaults; unknown keys, malformed numbers and invalid results throw
/// DomainError.
RdeParameters read_parameters(std::istream& in);
RdeParameters load_parameters(const std::string& path);
void write_parameters(std::ostream& out, const RdeParameters& p);

}  // namespace rdemon::rde
