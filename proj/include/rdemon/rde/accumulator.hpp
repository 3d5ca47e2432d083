// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rdemon/engine/monitor.hpp"
#include "rdemon/engine/window.hpp"
#include "rdemon/rde/verdict.hpp"

namespace rdemon::rde {

/// Direct computation of TripStats from the RDE input streams, without the
/// specification engine. Uses the same 1 Hz sample-and-hold grid and the
/// same deadline rule as engine::Monitor, so both yield identical numbers.
/// Events on streams other than the five RDE inputs are ignored.
class TripAccumulator {
 public:
  explicit TripAccumulator(RdeParameters p = {}, double start_time = 0.0);

  void ingest(const engine::Event& e);
  void advance_time(double t);

  /// Statistics as of the last tick.
  const TripStats& stats() const { return stats_; }
  double current_time() const { return now_; }
  const RdeParameters& params() const { return p_; }

 private:
  struct Segment {
    engine::SlidingWindow avg_velo;
    engine::SlidingWindow velo_sum;
    engine::SlidingWindow pctl_dyn;
    engine::SlidingWindow pos_va_sum;
    engine::SlidingWindow nox_sum;
    engine::SlidingWindow co2_sum;
  };

  void fire_until(double limit, bool inclusive);
  void tick(double d);

  RdeParameters p_;
  double start_;
  double now_;
  long long next_k_ = 1;
  std::optional<double> velo_, accel_, ambient_, nox_, co2_;
  std::vector<Segment> segs_;  // indexed by SegmentClass
  std::optional<double> ambient_min_, ambient_max_;
  double max_speed_ = 0.0;
  TripStats stats_;
};

}  // namespace rdemon::rde
