// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/rde/accumulator.hpp"

#include <algorithm>
#include <cmath>

namespace rdemon::rde {

using lang::Aggregation;
using lang::AggregationKind;

namespace {

engine::SlidingWindow window(double duration, AggregationKind kind, double pctl = 0.0) {
  return engine::SlidingWindow(duration, Aggregation{kind, pctl});
}

}  // namespace

TripAccumulator::TripAccumulator(RdeParameters p, double start_time)
    : p_(std::move(p)), start_(start_time), now_(start_time) {
  p_.validate();
  for (std::size_t i = 0; i < kSegments.size(); ++i) {
    segs_.push_back(Segment{window(p_.window_s, AggregationKind::Avg), window(p_.horizon_s, AggregationKind::Sum),
                window(p_.window_s, AggregationKind::Percentile, 95.0), window(p_.horizon_s, AggregationKind::Sum),
                window(p_.horizon_s, AggregationKind::Sum), window(p_.horizon_s, AggregationKind::Sum)});
  }
}

void TripAccumulator::ingest(const engine::Event& e) {
  if (e.time < now_) throw engine::NonMonotonicTime(e.time, now_);
  fire_until(e.time, false);
  now_ = e.time;
  const auto* x = std::get_if<double>(&e.value);
  if (!x) return;
  if (e.stream == "velo_kmph") {
    velo_ = *x;
    max_speed_ = std::max(max_speed_, *x);
  } else if (e.stream == "accel_mpss") {
    accel_ = *x;
  } else if (e.stream == "ambient_K") {
    ambient_ = *x;
    ambient_min_ = ambient_min_ ? std::min(*ambient_min_, *x) : *x;
    ambient_max_ = ambient_max_ ? std::max(*ambient_max_, *x) : *x;
  } else if (e.stream == "nox_mgps") {
    nox_ = *x;
  } else if (e.stream == "co2_gps") {
    co2_ = *x;
  }
}

void TripAccumulator::advance_time(double t) {
  if (t < now_) throw engine::NonMonotonicTime(t, now_);
  fire_until(t, true);
  now_ = t;
}

void TripAccumulator::fire_until(double limit, bool inclusive) {
  for (;;) {
    const double d = start_ + static_cast<double>(next_k_);
    if (d > limit || (!inclusive && d == limit)) return;
    tick(d);
    ++next_k_;
  }
}

void TripAccumulator::tick(double d) {
  std::optional<std::size_t> active;
  if (velo_) {
    const double v = *velo_;
    if (v <= p_.urban_max_kmph) {
      active = 0;
    } else if (v <= p_.rural_max_kmph) {
      active = 1;
    } else if (v > p_.rural_max_kmph) {
      active = 2;
    }
  }
  if (active) {
    auto& s = segs_[*active];
    const double v = *velo_;
    s.avg_velo.push(d, v);
    s.velo_sum.push(d, v);
    if (accel_) {
      s.pctl_dyn.push(d, v * *accel_ / 3.6);
      if (*accel_ > p_.rpa_accel_min_mps2) s.pos_va_sum.push(d, v / 3.6 * *accel_);
    }
    if (nox_) s.nox_sum.push(d, *nox_);
    if (co2_) s.co2_sum.push(d, *co2_);
  }

  stats_.elapsed_s = static_cast<double>(next_k_);
  for (std::size_t i = 0; i < segs_.size(); ++i) {
    auto& s = segs_[i];
    auto& out = stats_.segments[i];
    out.avg_velocity_kmph = s.avg_velo.evaluate(d).value_or(0.0);
    out.distance_km = s.velo_sum.evaluate(d).value_or(0.0) / 3600.0;
    out.dynamics_p95 = s.pctl_dyn.evaluate(d).value_or(0.0);
    const double pos = s.pos_va_sum.evaluate(d).value_or(0.0);
    out.rpa = out.distance_km > 0.0 ? std::optional<double>(pos / (out.distance_km * 1000.0)) : std::nullopt;
    out.nox_mg = s.nox_sum.evaluate(d).value_or(0.0);
    out.co2_g = s.co2_sum.evaluate(d).value_or(0.0);
  }
  stats_.ambient_min_K = ambient_min_;
  stats_.ambient_max_K = ambient_max_;
  stats_.max_speed_kmph = max_speed_;
}

}  // namespace rdemon::rde
