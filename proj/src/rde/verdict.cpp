// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/rde/verdict.hpp"

#include <algorithm>

namespace rdemon::rde {

double TripStats::total_km() const {
  return segments[0].distance_km + segments[1].distance_km + segments[2].distance_km;
}

double TripStats::total_nox_mg() const { return segments[0].nox_mg + segments[1].nox_mg + segments[2].nox_mg; }

double TripStats::total_co2_g() const { return segments[0].co2_g + segments[1].co2_g + segments[2].co2_g; }

double TripStats::share_pct(SegmentClass s) const {
  const double total = total_km();
  return total > 0.0 ? segment(s).distance_km / total * 100.0 : 0.0;
}

std::string_view to_string(Overall o) {
  switch (o) {
    case Overall::Valid: return "valid";
    case Overall::Invalid: return "invalid";
    case Overall::Inconclusive: break;
  }
  return "?";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Violated: return "violated";
    case Status::Pending: break;
  }
  return "pending";
}

const ConstraintEntry* RdeVerdict::find(std::string_view id) const {
  for (const auto& c : constraints) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

RdeVerdict update_verdict(const TripStats& st, const RdeParameters& p) {
  RdeVerdict v;
  const bool decidable = st.elapsed_s >= p.duration_min_s;
  const Status unmet = decidable ? Status::Violated : Status::Pending;
  auto add = [&](std::string id, std::string description, Status status, std::optional<double> value,
                 std::optional<double> lo, std::optional<double> hi) {
    v.constraints.push_back(ConstraintEntry{std::move(id), std::move(description), status, value, lo, hi});
  };

  const bool too_long = st.elapsed_s > p.duration_max_s;
  add("duration", "trip duration [s]", too_long ? Status::Violated : decidable ? Status::Ok : Status::Pending,
      st.elapsed_s, p.duration_min_s, p.duration_max_s);

  bool ambient_bad = false;
  Status ambient = unmet;
  if (st.ambient_min_K && st.ambient_max_K) {
    ambient_bad = *st.ambient_min_K < p.temp_min_K || *st.ambient_max_K > p.temp_max_K;
    ambient = ambient_bad ? Status::Violated : Status::Ok;
  }
  std::optional<double> ambient_value;
  if (st.ambient_min_K && st.ambient_max_K) {
    ambient_value = *st.ambient_min_K < p.temp_min_K ? *st.ambient_min_K : *st.ambient_max_K;
  }
  add("ambient", "ambient temperature [K]", ambient, ambient_value, p.temp_min_K, p.temp_max_K);

  const bool speeding = st.max_speed_kmph > p.speed_limit_kmph;
  add("max_speed", "maximum speed [km/h]", speeding ? Status::Violated : Status::Ok, st.max_speed_kmph,
      std::nullopt, p.speed_limit_kmph);

  const double urban_v = st.segment(SegmentClass::Urban).avg_velocity_kmph;
  const bool urban_v_ok = urban_v >= p.urban_avg_v_min_kmph && urban_v <= p.urban_avg_v_max_kmph;
  add("urban_avg_velocity", "urban average velocity [km/h]", urban_v_ok ? Status::Ok : unmet, urban_v,
      p.urban_avg_v_min_kmph, p.urban_avg_v_max_kmph);

  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    const auto& b = share_bounds(p, seg);
    const double share = st.share_pct(seg);
    const bool ok = share >= b.lo_pct && share <= b.hi_pct;
    add(s + "_share", s + " distance share [%]", ok ? Status::Ok : unmet, share, b.lo_pct, b.hi_pct);
  }
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    const double km = st.segment(seg).distance_km;
    add(s + "_distance", s + " distance [km]", km >= p.min_segment_km ? Status::Ok : unmet, km, p.min_segment_km,
        std::nullopt);
  }
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    const auto& ss = st.segment(seg);
    const double bound = dynamics_threshold(ss.avg_velocity_kmph, p);
    add(s + "_dynamics", s + " 95th percentile of v*a [m2/s3]",
        ss.dynamics_p95 > bound ? Status::Violated : Status::Ok, ss.dynamics_p95, std::nullopt, bound);
  }
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    const auto& ss = st.segment(seg);
    const double bound = rpa_bound(ss.avg_velocity_kmph, p);
    const bool ok = ss.rpa && !(*ss.rpa < bound);
    add(s + "_rpa", s + " relative positive acceleration [m/s2]", ok ? Status::Ok : unmet, ss.rpa, bound,
        std::nullopt);
  }

  const double km = st.total_km();
  if (km > 0.0) {
    v.nox_mg_per_km = st.total_nox_mg() / km;
    v.nox_over_limit = *v.nox_mg_per_km > p.nox_limit_mg_per_km;
  }

  v.irrecoverable = too_long || ambient_bad || speeding;
  const bool all_ok = std::all_of(v.constraints.begin(), v.constraints.end(),
                                  [](const ConstraintEntry& c) { return c.status == Status::Ok; });
  if (v.irrecoverable) {
    v.overall = Overall::Invalid;
  } else if (!decidable) {
    v.overall = Overall::Inconclusive;
  } else {
    v.overall = all_ok ? Overall::Valid : Overall::Invalid;
  }
  return v;
}

TripStats stats_from_monitor(const engine::Monitor& m) {
  auto num = [&](const std::string& name) -> std::optional<double> {
    auto v = m.latest(name);
    if (!v) return std::nullopt;
    return std::get<double>(*v);
  };
  TripStats st;
  st.elapsed_s = num("elapsed_s").value_or(0.0);
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    auto& ss = st.segment(seg);
    ss.distance_km = num(s + "_dist_km").value_or(0.0);
    ss.avg_velocity_kmph = num(s + "_avg_velo").value_or(0.0);
    ss.dynamics_p95 = num(s + "_pctl_dyn").value_or(0.0);
    if (ss.distance_km > 0.0) ss.rpa = num(s + "_rpa");
    ss.nox_mg = num(s + "_nox_mg").value_or(0.0);
    ss.co2_g = num(s + "_co2_g").value_or(0.0);
  }
  st.ambient_min_K = num("ambient_min_K");
  st.ambient_max_K = num("ambient_max_K");
  st.max_speed_kmph = num("max_velo").value_or(0.0);
  return st;
}

}  // namespace rdemon::rde
