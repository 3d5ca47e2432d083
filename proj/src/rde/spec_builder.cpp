// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/rde/spec_builder.hpp"

#include <sstream>

#include "rdemon/lang/parser.hpp"
#include "rdemon/lang/printer.hpp"
#include "rdemon/rde/rules.hpp"

namespace rdemon::rde {

namespace {

using lang::format_duration;
using lang::format_number;

// Message text: integral values print bare.
std::string text(double v) { return format_duration(v); }

std::string segment_filter(SegmentClass s, const RdeParameters& p) {
  const auto u = format_number(p.urban_max_kmph);
  const auto r = format_number(p.rural_max_kmph);
  switch (s) {
    case SegmentClass::Urban: return "velo_kmph <= " + u;
    case SegmentClass::Rural: return "velo_kmph > " + u + " ∧ velo_kmph <= " + r;
    case SegmentClass::Motorway: break;
  }
  return "velo_kmph > " + r;
}

std::string threshold_expr(const std::string& avg, const RdeParameters& p) {
  return "if " + avg + " <= " + format_number(p.dyn_cutoff_kmph) + " then " + format_number(p.dyn_slope) + " * " +
         avg + " + " + format_number(p.dyn_intercept) + " else " + format_number(p.dyn_high_slope) + " * " + avg +
         " + " + format_number(p.dyn_high_intercept);
}

std::string rpa_bound_expr(const std::string& avg, const RdeParameters& p) {
  return "if " + avg + " <= " + format_number(p.rpa_cutoff_kmph) + " then " + format_number(p.rpa_intercept) +
         " - " + format_number(p.rpa_slope) + " * " + avg + " else " + format_number(p.rpa_floor);
}

}  // namespace

std::string build_rde_spec(const RdeParameters& p) {
  p.validate();
  const auto W = format_duration(p.window_s);
  const auto H = format_duration(p.horizon_s);
  const auto gate = "elapsed_s >= " + format_number(p.duration_min_s);
  std::ostringstream os;

  os << "// RDE trip monitor\n"
        "input velo_kmph, accel_mpss, ambient_K, nox_mgps, co2_gps: Float64\n\n"
        "output tick : Float64 @1Hz := 1.0\n"
        "output elapsed_s : Float64 @1Hz := tick.aggregate(over: "
     << H << ", using: sum).defaults(to: 0.0)\n\n";

  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    os << "// " << s << " segment\n"
       << "output is_" << s << " := " << segment_filter(seg, p) << "\n"
       << "output " << s << "_velo : Float64 @1Hz filter: is_" << s << " := velo_kmph\n"
       << "output " << s << "_avg_velo : Float64 @1Hz := " << s << "_velo.aggregate(over: " << W
       << ", using: avg).defaults(to: 0.0)\n"
       << "output " << s << "_dist_km : Float64 @1Hz := " << s << "_velo.aggregate(over: " << H
       << ", using: sum).defaults(to: 0.0) / 3600.0\n"
       << "output " << s << "_dyn : Float64 @1Hz filter: is_" << s << " := velo_kmph * accel_mpss / 3.6\n"
       << "output " << s << "_pctl_dyn : Float64 @1Hz := " << s << "_dyn.aggregate(over: " << W
       << ", using: pctl(95)).defaults(to: 0.0)\n"
       << "output " << s << "_pos_va : Float64 @1Hz filter: is_" << s << " ∧ accel_mpss > "
       << format_number(p.rpa_accel_min_mps2) << " := velo_kmph / 3.6 * accel_mpss\n"
       << "output " << s << "_rpa : Float64 @1Hz := if " << s << "_dist_km > 0.0 then " << s
       << "_pos_va.aggregate(over: " << H << ", using: sum).defaults(to: 0.0) / (" << s
       << "_dist_km * 1000.0) else 0.0\n"
       << "output " << s << "_nox : Float64 @1Hz filter: is_" << s << " := nox_mgps\n"
       << "output " << s << "_nox_mg : Float64 @1Hz := " << s << "_nox.aggregate(over: " << H
       << ", using: sum).defaults(to: 0.0)\n"
       << "output " << s << "_co2 : Float64 @1Hz filter: is_" << s << " := co2_gps\n"
       << "output " << s << "_co2_g : Float64 @1Hz := " << s << "_co2.aggregate(over: " << H
       << ", using: sum).defaults(to: 0.0)\n\n";
  }

  os << "// trip totals\n"
        "output total_km : Float64 @1Hz := urban_dist_km + rural_dist_km + motorway_dist_km\n"
        "output total_nox_mg : Float64 @1Hz := urban_nox_mg + rural_nox_mg + motorway_nox_mg\n"
        "output total_co2_g : Float64 @1Hz := urban_co2_g + rural_co2_g + motorway_co2_g\n"
        "output nox_mg_per_km : Float64 @1Hz filter: total_km > 0.0 := total_nox_mg / total_km\n"
        "output co2_g_per_km : Float64 @1Hz filter: total_km > 0.0 := total_co2_g / total_km\n";
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    os << "output " << s << "_share : Float64 @1Hz := if total_km > 0.0 then " << s
       << "_dist_km / total_km * 100.0 else 0.0\n";
  }
  os << "output max_velo : Float64 @1Hz := velo_kmph.aggregate(over: " << H
     << ", using: max).defaults(to: 0.0)\n"
     << "output ambient_min_K : Float64 @1Hz := ambient_K.aggregate(over: " << H << ", using: min)\n"
     << "output ambient_max_K : Float64 @1Hz := ambient_K.aggregate(over: " << H << ", using: max)\n\n";

  const auto limit = format_number(p.speed_limit_kmph);
  os << "// irrecoverable\n"
     << "trigger velo_kmph > " << limit << " \"speed above " << text(p.speed_limit_kmph) << " km/h\"\n"
     << "trigger ambient_K < " << format_number(p.temp_min_K) << " ∨ ambient_K > " << format_number(p.temp_max_K)
     << " \"ambient temperature outside [" << text(p.temp_min_K) << ", " << text(p.temp_max_K) << "] K\"\n"
     << "trigger elapsed_s > " << format_number(p.duration_max_s) << " \"trip longer than "
     << format_duration(p.duration_max_s) << " s\"\n\n";

  const auto vlo = format_number(p.urban_avg_v_min_kmph);
  const auto vhi = format_number(p.urban_avg_v_max_kmph);
  os << "// checked once the trip may end\n"
     << "trigger " << gate << " ∧ (urban_avg_velo < " << vlo << " ∨ urban_avg_velo > " << vhi
     << ") \"urban average velocity outside [" << text(p.urban_avg_v_min_kmph) << ", "
     << text(p.urban_avg_v_max_kmph) << "] km/h\"\n";
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    const auto& b = share_bounds(p, seg);
    const auto lo = format_number(b.lo_pct);
    const auto hi = format_number(b.hi_pct);
    os << "trigger " << gate << " ∧ (" << s << "_share < " << lo << " ∨ " << s << "_share > " << hi << ") \"" << s
       << " share outside [" << text(b.lo_pct) << ", " << text(b.hi_pct) << "] %\"\n";
  }
  const auto min_km = format_number(p.min_segment_km);
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    os << "trigger " << gate << " ∧ " << s << "_dist_km < " << min_km << " \"" << s << " distance below "
       << text(p.min_segment_km) << " km\"\n";
  }
  for (SegmentClass seg : kSegments) {
    const std::string s(to_string(seg));
    os << "trigger " << gate << " ∧ " << s << "_rpa < (" << rpa_bound_expr(s + "_avg_velo", p) << ") \"" << s
       << " relative positive acceleration below bound\"\n";
  }
  const auto nox = format_number(p.nox_limit_mg_per_km);
  os << "trigger " << gate << " ∧ nox_mg_per_km > " << nox << " \"NOx above " << text(p.nox_limit_mg_per_km)
     << " mg/km\"\n\n";

  const auto cutoff = format_number(p.dyn_cutoff_kmph);
  os << "// driving dynamics\n"
     << "trigger urban_pctl_dyn > (" << threshold_expr("urban_avg_velo", p)
     << ") \"urban dynamics above threshold\"\n"
     << "trigger rural_pctl_dyn > (" << format_number(p.dyn_slope) << " * rural_avg_velo + "
     << format_number(p.dyn_intercept) << ") ∧ rural_avg_velo <= " << cutoff
     << " \"rural dynamics above threshold\"\n"
     << "trigger rural_pctl_dyn > (" << format_number(p.dyn_high_slope) << " * rural_avg_velo + "
     << format_number(p.dyn_high_intercept) << ") ∧ rural_avg_velo > " << cutoff
     << " \"rural dynamics above threshold\"\n"
     << "trigger motorway_pctl_dyn > (" << threshold_expr("motorway_avg_velo", p)
     << ") \"motorway dynamics above threshold\"\n";
  return os.str();
}

std::shared_ptr<const lang::TypedSpecification> compile_rde_spec(const RdeParameters& p) {
  return std::make_shared<const lang::TypedSpecification>(lang::typecheck(lang::parse(build_rde_spec(p))));
}

}  // namespace rdemon::rde
