// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <sstream>

#include "doctest.h"
#include "rdemon/lang/parser.hpp"
#include "rdemon/lang/printer.hpp"
#include "rdemon/rde/accumulator.hpp"
#include "rdemon/rde/spec_builder.hpp"

using namespace rdemon;
using namespace rdemon::rde;

TEST_CASE("classify_segment") {
  CHECK(classify_segment(36.0) == SegmentClass::Urban);
  CHECK(classify_segment(60.0) == SegmentClass::Urban);
  CHECK(classify_segment(60.000001) == SegmentClass::Rural);
  CHECK(classify_segment(90.0) == SegmentClass::Rural);
  CHECK(classify_segment(95.0) == SegmentClass::Motorway);
  CHECK(classify_segment(0.0) == SegmentClass::Urban);
  CHECK_THROWS_AS(classify_segment(-1.0), DomainError);
  RdeParameters p;
  p.urban_max_kmph = 50.0;
  CHECK(classify_segment(55.0, p) == SegmentClass::Rural);
}

TEST_CASE("dynamics") {
  CHECK(dynamics(36.0, 1.0) == 10.0);
  CHECK(dynamics(0.0, 5.0) == 0.0);
  CHECK(dynamics(74.6, 1.186) == doctest::Approx(74.6 * 1.186 / 3.6));
  CHECK(dynamics(74.6, 1.186) == doctest::Approx(24.5766).epsilon(1e-5));
  CHECK(dynamics(74.6, 1.186) < dynamics_threshold(74.6));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(0.0, 200.0), a(-4.0, 4.0), k(0.1, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double vi = v(rng), ai = a(rng), ki = k(rng);
    CHECK(dynamics(ki * vi, ai) == doctest::Approx(ki * dynamics(vi, ai)));
    CHECK(dynamics(vi, ai) == doctest::Approx(dynamics(ai * 3.6, vi / 3.6)));
  }
}

TEST_CASE("dynamics_threshold") {
  CHECK(dynamics_threshold(74.6) == doctest::Approx(24.5856).epsilon(1e-12));
  CHECK(dynamics_threshold(0.0) == 14.44);
  CHECK(dynamics_threshold(100.0) == doctest::Approx(26.386).epsilon(1e-12));
  // The gap between the two branches at the cutoff.
  const double high_at_cutoff = 0.0742 * 74.6 + 18.966;
  CHECK(dynamics_threshold(74.6) - high_at_cutoff == doctest::Approx(0.08428).epsilon(1e-9));
  CHECK(dynamics_threshold(std::nextafter(74.6, 100.0)) == doctest::Approx(high_at_cutoff));
  for (double x = 0.0; x < 74.5; x += 0.5) CHECK(dynamics_threshold(x + 0.5) > dynamics_threshold(x));
  for (double x = 75.0; x < 200.0; x += 0.5) CHECK(dynamics_threshold(x + 0.5) > dynamics_threshold(x));
}

TEST_CASE("relative positive acceleration") {
  std::vector<MotionSample> cruise(100, MotionSample{10.0, 0.0, 1.0});
  CHECK(rpa(cruise) == 0.0);
  CHECK(rpa_bound(36.0) == doctest::Approx(0.1179));
  CHECK(*rpa(cruise) < rpa_bound(36.0));
  std::vector<MotionSample> one{{10.0, 1.0, 1.0}};
  CHECK(rpa(one) == 1.0);
  std::vector<MotionSample> braking{{10.0, -1.0, 1.0}, {9.0, 0.05, 1.0}};
  CHECK(rpa(braking) == 0.0);
  std::vector<MotionSample> parked{{0.0, 1.0, 1.0}};
  CHECK_FALSE(rpa(parked).has_value());
  CHECK(rpa_bound(100.0) == 0.025);
  CHECK(rpa_bound(94.05) == doctest::Approx(0.1755 - 0.0016 * 94.05));
}

TEST_CASE("parameters are validated") {
  RdeParameters p;
  CHECK_NOTHROW(p.validate());
  p.duration_min_s = 8000.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.rural_share = {50.0, 40.0};
  CHECK_THROWS_AS(build_rde_spec(p), DomainError);
}

TEST_CASE("generated specification") {
  const auto text = build_rde_spec();
  auto ts = lang::typecheck(lang::parse(text));
  CHECK(ts.warnings.empty());
  CHECK(text.find("trigger rural_pctl_dyn > (0.136 * rural_avg_velo + 14.44) ∧ rural_avg_velo <= 74.6") !=
        std::string::npos);
  CHECK(text.find("rural_dyn : Float64 @1Hz filter: is_rural := velo_kmph * accel_mpss / 3.6") !=
        std::string::npos);
  CHECK(text.find("rural_dyn.aggregate(over: 7200, using: pctl(95)).defaults(to: 0.0)") != std::string::npos);
  for (const char* input : {"velo_kmph", "accel_mpss", "ambient_K", "nox_mgps", "co2_gps"}) {
    CHECK(ts.find(input).has_value());
  }
  for (const char* stream : {"is_urban", "is_rural", "is_motorway", "urban_avg_velo", "motorway_dist_km",
                             "rural_pctl_dyn", "urban_nox_mg", "motorway_co2_g", "nox_mg_per_km"}) {
    CHECK(ts.find(stream).has_value());
  }

  RdeParameters p;
  p.window_s = 10.0;
  const auto short_window = build_rde_spec(p);
  CHECK(short_window.find("rural_dyn.aggregate(over: 10, using: pctl(95))") != std::string::npos);
  CHECK(short_window.find("over: 7200,") == std::string::npos);
  p = {};
  p.nox_limit_mg_per_km = 80.0;
  CHECK(build_rde_spec(p).find("nox_mg_per_km > 80.0") != std::string::npos);
  CHECK_NOTHROW(compile_rde_spec(p));
}

TEST_CASE("verdict before the minimum duration is inconclusive") {
  TripStats st;
  st.elapsed_s = 3000.0;
  st.ambient_min_K = st.ambient_max_K = 290.0;
  st.max_speed_kmph = 120.0;
  auto v = update_verdict(st);
  CHECK(v.overall == Overall::Inconclusive);
  CHECK(to_string(v.overall) == "?");
  CHECK_FALSE(v.irrecoverable);
  CHECK(v.find("urban_share")->status == Status::Pending);
  CHECK(v.find("max_speed")->status == Status::Ok);
  CHECK_FALSE(v.nox_mg_per_km.has_value());
}

TEST_CASE("speeding is irrecoverable") {
  TripStats st;
  st.elapsed_s = 100.0;
  st.max_speed_kmph = 165.0;
  auto v = update_verdict(st);
  CHECK(v.overall == Overall::Invalid);
  CHECK(v.irrecoverable);
  CHECK(v.find("max_speed")->status == Status::Violated);
  st.max_speed_kmph = 160.0;
  CHECK_FALSE(update_verdict(st).irrecoverable);
}

namespace {

TripStats valid_stats() {
  TripStats st;
  st.elapsed_s = 5600.0;
  st.ambient_min_K = 285.0;
  st.ambient_max_K = 290.0;
  st.max_speed_kmph = 140.0;
  auto& u = st.segment(SegmentClass::Urban);
  u = {30.0, 28.0, 12.0, 0.15, 3000.0, 5000.0};
  auto& r = st.segment(SegmentClass::Rural);
  r = {26.0, 77.0, 15.0, 0.08, 2000.0, 3500.0};
  auto& m = st.segment(SegmentClass::Motorway);
  m = {27.0, 118.0, 12.0, 0.05, 2500.0, 4200.0};
  return st;
}

}  // namespace

TEST_CASE("a complete trip within bounds is valid") {
  auto st = valid_stats();
  auto v = update_verdict(st);
  for (const auto& c : v.constraints) {
    INFO(c.id);
    CHECK(c.status == Status::Ok);
  }
  CHECK(v.overall == Overall::Valid);
  REQUIRE(v.nox_mg_per_km.has_value());
  CHECK(*v.nox_mg_per_km == doctest::Approx(7500.0 / 83.0));
  CHECK_FALSE(v.nox_over_limit);

  st.segment(SegmentClass::Urban).distance_km = 20.0;  // urban share 27.4 %
  v = update_verdict(st);
  CHECK(v.overall == Overall::Invalid);
  CHECK_FALSE(v.irrecoverable);
  CHECK(v.find("urban_share")->status == Status::Violated);

  st = valid_stats();
  st.elapsed_s = 7201.0;
  v = update_verdict(st);
  CHECK(v.irrecoverable);
  CHECK(v.find("duration")->status == Status::Violated);

  st = valid_stats();
  st.ambient_min_K = 270.0;
  CHECK(update_verdict(st).irrecoverable);

  st = valid_stats();
  st.segment(SegmentClass::Rural).dynamics_p95 = 25.0;  // threshold at 77 km/h is 24.6794
  CHECK(update_verdict(st).find("rural_dynamics")->status == Status::Violated);
}

TEST_CASE("irrecoverable verdicts never become valid") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int run = 0; run < 200; ++run) {
    auto st = valid_stats();
    st.elapsed_s = 1000.0;
    bool latched = false;
    for (int step = 0; step < 60; ++step) {
      // Monotone quantities only grow, the others wander.
      st.elapsed_s += unit(rng) * 150.0;
      st.max_speed_kmph = std::max(st.max_speed_kmph, 100.0 + unit(rng) * 62.0);
      st.ambient_min_K = std::min(*st.ambient_min_K, 272.0 + unit(rng) * 20.0);
      st.ambient_max_K = std::max(*st.ambient_max_K, 285.0 + unit(rng) * 18.5);
      for (auto& s : st.segments) {
        s.distance_km += unit(rng) * 2.0;
        s.dynamics_p95 = 10.0 + unit(rng) * 10.0;
      }
      auto v = update_verdict(st);
      if (latched) {
        CHECK(v.irrecoverable);
        CHECK(v.overall == Overall::Invalid);
      }
      latched = latched || v.irrecoverable;
    }
  }
}

namespace {

// Random drive through all three segments with occasional gaps and bursts.
std::vector<engine::Event> random_trace(std::uint64_t seed, double seconds) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<engine::Event> out;
  double v = 0.0;
  double target = 40.0;
  for (double t = 0.0; t < seconds; t += 0.25 + std::floor(unit(rng) * 4.0) * 0.25) {
    if (unit(rng) < 0.02) target = unit(rng) * 150.0;
    const double a = std::clamp((target - v) / 3.6 * 0.3 + (unit(rng) - 0.5), -3.0, 3.0);
    v = std::max(0.0, v + a * 3.6 * 0.5);
    out.push_back({t, "velo_kmph", std::round(v)});
    if (unit(rng) < 0.9) out.push_back({t, "accel_mpss", a});
    if (unit(rng) < 0.1) out.push_back({t, "ambient_K", 280.0 + unit(rng) * 10.0});
    if (unit(rng) < 0.8) out.push_back({t, "nox_mgps", unit(rng) * 5.0});
    if (unit(rng) < 0.8) out.push_back({t, "co2_gps", unit(rng) * 8.0});
  }
  return out;
}

void check_same(const TripStats& a, const TripStats& b) {
  CHECK(a.elapsed_s == b.elapsed_s);
  CHECK(a.max_speed_kmph == b.max_speed_kmph);
  CHECK(a.ambient_min_K == b.ambient_min_K);
  CHECK(a.ambient_max_K == b.ambient_max_K);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& x = a.segments[i];
    const auto& y = b.segments[i];
    CHECK(x.distance_km == y.distance_km);
    CHECK(x.avg_velocity_kmph == y.avg_velocity_kmph);
    CHECK(x.dynamics_p95 == y.dynamics_p95);
    CHECK(x.rpa == y.rpa);
    CHECK(x.nox_mg == y.nox_mg);
    CHECK(x.co2_g == y.co2_g);
  }
}

}  // namespace

TEST_CASE("engine and direct logic agree") {
  RdeParameters p;
  p.window_s = 600.0;  // short window so eviction is exercised
  auto spec = compile_rde_spec(p);
  int rural_trigger = -1;
  int rural_high_trigger = -1;
  for (std::size_t i = 0; i < spec->spec.triggers.size(); ++i) {
    const auto text = lang::print(*spec->spec.triggers[i].condition);
    if (text == "rural_pctl_dyn > 0.136 * rural_avg_velo + 14.44 ∧ rural_avg_velo <= 74.6") {
      rural_trigger = static_cast<int>(i);
    } else if (text.starts_with("rural_pctl_dyn > 0.0742")) {
      rural_high_trigger = static_cast<int>(i);
    }
  }
  REQUIRE(rural_trigger >= 0);
  REQUIRE(rural_high_trigger >= 0);

  long violated_ticks = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto events = random_trace(seed, 2400.0);
    engine::Monitor monitor(spec, 0.0);
    TripAccumulator acc(p, 0.0);
    for (const auto& e : events) {
      auto outs = monitor.ingest(e);
      acc.ingest(e);
      double tick_time = -1.0;
      for (const auto& o : outs) {
        if (o.time < e.time) tick_time = o.time;
      }
      bool rural_fired = false;
      for (const auto& o : outs) {
        const auto* tf = std::get_if<engine::TriggerFired>(&o.kind);
        if (tf && o.time == tick_time && (tf->trigger == rural_trigger || tf->trigger == rural_high_trigger)) {
          rural_fired = true;
        }
      }
      // Both sides are now at the last tick before the event.
      if (tick_time >= 0.0 && tick_time == acc.stats().elapsed_s) {
        check_same(stats_from_monitor(monitor), acc.stats());
        const bool violated = update_verdict(acc.stats(), p).find("rural_dynamics")->status == Status::Violated;
        CHECK(violated == rural_fired);
        violated_ticks += violated ? 1 : 0;
      }
    }
  }
  CHECK(violated_ticks > 0);
}

TEST_CASE("parameter files") {
  rde::RdeParameters p;
  p.nox_limit_mg_per_km = 80.0;
  p.rural_share.hi_pct = 40.5;
  std::stringstream ss;
  rde::write_parameters(ss, p);
  const auto back = rde::read_parameters(ss);
  CHECK(back.nox_limit_mg_per_km == 80.0);
  CHECK(back.rural_share.hi_pct == 40.5);
  CHECK(back.urban_share.lo_pct == 29.0);

  std::istringstream partial("# tighter limit\nspeed_limit_kmph = 145  # km/h\n\n");
  CHECK(rde::read_parameters(partial).speed_limit_kmph == 145.0);
  std::istringstream unknown("warp = 9\n");
  CHECK_THROWS_AS(rde::read_parameters(unknown), rde::DomainError);
  std::istringstream malformed("temp_min_K = cold\n");
  CHECK_THROWS_AS(rde::read_parameters(malformed), rde::DomainError);
  std::istringstream invalid("duration_min_s = 9000\n");
  CHECK_THROWS_AS(rde::read_parameters(invalid), rde::DomainError);
}
