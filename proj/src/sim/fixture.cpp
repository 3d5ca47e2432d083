// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/sim/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdemon::sim {

namespace {

using rde::SegmentClass;

struct Tick {
  double v_kmph = 0.0;
  double maf_gps = 0.0;
};

// Speeds whose per-second distance is a whole number of hundredths of a km.
std::vector<double> speed_plan(SegmentClass s, long hundredths) {
  std::vector<double> v;
  switch (s) {
    case SegmentClass::Urban: v.assign(static_cast<std::size_t>(hundredths), 36.0); break;
    case SegmentClass::Rural: {
      long rest = hundredths;
      if (rest % 2 != 0) {
        if (rest < 5) throw std::invalid_argument("rural fixture distance too short");
        v.assign(2, 90.0);
        rest -= 5;
      }
      v.insert(v.end(), static_cast<std::size_t>(rest / 2), 72.0);
      break;
    }
    case SegmentClass::Motorway: {
      const long fast = hundredths % 3;
      if (hundredths < 4 * fast) throw std::invalid_argument("motorway fixture distance too short");
      v.assign(static_cast<std::size_t>(fast), 144.0);
      v.insert(v.end(), static_cast<std::size_t>((hundredths - 4 * fast) / 3), 108.0);
      break;
    }
  }
  return v;
}

double maf_of(SegmentClass s) {
  switch (s) {
    case SegmentClass::Urban: return 20.0;
    case SegmentClass::Rural: return 35.0;
    case SegmentClass::Motorway: break;
  }
  return 55.0;
}

obd::CdpEvent reading(double t, std::uint8_t p, obd::Bytes payload) {
  return obd::CdpEvent{t, obd::ObdResponse{p, std::move(payload)}};
}

}  // namespace

obd::CdpTrip segment_fixture(const std::vector<SegmentTarget>& segments, const emissions::EmissionCoefficients& c) {
  c.validate();
  obd::CdpTrip trip;
  trip.vehicle = obd::Vehicle{"fixture", "sim-full", {}};
  if (segments.empty()) return trip;
  const double epoch = 1767225600.0;
  const double co2_per_code = emissions::co2_mass_flow(1.0 / 20.0, c);
  long tick = 0;

  auto emit = [&](double v, double maf, long fuel_code, long nox_code) {
    const double t = epoch + static_cast<double>(tick);
    trip.events.push_back(reading(t, obd::pid::kVehicleSpeed, obd::encode_pid(obd::pid::kVehicleSpeed, v)));
    trip.events.push_back(reading(t, obd::pid::kMafRate, obd::encode_pid(obd::pid::kMafRate, maf)));
    trip.events.push_back(
        reading(t, obd::pid::kFuelRate, obd::encode_pid(obd::pid::kFuelRate, static_cast<double>(fuel_code) / 20.0)));
    const double ppm = static_cast<double>(nox_code);
    trip.events.push_back(reading(t, obd::pid::kNoxSensor, obd::encode_pid(obd::pid::kNoxSensor, ppm, ppm)));
    trip.events.push_back(reading(t, obd::pid::kAmbientTemp, obd::encode_pid(obd::pid::kAmbientTemp, 20.0)));
  };

  // t = 0 only seeds the held values; accumulation starts at the first tick.
  emit(speed_plan(segments.front().segment, 100).front(), maf_of(segments.front().segment), 0, 0);

  for (const auto& seg : segments) {
    const long hundredths = std::lround(seg.distance_km * 100.0);
    if (hundredths <= 0 || !(seg.nox_mg_per_km >= 0.0) || !(seg.co2_g_per_km >= 0.0)) {
      throw std::invalid_argument("fixture segments need a positive distance and non-negative rates");
    }
    const auto speeds = speed_plan(seg.segment, hundredths);
    const double maf = maf_of(seg.segment);
    const double km = static_cast<double>(hundredths) / 100.0;
    const double nox_target = seg.nox_mg_per_km * km;
    const double co2_target = seg.co2_g_per_km * km;
    double nox_sum = 0.0;
    double co2_sum = 0.0;
    const auto n = static_cast<double>(speeds.size());
    for (std::size_t i = 0; i < speeds.size(); ++i) {
      ++tick;
      const double frac = static_cast<double>(i + 1) / n;
      const long fuel_code = std::max(0L, std::lround((co2_target * frac - co2_sum) / co2_per_code));
      const double fuel = static_cast<double>(fuel_code) / 20.0;
      co2_sum += emissions::co2_mass_flow(fuel, c);
      const double per_ppm = emissions::nox_mass_flow(1.0, emissions::exhaust_mass_flow(maf, fuel, c), c);
      const long nox_code = std::clamp(std::lround((nox_target * frac - nox_sum) / per_ppm), 0L, 65535L);
      nox_sum += emissions::nox_mass_flow(static_cast<double>(nox_code), emissions::exhaust_mass_flow(maf, fuel, c), c);
      emit(speeds[i], maf, fuel_code, nox_code);
    }
  }
  return trip;
}

// CO2 rates are nudged by 0.2 g/km inside their rounding interval so the
// reference total rows round to their reference values as well.
std::vector<SegmentTarget> drive1_targets() {
  return {{SegmentClass::Urban, 35.45, 137.0, 222.2},
          {SegmentClass::Rural, 22.33, 305.0, 154.2},
          {SegmentClass::Motorway, 26.10, 241.0, 153.2}};
}

std::vector<SegmentTarget> drive2_targets() {
  return {{SegmentClass::Urban, 37.46, 102.0, 250.8},
          {SegmentClass::Rural, 27.40, 90.0, 171.8},
          {SegmentClass::Motorway, 25.37, 105.0, 174.8}};
}

}  // namespace rdemon::sim
