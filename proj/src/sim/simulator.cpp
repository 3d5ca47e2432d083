// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/sim/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace rdemon::sim {

namespace {

constexpr double kMetresPerDegreeLat = 111320.0;

// Portable mapping of the engine output to [0, 1).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

obd::CdpEvent reading(double t, std::uint8_t pid, obd::Bytes payload) {
  return obd::CdpEvent{t, obd::ObdResponse{pid, std::move(payload)}};
}

}  // namespace

obd::Vehicle vehicle_of(const DriveProfile& profile) {
  return obd::Vehicle{profile.vehicle_model, profile.sensor_profile, {}};
}

SimState initial_state(const DriveProfile& profile) {
  SimState s;
  s.lat = profile.start_lat;
  s.lon = profile.start_lon;
  s.rng.seed(profile.seed);
  return s;
}

std::vector<obd::CdpEvent> sample(SimState& s, const DriveProfile& profile) {
  using namespace obd;
  const auto& m = profile.emission;
  const double t = profile.start_epoch + s.t;
  const double pos_a = std::max(s.a_mps2, 0.0);
  const double fuel = m.fuel_idle_Lph + m.fuel_per_kmph * s.v_kmph + m.fuel_per_mps2 * pos_a;
  const double maf = m.maf_idle_gps + m.maf_per_Lph * fuel;
  double nox = m.nox_base_ppm + m.nox_per_dyn_ppm * std::max(s.v_kmph * s.a_mps2 / 3.6, 0.0);
  if (profile.nox_jitter_ppm > 0.0) nox += (2.0 * uniform01(s.rng) - 1.0) * profile.nox_jitter_ppm;
  nox = std::max(nox, 0.0);

  std::vector<CdpEvent> out;
  out.push_back(reading(t, pid::kVehicleSpeed, encode_pid(pid::kVehicleSpeed, s.v_kmph)));
  out.push_back(reading(t, pid::kMafRate, encode_pid(pid::kMafRate, maf)));
  out.push_back(reading(t, pid::kFuelRate, encode_pid(pid::kFuelRate, fuel)));
  out.push_back(reading(t, pid::kNoxSensor, encode_pid(pid::kNoxSensor, nox * m.nox_upstream_factor, nox)));
  out.push_back(reading(t, pid::kAmbientTemp, encode_pid(pid::kAmbientTemp, profile.ambient_K - 273.15)));
  out.push_back(reading(t, pid::kEngineRpm, encode_pid(pid::kEngineRpm, 800.0 + 25.0 * s.v_kmph)));
  out.push_back(CdpEvent{t, GpsFix{s.lat, s.lon, 520.0, s.v_kmph / 3.6}});
  return out;
}

StepResult step(const SimState& state, double dt, const Control& control, const DriveProfile& profile) {
  StepResult r{state, {}};
  auto& s = r.state;
  s.control = control;
  const double limit = 3.0 * std::clamp(control.aggressiveness, 0.0, 1.0);
  double a = std::clamp(0.5 * (control.target_speed_kmph - s.v_kmph) / 3.6, -limit, limit);
  double v = s.v_kmph + a * dt * 3.6;
  if (v < 0.0) {
    v = 0.0;
    a = -s.v_kmph / 3.6 / dt;
  }
  const double km = (s.v_kmph + v) / 2.0 * dt / 3600.0;
  s.odometer_km += km;
  s.lat += km * 1000.0 / kMetresPerDegreeLat;
  s.v_kmph = v;
  s.a_mps2 = a;
  s.t += dt;
  r.events = sample(s, profile);
  return r;
}

Simulator::Simulator(DriveProfile profile) : profile_(std::move(profile)), state_(initial_state(profile_)) {}

std::vector<obd::CdpEvent> Simulator::start() { return sample(state_, profile_); }

std::vector<obd::CdpEvent> Simulator::advance(double dt, const Control& control) {
  auto r = step(state_, dt, control, profile_);
  state_ = std::move(r.state);
  return std::move(r.events);
}

obd::CdpTrip run_profile(const DriveProfile& profile) {
  profile.validate();
  obd::CdpTrip trip;
  trip.vehicle = vehicle_of(profile);
  if (profile.phases.empty()) return trip;
  Simulator sim(profile);
  trip.events = sim.start();
  for (const auto& phase : profile.phases) {
    const Control c{phase.target_speed_kmph, phase.aggressiveness};
    const auto ticks = static_cast<long>(std::ceil(phase.duration_s - 1e-9));
    for (long i = 0; i < ticks; ++i) {
      auto ev = sim.advance(1.0, c);
      trip.events.insert(trip.events.end(), std::make_move_iterator(ev.begin()), std::make_move_iterator(ev.end()));
    }
  }
  return trip;
}

}  // namespace rdemon::sim
