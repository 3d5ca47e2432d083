// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <vector>

#include "rdemon/obd/cdp.hpp"
#include "rdemon/sim/profile.hpp"

namespace rdemon::sim {

struct Control {
  double target_speed_kmph = 0.0;
  double aggressiveness = 0.5;
};

struct SimState {
  double t = 0.0;  // seconds since start
  double v_kmph = 0.0;
  double a_mps2 = 0.0;
  double odometer_km = 0.0;
  double lat = 0.0;
  double lon = 0.0;
  Control control;
  std::mt19937_64 rng;
};

struct StepResult {
  SimState state;
  std::vector<obd::CdpEvent> events;
};

SimState initial_state(const DriveProfile& profile);

/// Sensor readings for the current state: speed, MAF, fuel rate, NOx pair,
/// ambient temperature and engine speed, then one GPS fix.
std::vector<obd::CdpEvent> sample(SimState& state, const DriveProfile& profile);

/// First-order tracking of the target speed with |a| <= 3 * aggressiveness.
StepResult step(const SimState& state, double dt_s, const Control& control, const DriveProfile& profile);

/// Owns one simulated drive; used by the live service session.
class Simulator {
 public:
  explicit Simulator(DriveProfile profile);

  /// Readings at t = 0.
  std::vector<obd::CdpEvent> start();
  std::vector<obd::CdpEvent> advance(double dt_s, const Control& control);

  const SimState& state() const { return state_; }
  const DriveProfile& profile() const { return profile_; }

 private:
  DriveProfile profile_;
  SimState state_;
};

/// Readings at t = 0, then every phase at 1 Hz. An empty profile yields a
/// trip without events.
obd::CdpTrip run_profile(const DriveProfile& profile);

obd::Vehicle vehicle_of(const DriveProfile& profile);

}  // namespace rdemon::sim
