// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rdemon::sim {

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Phase {
  double duration_s = 0.0;
  double target_speed_kmph = 0.0;
  double aggressiveness = 0.5;  // acceleration bound is 3 m/s^2 times this
};

/// Affine sensor models. Their purpose is to move the monitored quantities
/// across thresholds, not to model a real engine.
struct EmissionModel {
  // fuel [L/h] = fuel_idle + fuel_per_kmph * v + fuel_per_mps2 * max(a, 0)
  double fuel_idle_Lph = 0.8;
  double fuel_per_kmph = 0.04;
  double fuel_per_mps2 = 4.0;
  // MAF [g/s] = maf_idle + maf_per_Lph * fuel
  double maf_idle_gps = 6.0;
  double maf_per_Lph = 4.5;
  // downstream NOx [ppm] = nox_base + nox_per_dyn * max(v*a/3.6, 0)
  double nox_base_ppm = 30.0;
  double nox_per_dyn_ppm = 6.0;
  // upstream NOx [ppm] = nox_upstream_factor * downstream
  double nox_upstream_factor = 5.0;
};

struct DriveProfile {
  std::string name;
  std::string vehicle_model = "simulated diesel";
  std::string sensor_profile = "sim-full";
  double ambient_K = 293.15;
  double start_epoch = 1767225600.0;  // 2026-01-01T00:00:00Z
  double start_lat = 48.137;
  double start_lon = 11.575;
  std::uint64_t seed = 1;
  double nox_jitter_ppm = 0.0;  // uniform noise amplitude on the NOx reading
  EmissionModel emission;
  std::vector<Phase> phases;

  double total_duration_s() const;
  void validate() const;
};

/// JSON profile. Phases may be nested as {"repeat": n, "phases": [...]},
/// which is expanded on load.
DriveProfile parse_profile(std::string_view json_text);
DriveProfile load_profile(const std::string& path);
std::string write_profile(const DriveProfile& profile);

/// Names accepted by builtin_profile.
std::vector<std::string> builtin_profile_names();

/// "valid-rde", "speeding", "alternation" or "city-loop".
DriveProfile builtin_profile(std::string_view name);

}  // namespace rdemon::sim
