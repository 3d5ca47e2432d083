// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace rdemon::emissions {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wet-basis conversion constants (diesel defaults).
struct EmissionCoefficients {
  double u_nox = 0.001587;             // g/s NOx per ppm per kg/s exhaust
  double fuel_density_kg_per_L = 0.832;
  double co2_per_fuel_kg = 3.17;       // kg CO2 per kg fuel

  void validate() const;
};

/// Reads `key = value` lines; `#` starts a comment. Keys not given keep
/// their defaults. Unknown keys and malformed numbers throw ConfigError.
EmissionCoefficients read_coefficients(std::istream& in);
EmissionCoefficients load_coefficients(const std::string& path);
void write_coefficients(std::ostream& out, const EmissionCoefficients& c);

struct SensorFrame {
  double time = 0.0;
  double maf_gps = 0.0;
  double fuel_rate_Lph = 0.0;
  double nox_ppm_upstream = 0.0;
  double nox_ppm_downstream = 0.0;
  double velocity_kmph = 0.0;
};

/// kg/s: intake air plus burnt fuel.
double exhaust_mass_flow(double maf_gps, double fuel_rate_Lph, const EmissionCoefficients& c = {});

/// mg/s of NOx at the given concentration and exhaust flow.
double nox_mass_flow(double nox_ppm, double exhaust_kgps, const EmissionCoefficients& c = {});

/// g/s of CO2 from the fuel rate.
double co2_mass_flow(double fuel_rate_Lph, const EmissionCoefficients& c = {});

/// NOx mg/s from the downstream sensor of a frame.
double frame_nox_mgps(const SensorFrame& f, const EmissionCoefficients& c = {});

/// Absent when the distance is not positive.
std::optional<double> per_km(double total_mass, double distance_km);

struct TimedValue {
  double time = 0.0;
  double value = 0.0;
};

/// Trapezoidal integral over time-sorted samples; 0 for fewer than two.
double integrate(std::span<const TimedValue> samples);

}  // namespace rdemon::emissions
