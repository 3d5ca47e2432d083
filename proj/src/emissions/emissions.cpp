// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/emissions/emissions.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "rdemon/lang/printer.hpp"

namespace rdemon::emissions {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void EmissionCoefficients::validate() const {
  if (!(u_nox > 0.0)) throw ConfigError("u_nox must be positive");
  if (!(fuel_density_kg_per_L > 0.0)) throw ConfigError("fuel_density_kg_per_L must be positive");
  if (!(co2_per_fuel_kg > 0.0)) throw ConfigError("co2_per_fuel_kg must be positive");
}

EmissionCoefficients read_coefficients(std::istream& in) {
  EmissionCoefficients c;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const auto key = trim(s.substr(0, eq));
    const auto text = trim(s.substr(eq + 1));
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ConfigError("line " + std::to_string(line) + ": malformed number '" + std::string(text) + "'");
    }
    if (key == "u_nox") {
      c.u_nox = value;
    } else if (key == "fuel_density_kg_per_L") {
      c.fuel_density_kg_per_L = value;
    } else if (key == "co2_per_fuel_kg") {
      c.co2_per_fuel_kg = value;
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
    }
  }
  c.validate();
  return c;
}

EmissionCoefficients load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_coefficients(in);
}

void write_coefficients(std::ostream& out, const EmissionCoefficients& c) {
  out << "u_nox = " << lang::format_number(c.u_nox) << '\n'
      << "fuel_density_kg_per_L = " << lang::format_number(c.fuel_density_kg_per_L) << '\n'
      << "co2_per_fuel_kg = " << lang::format_number(c.co2_per_fuel_kg) << '\n';
}

double exhaust_mass_flow(double maf_gps, double fuel_rate_Lph, const EmissionCoefficients& c) {
  return maf_gps / 1000.0 + fuel_rate_Lph * c.fuel_density_kg_per_L / 3600.0;
}

double nox_mass_flow(double nox_ppm, double exhaust_kgps, const EmissionCoefficients& c) {
  return c.u_nox * nox_ppm * exhaust_kgps * 1000.0;
}

double co2_mass_flow(double fuel_rate_Lph, const EmissionCoefficients& c) {
  return fuel_rate_Lph * c.fuel_density_kg_per_L * c.co2_per_fuel_kg * 1000.0 / 3600.0;
}

double frame_nox_mgps(const SensorFrame& f, const EmissionCoefficients& c) {
  return nox_mass_flow(f.nox_ppm_downstream, exhaust_mass_flow(f.maf_gps, f.fuel_rate_Lph, c), c);
}

std::optional<double> per_km(double total_mass, double distance_km) {
  if (!(distance_km > 0.0)) return std::nullopt;
  return total_mass / distance_km;
}

double integrate(std::span<const TimedValue> samples) {
  double area = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    area += (samples[i].time - samples[i - 1].time) * (samples[i].value + samples[i - 1].value) / 2.0;
  }
  return area;
}

}  // namespace rdemon::emissions
