// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rdemon/obd/pid.hpp"

namespace rdemon::obd {

inline constexpr const char* kCdpVersion = "1.0";

struct ObdResponse {
  std::uint8_t pid = 0;
  Bytes payload;

  bool operator==(const ObdResponse&) const = default;
};

struct GpsFix {
  double lat = 0.0;
  double lon = 0.0;
  double alt_m = 0.0;
  std::optional<double> speed_mps;

  bool operator==(const GpsFix&) const = default;
};

struct CdpEvent {
  double t = 0.0;  // unix epoch seconds
  std::variant<ObdResponse, GpsFix> data;

  bool is_obd() const { return std::holds_alternative<ObdResponse>(data); }
  bool operator==(const CdpEvent&) const = default;
};

struct Vehicle {
  std::string model;
  std::string sensor_profile;
  NoxScaling nox;  // written only when it differs from the default

  bool operator==(const Vehicle& o) const {
    return model == o.model && sensor_profile == o.sensor_profile && nox.ppm_per_bit == o.nox.ppm_per_bit &&
           nox.offset_ppm == o.nox.offset_ppm;
  }
};

struct CdpTrip {
  std::string version = kCdpVersion;
  Vehicle vehicle;
  std::vector<CdpEvent> events;

  bool operator==(const CdpTrip&) const = default;
};

class CdpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural problem; path() is a JSON path such as "$.events[3].payload".
class SchemaError : public CdpError {
 public:
  SchemaError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class UnsortedEvents : public CdpError {
 public:
  explicit UnsortedEvents(std::size_t index);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

CdpTrip read_cdp(std::string_view text);

/// Canonical form: compact JSON with sorted keys, lowercase hex payloads and
/// a trailing newline.
std::string write_cdp(const CdpTrip& trip);

CdpTrip load_cdp(const std::string& path);
void save_cdp(const std::string& path, const CdpTrip& trip);

}  // namespace rdemon::obd
