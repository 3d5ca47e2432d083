// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdemon::obd {

using Bytes = std::vector<std::uint8_t>;

namespace pid {
inline constexpr std::uint8_t kEngineCoolant = 0x05;
inline constexpr std::uint8_t kEngineRpm = 0x0C;
inline constexpr std::uint8_t kVehicleSpeed = 0x0D;
inline constexpr std::uint8_t kMafRate = 0x10;
inline constexpr std::uint8_t kAmbientTemp = 0x46;
inline constexpr std::uint8_t kFuelRate = 0x5E;
inline constexpr std::uint8_t kNoxSensor = 0x83;
}  // namespace pid

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownPid : public DecodeError {
 public:
  explicit UnknownPid(std::uint8_t pid);
};

class PayloadLength : public DecodeError {
 public:
  PayloadLength(std::uint8_t pid, std::size_t expected, std::size_t got);
};

/// Linear map from raw NOx sensor counts to ppm. Varies by manufacturer.
struct NoxScaling {
  double ppm_per_bit = 1.0;
  double offset_ppm = 0.0;
};

struct Reading {
  std::string stream;  // engine input name, e.g. "velo_kmph"
  double value = 0.0;
  std::string unit;
};

struct PidInfo {
  std::uint8_t pid;
  const char* name;
  std::size_t payload_length;
};

/// Every PID the decoder understands.
std::span<const PidInfo> pid_table();

/// Mode-01 decoding. 0x83 yields two readings (upstream, downstream); the
/// first payload byte (sensor presence mask) is not interpreted.
std::vector<Reading> decode_pid(std::uint8_t pid, std::span<const std::uint8_t> payload,
                                const NoxScaling& nox = {});

/// Inverse of decode_pid, rounding to the nearest raw code and clamping to
/// the code range. `second` is the downstream value for 0x83.
Bytes encode_pid(std::uint8_t pid, double value, double second = 0.0, const NoxScaling& nox = {});

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Accepts upper or lower case; throws DecodeError on odd length or non-hex.
Bytes from_hex(std::string_view hex);

}  // namespace rdemon::obd
