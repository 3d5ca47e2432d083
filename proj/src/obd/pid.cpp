// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/obd/pid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace rdemon::obd {

namespace {

constexpr std::array<PidInfo, 7> kTable = {{
    {pid::kEngineCoolant, "engine coolant temperature", 1},
    {pid::kEngineRpm, "engine speed", 2},
    {pid::kVehicleSpeed, "vehicle speed", 1},
    {pid::kMafRate, "mass air flow rate", 2},
    {pid::kAmbientTemp, "ambient air temperature", 1},
    {pid::kFuelRate, "engine fuel rate", 2},
    {pid::kNoxSensor, "NOx sensor", 5},
}};

std::string hex_byte(std::uint8_t b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned>(b));
  return buf;
}

const PidInfo& lookup(std::uint8_t p) {
  auto it = std::find_if(kTable.begin(), kTable.end(), [&](const PidInfo& i) { return i.pid == p; });
  if (it == kTable.end()) throw UnknownPid(p);
  return *it;
}

double word(std::span<const std::uint8_t> b, std::size_t i) { return 256.0 * b[i] + b[i + 1]; }

std::uint8_t code8(double x) { return static_cast<std::uint8_t>(std::clamp(std::round(x), 0.0, 255.0)); }

void put16(Bytes& out, double x) {
  const auto c = static_cast<unsigned>(std::clamp(std::round(x), 0.0, 65535.0));
  out.push_back(static_cast<std::uint8_t>(c >> 8));
  out.push_back(static_cast<std::uint8_t>(c & 0xFF));
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

UnknownPid::UnknownPid(std::uint8_t p) : DecodeError("unknown PID " + hex_byte(p)) {}

PayloadLength::PayloadLength(std::uint8_t p, std::size_t expected, std::size_t got)
    : DecodeError("PID " + hex_byte(p) + " expects " + std::to_string(expected) + " payload bytes, got " +
                  std::to_string(got)) {}

std::span<const PidInfo> pid_table() { return kTable; }

std::vector<Reading> decode_pid(std::uint8_t p, std::span<const std::uint8_t> b, const NoxScaling& nox) {
  const auto& info = lookup(p);
  if (b.size() != info.payload_length) throw PayloadLength(p, info.payload_length, b.size());
  switch (p) {
    case pid::kEngineCoolant: return {{"coolant_C", b[0] - 40.0, "degC"}};
    case pid::kEngineRpm: return {{"rpm", word(b, 0) / 4.0, "rpm"}};
    case pid::kVehicleSpeed: return {{"velo_kmph", static_cast<double>(b[0]), "km/h"}};
    case pid::kMafRate: return {{"maf_gps", word(b, 0) / 100.0, "g/s"}};
    case pid::kAmbientTemp: return {{"ambient_C", b[0] - 40.0, "degC"}};
    case pid::kFuelRate: return {{"fuel_Lph", word(b, 0) / 20.0, "L/h"}};
    case pid::kNoxSensor:
      return {{"nox_ppm_up", word(b, 1) * nox.ppm_per_bit + nox.offset_ppm, "ppm"},
              {"nox_ppm_down", word(b, 3) * nox.ppm_per_bit + nox.offset_ppm, "ppm"}};
    default: break;
  }
  throw UnknownPid(p);
}

Bytes encode_pid(std::uint8_t p, double value, double second, const NoxScaling& nox) {
  lookup(p);
  Bytes out;
  switch (p) {
    case pid::kEngineCoolant:
    case pid::kAmbientTemp: out.push_back(code8(value + 40.0)); break;
    case pid::kEngineRpm: put16(out, value * 4.0); break;
    case pid::kVehicleSpeed: out.push_back(code8(value)); break;
    case pid::kMafRate: put16(out, value * 100.0); break;
    case pid::kFuelRate: put16(out, value * 20.0); break;
    case pid::kNoxSensor:
      out.push_back(0x03);
      put16(out, (value - nox.offset_ppm) / nox.ppm_per_bit);
      put16(out, (second - nox.offset_ppm) / nox.ppm_per_bit);
      break;
    default: throw UnknownPid(p);
  }
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0x0F]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("hex payload has odd length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_digit(hex[i]);
    const int lo = hex_digit(hex[i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit in payload");
    out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return out;
}

}  // namespace rdemon::obd
