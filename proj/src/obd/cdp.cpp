// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/obd/cdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rdemon::obd {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path, "expected a finite number");
  return x;
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) throw SchemaError(path + "." + it.key(), "unknown field");
  }
}

CdpEvent read_event(const json& e, const std::string& path) {
  if (!e.is_object()) throw SchemaError(path, "expected an object");
  CdpEvent ev;
  ev.t = number(field(e, "t", path), path + ".t");
  const auto kind = string(field(e, "kind", path), path + ".kind");
  if (kind == "obd") {
    only_keys(e, {"t", "kind", "pid", "payload"}, path);
    const auto& p = field(e, "pid", path);
    if (!p.is_number_integer() || p.get<long long>() < 0 || p.get<long long>() > 255) {
      throw SchemaError(path + ".pid", "expected an integer in 0..255");
    }
    ObdResponse r;
    r.pid = static_cast<std::uint8_t>(p.get<int>());
    try {
      r.payload = from_hex(string(field(e, "payload", path), path + ".payload"));
    } catch (const DecodeError& err) {
      throw SchemaError(path + ".payload", err.what());
    }
    ev.data = std::move(r);
  } else if (kind == "gps") {
    only_keys(e, {"t", "kind", "lat", "lon", "alt_m", "speed_mps"}, path);
    GpsFix g;
    g.lat = number(field(e, "lat", path), path + ".lat");
    g.lon = number(field(e, "lon", path), path + ".lon");
    g.alt_m = number(field(e, "alt_m", path), path + ".alt_m");
    if (g.lat < -90.0 || g.lat > 90.0) throw SchemaError(path + ".lat", "latitude out of range");
    if (g.lon < -180.0 || g.lon > 180.0) throw SchemaError(path + ".lon", "longitude out of range");
    if (auto it = e.find("speed_mps"); it != e.end()) {
      g.speed_mps = number(*it, path + ".speed_mps");
      if (*g.speed_mps < 0.0) throw SchemaError(path + ".speed_mps", "negative speed");
    }
    ev.data = g;
  } else {
    throw SchemaError(path + ".kind", "expected \"obd\" or \"gps\"");
  }
  return ev;
}

}  // namespace

SchemaError::SchemaError(std::string path, const std::string& message)
    : CdpError(path + ": " + message), path_(std::move(path)) {}

UnsortedEvents::UnsortedEvents(std::size_t index)
    : CdpError("event " + std::to_string(index) + " is earlier than its predecessor"), index_(index) {}

CdpTrip read_cdp(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  only_keys(doc, {"version", "vehicle", "events"}, "$");

  CdpTrip trip;
  trip.version = string(field(doc, "version", "$"), "$.version");
  if (trip.version != kCdpVersion) throw SchemaError("$.version", "unsupported version " + trip.version);

  const auto& veh = field(doc, "vehicle", "$");
  if (!veh.is_object()) throw SchemaError("$.vehicle", "expected an object");
  only_keys(veh, {"model", "sensor_profile", "nox_ppm_per_bit", "nox_offset_ppm"}, "$.vehicle");
  trip.vehicle.model = string(field(veh, "model", "$.vehicle"), "$.vehicle.model");
  trip.vehicle.sensor_profile = string(field(veh, "sensor_profile", "$.vehicle"), "$.vehicle.sensor_profile");
  if (auto it = veh.find("nox_ppm_per_bit"); it != veh.end()) {
    trip.vehicle.nox.ppm_per_bit = number(*it, "$.vehicle.nox_ppm_per_bit");
    if (!(trip.vehicle.nox.ppm_per_bit > 0.0)) throw SchemaError("$.vehicle.nox_ppm_per_bit", "must be positive");
  }
  if (auto it = veh.find("nox_offset_ppm"); it != veh.end()) {
    trip.vehicle.nox.offset_ppm = number(*it, "$.vehicle.nox_offset_ppm");
  }

  const auto& events = field(doc, "events", "$");
  if (!events.is_array()) throw SchemaError("$.events", "expected an array");
  trip.events.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    trip.events.push_back(read_event(events[i], "$.events[" + std::to_string(i) + "]"));
    if (i > 0 && trip.events[i].t < trip.events[i - 1].t) throw UnsortedEvents(i);
  }
  return trip;
}

std::string write_cdp(const CdpTrip& trip) {
  json doc;
  doc["version"] = trip.version;
  json veh;
  veh["model"] = trip.vehicle.model;
  veh["sensor_profile"] = trip.vehicle.sensor_profile;
  if (trip.vehicle.nox.ppm_per_bit != 1.0) veh["nox_ppm_per_bit"] = trip.vehicle.nox.ppm_per_bit;
  if (trip.vehicle.nox.offset_ppm != 0.0) veh["nox_offset_ppm"] = trip.vehicle.nox.offset_ppm;
  doc["vehicle"] = std::move(veh);
  json events = json::array();
  for (const auto& e : trip.events) {
    json j;
    j["t"] = e.t;
    if (const auto* r = std::get_if<ObdResponse>(&e.data)) {
      j["kind"] = "obd";
      j["pid"] = r->pid;
      j["payload"] = to_hex(r->payload);
    } else {
      const auto& g = std::get<GpsFix>(e.data);
      j["kind"] = "gps";
      j["lat"] = g.lat;
      j["lon"] = g.lon;
      j["alt_m"] = g.alt_m;
      if (g.speed_mps) j["speed_mps"] = *g.speed_mps;
    }
    events.push_back(std::move(j));
  }
  doc["events"] = std::move(events);
  return doc.dump() + "\n";
}

CdpTrip load_cdp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CdpError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_cdp(ss.str());
}

void save_cdp(const std::string& path, const CdpTrip& trip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CdpError("cannot write " + path);
  out << write_cdp(trip);
  if (!out) throw CdpError("write failed for " + path);
}

}  // namespace rdemon::obd
