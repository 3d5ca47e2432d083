// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/sim/profile.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace rdemon::sim {

using nlohmann::json;

namespace {

double num(const json& obj, const char* key, double fallback, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ProfileError(path + "." + key + ": expected a number");
  return it->get<double>();
}

void expand(const json& phases, const std::string& path, std::vector<Phase>& out, int depth) {
  if (!phases.is_array()) throw ProfileError(path + ": expected an array");
  if (depth > 8) throw ProfileError(path + ": repeat blocks nested too deeply");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto& ph = phases[i];
    const auto here = path + "[" + std::to_string(i) + "]";
    if (!ph.is_object()) throw ProfileError(here + ": expected an object");
    if (ph.contains("repeat")) {
      const auto& n = ph["repeat"];
      if (!n.is_number_integer() || n.get<long long>() < 0 || n.get<long long>() > 100000) {
        throw ProfileError(here + ".repeat: expected a non-negative integer");
      }
      if (!ph.contains("phases")) throw ProfileError(here + ".phases: missing");
      for (long long k = 0; k < n.get<long long>(); ++k) expand(ph["phases"], here + ".phases", out, depth + 1);
      continue;
    }
    Phase p;
    p.duration_s = num(ph, "duration_s", -1.0, here);
    p.target_speed_kmph = num(ph, "target_kmph", -1.0, here);
    p.aggressiveness = num(ph, "aggressiveness", 0.5, here);
    out.push_back(p);
  }
}

const std::map<std::string, std::string, std::less<>>& builtins();

}  // namespace

double DriveProfile::total_duration_s() const {
  double total = 0.0;
  for (const auto& p : phases) total += std::ceil(p.duration_s - 1e-9);
  return total;
}

void DriveProfile::validate() const {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto& p = phases[i];
    const auto where = "phase " + std::to_string(i);
    if (!(p.duration_s > 0.0)) throw ProfileError(where + ": duration_s must be positive");
    if (!(p.target_speed_kmph >= 0.0)) throw ProfileError(where + ": target_kmph must be non-negative");
    if (!(p.aggressiveness >= 0.0 && p.aggressiveness <= 1.0)) {
      throw ProfileError(where + ": aggressiveness must be within [0, 1]");
    }
  }
  if (!(ambient_K > 0.0)) throw ProfileError("ambient_K must be positive");
  if (!(nox_jitter_ppm >= 0.0)) throw ProfileError("nox_jitter_ppm must be non-negative");
}

DriveProfile parse_profile(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ProfileError(std::string("malformed profile JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProfileError("$: expected an object");
  DriveProfile p;
  if (doc.contains("name")) p.name = doc["name"].get<std::string>();
  if (doc.contains("vehicle")) {
    const auto& v = doc["vehicle"];
    if (v.contains("model")) p.vehicle_model = v["model"].get<std::string>();
    if (v.contains("sensor_profile")) p.sensor_profile = v["sensor_profile"].get<std::string>();
  }
  p.ambient_K = num(doc, "ambient_K", p.ambient_K, "$");
  p.start_epoch = num(doc, "start_epoch", p.start_epoch, "$");
  p.start_lat = num(doc, "start_lat", p.start_lat, "$");
  p.start_lon = num(doc, "start_lon", p.start_lon, "$");
  p.nox_jitter_ppm = num(doc, "nox_jitter_ppm", p.nox_jitter_ppm, "$");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ProfileError("$.seed: expected a non-negative integer");
    p.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("emission")) {
    const auto& e = doc["emission"];
    auto& m = p.emission;
    m.fuel_idle_Lph = num(e, "fuel_idle_Lph", m.fuel_idle_Lph, "$.emission");
    m.fuel_per_kmph = num(e, "fuel_per_kmph", m.fuel_per_kmph, "$.emission");
    m.fuel_per_mps2 = num(e, "fuel_per_mps2", m.fuel_per_mps2, "$.emission");
    m.maf_idle_gps = num(e, "maf_idle_gps", m.maf_idle_gps, "$.emission");
    m.maf_per_Lph = num(e, "maf_per_Lph", m.maf_per_Lph, "$.emission");
    m.nox_base_ppm = num(e, "nox_base_ppm", m.nox_base_ppm, "$.emission");
    m.nox_per_dyn_ppm = num(e, "nox_per_dyn_ppm", m.nox_per_dyn_ppm, "$.emission");
    m.nox_upstream_factor = num(e, "nox_upstream_factor", m.nox_upstream_factor, "$.emission");
  }
  if (doc.contains("phases")) expand(doc["phases"], "$.phases", p.phases, 0);
  p.validate();
  return p;
}

DriveProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProfileError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str());
}

std::string write_profile(const DriveProfile& p) {
  nlohmann::ordered_json doc;
  doc["name"] = p.name;
  doc["vehicle"] = {{"model", p.vehicle_model}, {"sensor_profile", p.sensor_profile}};
  doc["ambient_K"] = p.ambient_K;
  doc["start_epoch"] = p.start_epoch;
  doc["start_lat"] = p.start_lat;
  doc["start_lon"] = p.start_lon;
  doc["seed"] = p.seed;
  doc["nox_jitter_ppm"] = p.nox_jitter_ppm;
  const auto& m = p.emission;
  doc["emission"] = {{"fuel_idle_Lph", m.fuel_idle_Lph},     {"fuel_per_kmph", m.fuel_per_kmph},
                     {"fuel_per_mps2", m.fuel_per_mps2},     {"maf_idle_gps", m.maf_idle_gps},
                     {"maf_per_Lph", m.maf_per_Lph},         {"nox_base_ppm", m.nox_base_ppm},
                     {"nox_per_dyn_ppm", m.nox_per_dyn_ppm}, {"nox_upstream_factor", m.nox_upstream_factor}};
  auto phases = nlohmann::ordered_json::array();
  for (const auto& ph : p.phases) {
    phases.push_back({{"duration_s", ph.duration_s},
                      {"target_kmph", ph.target_speed_kmph},
                      {"aggressiveness", ph.aggressiveness}});
  }
  doc["phases"] = std::move(phases);
  return doc.dump(2) + "\n";
}

std::vector<std::string> builtin_profile_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : builtins()) names.push_back(name);
  return names;
}

DriveProfile builtin_profile(std::string_view name) {
  const auto& all = builtins();
  auto it = all.find(name);
  if (it == all.end()) throw ProfileError("unknown builtin profile " + std::string(name));
  return parse_profile(it->second);
}

namespace {

const std::map<std::string, std::string, std::less<>>& builtins() {
  static const std::map<std::string, std::string, std::less<>> profiles = {
#include "builtin_profiles.inc"
  };
  return profiles;
}

}  // namespace

}  // namespace rdemon::sim
