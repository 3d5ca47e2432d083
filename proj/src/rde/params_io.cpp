// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <utility>

#include "rdemon/lang/printer.hpp"
#include "rdemon/rde/params.hpp"

namespace rdemon::rde {

namespace {

using Field = std::pair<std::string_view, double RdeParameters::*>;

// ShareBounds members cannot be named through a single pointer-to-member,
// so they are handled next to this table.
constexpr Field kFields[] = {
    {"temp_min_K", &RdeParameters::temp_min_K},
    {"temp_max_K", &RdeParameters::temp_max_K},
    {"duration_min_s", &RdeParameters::duration_min_s},
    {"duration_max_s", &RdeParameters::duration_max_s},
    {"urban_avg_v_min_kmph", &RdeParameters::urban_avg_v_min_kmph},
    {"urban_avg_v_max_kmph", &RdeParameters::urban_avg_v_max_kmph},
    {"speed_limit_kmph", &RdeParameters::speed_limit_kmph},
    {"nox_limit_mg_per_km", &RdeParameters::nox_limit_mg_per_km},
    {"expected_trip_km", &RdeParameters::expected_trip_km},
    {"window_s", &RdeParameters::window_s},
    {"urban_max_kmph", &RdeParameters::urban_max_kmph},
    {"rural_max_kmph", &RdeParameters::rural_max_kmph},
    {"min_segment_km", &RdeParameters::min_segment_km},
    {"dyn_slope", &RdeParameters::dyn_slope},
    {"dyn_intercept", &RdeParameters::dyn_intercept},
    {"dyn_cutoff_kmph", &RdeParameters::dyn_cutoff_kmph},
    {"dyn_high_slope", &RdeParameters::dyn_high_slope},
    {"dyn_high_intercept", &RdeParameters::dyn_high_intercept},
    {"rpa_slope", &RdeParameters::rpa_slope},
    {"rpa_intercept", &RdeParameters::rpa_intercept},
    {"rpa_cutoff_kmph", &RdeParameters::rpa_cutoff_kmph},
    {"rpa_floor", &RdeParameters::rpa_floor},
    {"rpa_accel_min_mps2", &RdeParameters::rpa_accel_min_mps2},
    {"horizon_s", &RdeParameters::horizon_s},
};

double* share_field(RdeParameters& p, std::string_view key) {
  const std::pair<std::string_view, ShareBounds*> shares[] = {
      {"urban_share", &p.urban_share}, {"rural_share", &p.rural_share}, {"motorway_share", &p.motorway_share}};
  for (const auto& [name, b] : shares) {
    if (key.size() == name.size() + 7 && key.starts_with(name)) {
      const auto rest = key.substr(name.size());
      if (rest == "_lo_pct") return &b->lo_pct;
      if (rest == "_hi_pct") return &b->hi_pct;
    }
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

RdeParameters read_parameters(std::istream& in) {
  RdeParameters p;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto where = "line " + std::to_string(line) + ": ";
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw DomainError(where + "expected key = value");
    const auto key = trim(s.substr(0, eq));
    const auto text = trim(s.substr(eq + 1));
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw DomainError(where + "malformed number '" + std::string(text) + "'");
    }
    double* slot = share_field(p, key);
    for (const auto& [name, member] : kFields) {
      if (name == key) slot = &(p.*member);
    }
    if (!slot) throw DomainError(where + "unknown key '" + std::string(key) + "'");
    *slot = value;
  }
  p.validate();
  return p;
}

RdeParameters load_parameters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  return read_parameters(in);
}

void write_parameters(std::ostream& out, const RdeParameters& p) {
  for (const auto& [name, member] : kFields) out << name << " = " << lang::format_number(p.*member) << '\n';
  const std::pair<const char*, const ShareBounds*> shares[] = {
      {"urban_share", &p.urban_share}, {"rural_share", &p.rural_share}, {"motorway_share", &p.motorway_share}};
  for (const auto& [name, b] : shares) {
    out << name << "_lo_pct = " << lang::format_number(b->lo_pct) << '\n';
    out << name << "_hi_pct = " << lang::format_number(b->hi_pct) << '\n';
  }
}

}  // namespace rdemon::rde
