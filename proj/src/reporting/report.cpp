// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/reporting/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "rdemon/emissions/emissions.hpp"
#include "rdemon/engine/offline.hpp"
#include "rdemon/rde/accumulator.hpp"
#include "rdemon/rde/spec_builder.hpp"

namespace rdemon::reporting {

namespace {

SegmentRow make_row(std::string name, double km, double nox_mg, double co2_g) {
  SegmentRow r;
  r.segment = std::move(name);
  r.distance_km = km;
  r.nox_mg = nox_mg;
  r.co2_g = co2_g;
  r.nox_mg_per_km = emissions::per_km(nox_mg, km);
  r.co2_g_per_km = emissions::per_km(co2_g, km);
  return r;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string rate_text(const std::optional<double>& v) { return v ? fixed(*v, 0) : std::string(); }

nlohmann::json row_json(const SegmentRow& raw) {
  const auto r = rounded(raw);
  nlohmann::json j;
  j["segment"] = r.segment;
  j["distance_km"] = r.distance_km;
  j["nox_mg_per_km"] = r.nox_mg_per_km ? nlohmann::json(std::llround(*r.nox_mg_per_km)) : nlohmann::json();
  j["co2_g_per_km"] = r.co2_g_per_km ? nlohmann::json(std::llround(*r.co2_g_per_km)) : nlohmann::json();
  return j;
}

double as_number(const engine::Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  return std::get<double>(v);
}

}  // namespace

UnknownStream::UnknownStream(const std::string& name) : ReportError("unknown stream " + name) {}

SegmentTable segment_table(std::span<const engine::Event> events, const rde::RdeParameters& params) {
  rde::TripAccumulator acc(params, 0.0);
  for (const auto& e : events) acc.ingest(e);
  if (!events.empty()) acc.advance_time(events.back().time);
  const auto& stats = acc.stats();

  SegmentTable table;
  double km = 0.0, nox = 0.0, co2 = 0.0;
  for (rde::SegmentClass s : rde::kSegments) {
    const auto& seg = stats.segments[static_cast<std::size_t>(s)];
    table.rows.push_back(make_row(std::string(rde::to_string(s)), seg.distance_km, seg.nox_mg, seg.co2_g));
    km += seg.distance_km;
    nox += seg.nox_mg;
    co2 += seg.co2_g;
  }
  table.total = make_row("total", km, nox, co2);
  return table;
}

SegmentTable segment_table(const obd::CdpTrip& trip, const rde::RdeParameters& params,
                           const obd::ConversionOptions& options) {
  const auto profile = obd::detect_profile(trip);
  if (!profile.rde_capable) throw ReportError("trip sensor profile lacks PIDs required for emission reporting");
  const auto events = obd::to_engine_events(trip, profile, options);
  return segment_table(events, params);
}

SegmentRow rounded(const SegmentRow& row) {
  SegmentRow r = row;
  r.distance_km = std::round(row.distance_km * 100.0) / 100.0;
  if (r.nox_mg_per_km) r.nox_mg_per_km = std::round(*r.nox_mg_per_km);
  if (r.co2_g_per_km) r.co2_g_per_km = std::round(*r.co2_g_per_km);
  return r;
}

std::string format_table(const SegmentTable& table) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %12s %14s %13s\n", "segment", "distance_km", "NOx_mg_per_km",
                "CO2_g_per_km");
  out += line;
  auto add = [&](const SegmentRow& raw) {
    const auto r = rounded(raw);
    const auto nox = r.nox_mg_per_km ? fixed(*r.nox_mg_per_km, 0) : std::string("-");
    const auto co2 = r.co2_g_per_km ? fixed(*r.co2_g_per_km, 0) : std::string("-");
    std::snprintf(line, sizeof line, "%-10s %12s %14s %13s\n", r.segment.c_str(), fixed(r.distance_km, 2).c_str(),
                  nox.c_str(), co2.c_str());
    out += line;
  };
  for (const auto& r : table.rows) add(r);
  add(table.total);
  return out;
}

std::string format_csv(const SegmentTable& table) {
  std::string out = "segment,distance_km,nox_mg_per_km,co2_g_per_km\n";
  auto add = [&](const SegmentRow& raw) {
    const auto r = rounded(raw);
    out += r.segment + "," + fixed(r.distance_km, 2) + "," + rate_text(r.nox_mg_per_km) + "," +
           rate_text(r.co2_g_per_km) + "\n";
  };
  for (const auto& r : table.rows) add(r);
  add(table.total);
  return out;
}

nlohmann::json to_json(const SegmentTable& table) {
  nlohmann::json j;
  j["segments"] = nlohmann::json::array();
  for (const auto& r : table.rows) j["segments"].push_back(row_json(r));
  j["total"] = row_json(table.total);
  return j;
}

Series downsample(const Series& s, std::size_t max_points) {
  const std::size_t n = s.t.size();
  if (max_points == 0) return Series{s.stream, {}, {}};
  if (n <= max_points) return s;
  Series out{s.stream, {}, {}};
  auto keep = [&](std::size_t i) {
    out.t.push_back(s.t[i]);
    out.value.push_back(s.value[i]);
  };
  const std::size_t buckets = max_points / 2;
  if (buckets == 0) {
    keep(static_cast<std::size_t>(std::max_element(s.value.begin(), s.value.end()) - s.value.begin()));
    return out;
  }
  for (std::size_t b = 0; b < buckets; ++b) {
    const std::size_t lo = b * n / buckets;
    const std::size_t hi = (b + 1) * n / buckets;
    auto first = s.value.begin() + static_cast<std::ptrdiff_t>(lo);
    auto last = s.value.begin() + static_cast<std::ptrdiff_t>(hi);
    auto [mn, mx] = std::minmax_element(first, last);
    std::size_t i = static_cast<std::size_t>(mn - s.value.begin());
    std::size_t k = static_cast<std::size_t>(mx - s.value.begin());
    if (i == k) {
      i = lo;
      k = hi - 1;
    }
    keep(std::min(i, k));
    keep(std::max(i, k));
  }
  return out;
}

std::vector<Series> series(const obd::CdpTrip& trip, const std::vector<std::string>& streams,
                           std::optional<std::size_t> max_points, const rde::RdeParameters& params,
                           const obd::ConversionOptions& options) {
  const auto events = obd::to_engine_events(trip, options);
  std::map<std::string, Series> found;
  std::set<std::string> wanted(streams.begin(), streams.end());
  for (const auto& e : events) {
    if (wanted.count(e.stream)) {
      auto& s = found[e.stream];
      s.t.push_back(e.time);
      s.value.push_back(as_number(e.value));
    }
  }

  std::set<std::string> missing;
  for (const auto& name : streams) {
    if (!found.count(name)) missing.insert(name);
  }
  if (!missing.empty()) {
    auto spec = rde::compile_rde_spec(params);
    for (const auto& name : missing) {
      auto id = spec->find(name);
      if (!id) throw UnknownStream(name);
      found[name];
    }
    engine::Monitor monitor(spec, 0.0);
    std::vector<engine::Event> inputs;
    for (const auto& e : events) {
      if (monitor.accepts(e.stream)) inputs.push_back(e);
    }
    for (const auto& o : engine::run_offline(monitor, inputs)) {
      const auto* sv = std::get_if<engine::StreamValue>(&o.kind);
      if (!sv || !missing.count(sv->name)) continue;
      auto& s = found[sv->name];
      s.t.push_back(o.time);
      s.value.push_back(as_number(sv->value));
    }
  }

  std::vector<Series> out;
  for (const auto& name : streams) {
    Series s = found[name];
    s.stream = name;
    out.push_back(max_points ? downsample(s, *max_points) : std::move(s));
  }
  return out;
}

nlohmann::json to_json(const std::vector<Series>& series) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : series) j.push_back({{"stream", s.stream}, {"t", s.t}, {"value", s.value}});
  return j;
}

}  // namespace rdemon::reporting
