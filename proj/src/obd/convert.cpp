// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/obd/convert.hpp"

#include <algorithm>
#include <array>

namespace rdemon::obd {

namespace {

constexpr std::array<std::uint8_t, 5> kRequired = {pid::kVehicleSpeed, pid::kMafRate, pid::kFuelRate,
                                                   pid::kAmbientTemp, pid::kNoxSensor};

double raw_at(std::span<const VelocitySample> s, std::size_t i) {
  const std::size_t n = s.size();
  const std::size_t lo = i == 0 ? 0 : i - 1;
  const std::size_t hi = i + 1 == n ? i : i + 1;
  return (s[hi].v_mps - s[lo].v_mps) / (s[hi].t - s[lo].t);
}

double accel_at(std::span<const VelocitySample> s, std::size_t i, bool smooth) {
  if (!smooth) return raw_at(s, i);
  double sum = raw_at(s, i);
  int count = 1;
  if (i > 0) {
    sum += raw_at(s, i - 1);
    ++count;
  }
  if (i + 1 < s.size()) {
    sum += raw_at(s, i + 1);
    ++count;
  }
  return sum / count;
}

}  // namespace

std::span<const std::uint8_t> required_pids() { return kRequired; }

SensorProfile detect_profile(std::span<const CdpEvent> events, double window_s, const NoxScaling& nox) {
  SensorProfile p;
  p.nox = nox;
  if (events.empty()) return p;
  const double t0 = events.front().t;
  for (const auto& e : events) {
    if (e.t - t0 > window_s) break;
    if (const auto* r = std::get_if<ObdResponse>(&e.data)) p.pids.insert(r->pid);
  }
  p.rde_capable = std::all_of(kRequired.begin(), kRequired.end(), [&](std::uint8_t x) { return p.pids.count(x); });
  return p;
}

SensorProfile detect_profile(const CdpTrip& trip, double window_s) {
  return detect_profile(trip.events, window_s, trip.vehicle.nox);
}

std::vector<AccelSample> derive_acceleration(std::span<const VelocitySample> samples, bool smooth) {
  std::vector<AccelSample> out;
  if (samples.size() < 2) return out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out.push_back({samples[i].t, accel_at(samples, i, smooth)});
  return out;
}

EventConverter::EventConverter(ConversionOptions options) : opt_(std::move(options)) {}

std::vector<engine::Event> EventConverter::push(const CdpEvent& e, std::size_t index) {
  if (!origin_) {
    origin_ = e.t;
    last_t_ = e.t;
  }
  if (e.t < last_t_) throw UnsortedEvents(index);
  last_t_ = e.t;
  const double t = e.t - *origin_;
  if (open_ && open_->t != t) close_group();
  if (!open_) open_ = Group{t, {}, std::nullopt, true};
  auto& g = *open_;

  if (const auto* r = std::get_if<ObdResponse>(&e.data)) {
    std::vector<Reading> readings;
    try {
      readings = decode_pid(r->pid, r->payload, opt_.nox);
    } catch (const DecodeError& err) {
      throw DecodeError("event " + std::to_string(index) + ": " + err.what());
    }
    for (auto& rd : readings) {
      if (rd.stream == "ambient_C") {
        g.events.push_back({t, "ambient_K", rd.value + 273.15});
        continue;
      }
      if (rd.stream == "velo_kmph") {
        g.velocity_index = velocity_.size();  // provisional, fixed in close_group
      } else if (rd.stream == "maf_gps") {
        maf_ = rd.value;
        emission_inputs_changed_ = true;
      } else if (rd.stream == "fuel_Lph") {
        fuel_ = rd.value;
        emission_inputs_changed_ = true;
        fuel_changed_ = true;
      } else if (rd.stream == "nox_ppm_down") {
        nox_down_ = rd.value;
        emission_inputs_changed_ = true;
      }
      g.events.push_back({t, rd.stream, rd.value});
    }
  } else {
    const auto& fix = std::get<GpsFix>(e.data);
    g.events.push_back({t, "lat", fix.lat});
    g.events.push_back({t, "lon", fix.lon});
    g.events.push_back({t, "alt_m", fix.alt_m});
  }
  return release(false);
}

void EventConverter::close_group() {
  Group g = std::move(*open_);
  open_.reset();
  if (emission_inputs_changed_ && maf_ && fuel_ && nox_down_) {
    const double exhaust = emissions::exhaust_mass_flow(*maf_, *fuel_, opt_.coefficients);
    g.events.push_back({g.t, "nox_mgps", emissions::nox_mass_flow(*nox_down_, exhaust, opt_.coefficients)});
  }
  if (fuel_changed_ && fuel_) {
    g.events.push_back({g.t, "co2_gps", emissions::co2_mass_flow(*fuel_, opt_.coefficients)});
  }
  emission_inputs_changed_ = false;
  fuel_changed_ = false;

  if (g.velocity_index) {
    // The last speed reading of the group is the sample.
    double v_kmph = 0.0;
    for (const auto& ev : g.events) {
      if (ev.stream == "velo_kmph") v_kmph = std::get<double>(ev.value);
    }
    g.velocity_index = velocity_.size();
    g.accel_done = false;
    velocity_.push_back({g.t, v_kmph / 3.6});
  }
  pending_.push_back(std::move(g));

  const std::size_t lag = opt_.smooth_acceleration ? 2 : 1;
  while (finalized_ + lag < velocity_.size()) finalize_accel(finalized_);
}

void EventConverter::finalize_accel(std::size_t i) {
  auto it = std::find_if(pending_.begin(), pending_.end(), [&](const Group& g) { return g.velocity_index == i; });
  if (velocity_.size() >= 2) {
    it->events.push_back({velocity_[i].t, "accel_mpss", accel_at(velocity_, i, opt_.smooth_acceleration)});
  }
  it->accel_done = true;
  ++finalized_;
}

std::vector<engine::Event> EventConverter::release(bool all) {
  std::vector<engine::Event> out;
  while (!pending_.empty() && (all || pending_.front().accel_done)) {
    auto& ev = pending_.front().events;
    out.insert(out.end(), std::make_move_iterator(ev.begin()), std::make_move_iterator(ev.end()));
    pending_.pop_front();
  }
  return out;
}

std::vector<engine::Event> EventConverter::finish() {
  if (open_) close_group();
  while (finalized_ < velocity_.size()) finalize_accel(finalized_);
  return release(true);
}

std::vector<engine::Event> to_engine_events(const CdpTrip& trip, const SensorProfile& profile,
                                            const ConversionOptions& options) {
  ConversionOptions opt = options;
  opt.nox = profile.nox;
  EventConverter conv(opt);
  std::vector<engine::Event> out;
  for (std::size_t i = 0; i < trip.events.size(); ++i) {
    auto part = conv.push(trip.events[i], i);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  auto tail = conv.finish();
  out.insert(out.end(), std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
  return out;
}

std::vector<engine::Event> to_engine_events(const CdpTrip& trip, const ConversionOptions& options) {
  return to_engine_events(trip, detect_profile(trip), options);
}

}  // namespace rdemon::obd
