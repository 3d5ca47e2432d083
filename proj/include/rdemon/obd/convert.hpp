// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "rdemon/emissions/emissions.hpp"
#include "rdemon/engine/monitor.hpp"
#include "rdemon/obd/cdp.hpp"

namespace rdemon::obd {

struct SensorProfile {
  std::set<std::uint8_t> pids;
  bool rde_capable = false;
  NoxScaling nox;
};

/// PIDs required for emission monitoring: speed, MAF, fuel rate, ambient
/// temperature and the NOx sensor pair.
std::span<const std::uint8_t> required_pids();

/// PIDs seen within `window_s` of the first event. An empty or GPS-only
/// prefix gives an empty, non-capable profile.
SensorProfile detect_profile(std::span<const CdpEvent> events, double window_s = 30.0,
                             const NoxScaling& nox = {});
SensorProfile detect_profile(const CdpTrip& trip, double window_s = 30.0);

struct VelocitySample {
  double t = 0.0;
  double v_mps = 0.0;
};

struct AccelSample {
  double t = 0.0;
  double a_mps2 = 0.0;
};

/// Central differences at interior samples, one-sided at both ends, then an
/// optional 3-point moving average (2-point at the ends). Fewer than two
/// samples give no output.
std::vector<AccelSample> derive_acceleration(std::span<const VelocitySample> samples, bool smooth = true);

struct ConversionOptions {
  emissions::EmissionCoefficients coefficients;
  NoxScaling nox;
  bool smooth_acceleration = true;
};

/// Incremental CDP-to-engine conversion. Times become seconds since the
/// first event. Events sharing a timestamp form a group; each group emits
/// its decoded readings in order, then nox_mgps and co2_gps when their
/// inputs changed, then accel_mpss once it is known. Groups are released
/// in order as soon as their acceleration is final, which lags the input
/// by two velocity samples. The concatenated output equals
/// to_engine_events on the same trip.
class EventConverter {
 public:
  explicit EventConverter(ConversionOptions options = {});

  /// `index` is only used in error messages.
  std::vector<engine::Event> push(const CdpEvent& e, std::size_t index);
  std::vector<engine::Event> finish();

  std::optional<double> origin() const { return origin_; }

 private:
  struct Group {
    double t = 0.0;
    std::vector<engine::Event> events;
    std::optional<std::size_t> velocity_index;
    bool accel_done = true;
  };

  void close_group();
  void finalize_accel(std::size_t i);
  std::vector<engine::Event> release(bool all);

  ConversionOptions opt_;
  std::optional<double> origin_;
  std::optional<Group> open_;
  std::deque<Group> pending_;
  std::vector<VelocitySample> velocity_;
  std::size_t finalized_ = 0;  // accel known for velocity_[0, finalized_)
  std::optional<double> maf_, fuel_, nox_down_;
  bool emission_inputs_changed_ = false;
  bool fuel_changed_ = false;
  double last_t_ = 0.0;
};

/// Offline conversion. Throws DecodeError citing the event index.
std::vector<engine::Event> to_engine_events(const CdpTrip& trip, const SensorProfile& profile,
                                            const ConversionOptions& options = {});
std::vector<engine::Event> to_engine_events(const CdpTrip& trip, const ConversionOptions& options = {});

}  // namespace rdemon::obd
