// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rdemon/obd/cdp.hpp"
#include "rdemon/obd/convert.hpp"
#include "rdemon/rde/params.hpp"
#include "rdemon/service/trip_store.hpp"
#include "rdemon/service/ui_state.hpp"
#include "rdemon/sim/profile.hpp"

namespace rdemon::service {

struct SessionConfig {
  rde::RdeParameters params;
  obd::ConversionOptions conversion;
  std::size_t recent_triggers = 20;
  std::size_t subscriber_queue = 8192;  // oldest messages are dropped beyond this
};

/// Message queue of one push-channel client. Messages are serialized JSON
/// objects in non-decreasing t order.
class Subscription {
 public:
  explicit Subscription(std::size_t capacity) : capacity_(capacity) {}

  /// Next message, or nullopt on timeout or once closed and drained.
  std::optional<std::string> next(std::chrono::milliseconds timeout);
  bool closed() const;
  std::size_t dropped() const;

  void push(std::string message);
  void close();

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  std::size_t capacity_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

struct ReplayMode {
  obd::CdpTrip trip;
  std::string trip_id;
  double rate = 0.0;  // simulated seconds per wall second; 0 runs unthrottled
};

struct LiveMode {
  sim::DriveProfile profile;
  double rate = 1.0;  // must be positive
};

using SessionMode = std::variant<ReplayMode, LiveMode>;

struct ControlCommand {
  enum class Kind { SetTarget, SetAggressiveness, EndDrive };
  Kind kind = Kind::SetTarget;
  double value = 0.0;
};

/// One session loop thread owns the monitor, the converter and (in live
/// mode) the simulator. Other threads talk to it through the command queue
/// and read immutable snapshots.
class Session {
 public:
  Session(std::string id, SessionMode mode, SessionConfig config);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  bool is_live() const { return std::holds_alternative<LiveMode>(mode_); }
  std::string mode_name() const { return is_live() ? "live" : "replay"; }

  std::shared_ptr<const nlohmann::ordered_json> snapshot() const;

  /// The current snapshot is queued first.
  std::shared_ptr<Subscription> subscribe();

  /// Live sessions only; applied before the next simulator tick.
  void control(const ControlCommand& command);

  /// True once the input is exhausted (replay) or the drive ended (live).
  bool finished() const;
  bool wait_finished(std::chrono::milliseconds timeout) const;

  struct Final {
    nlohmann::ordered_json state;
    obd::CdpTrip trip;  // the events consumed so far
  };

  /// Stops the loop, flushes pending conversions and returns the final
  /// state. Subscriptions are closed afterwards.
  Final stop();

 private:
  void run();
  void run_replay(const ReplayMode& mode);
  void run_live(const LiveMode& mode);
  void feed_cdp(const std::vector<obd::CdpEvent>& events);
  void feed(const std::vector<engine::Event>& events);
  void advance_to(double t, bool inclusive);
  void finalize();
  std::vector<bool> latches() const;
  void handle(const std::vector<engine::MonitorOutput>& outputs, const std::vector<bool>& before);
  void publish_state(double t);
  void publish(const std::string& message);
  bool pace(double sim_time);  // false when asked to stop
  std::vector<ControlCommand> take_commands();

  std::string id_;
  SessionMode mode_;
  SessionConfig config_;

  // Loop-thread state.
  std::unique_ptr<engine::Monitor> monitor_;
  obd::EventConverter converter_;
  obd::CdpTrip recorded_;
  std::size_t cdp_index_ = 0;
  std::vector<TriggerRecord> recent_;
  std::optional<double> target_kmph_;
  double last_time_ = 0.0;
  std::chrono::steady_clock::time_point wall_start_;
  double rate_ = 0.0;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::deque<ControlCommand> commands_;
  bool stop_requested_ = false;
  bool stopped_ = false;
  bool finished_ = false;
  std::shared_ptr<const nlohmann::ordered_json> snapshot_;
  std::vector<std::weak_ptr<Subscription>> subscribers_;

  std::thread thread_;
};

/// Owns at most one active session and persists finished ones.
class SessionManager {
 public:
  explicit SessionManager(TripStore& store, SessionConfig config = {});
  ~SessionManager();

  /// Request body of POST /sessions:
  /// {"mode": "replay", "trip": id, "rate": r} or
  /// {"mode": "live", "profile": name-or-object, "rate": r}.
  std::string start(const nlohmann::json& request);
  std::string start(SessionMode mode);

  /// Stops the session, stores the recorded trip and returns
  /// {"session", "trip_id", "state", "report"}.
  nlohmann::json stop(const std::string& id);

  std::shared_ptr<const nlohmann::ordered_json> state(const std::string& id) const;

  /// {"command": "set_target", "target_kmph": v} | {"command":
  /// "set_aggressiveness", "value": a} | {"command": "end_drive"}.
  /// end_drive waits for the drive to end and answers like stop().
  nlohmann::json control(const std::string& id, const nlohmann::json& command);

  std::shared_ptr<Subscription> subscribe(const std::string& id);

  /// {"active": id-or-null, "mode": ...}.
  nlohmann::json describe() const;

  const SessionConfig& config() const { return config_; }

 private:
  std::shared_ptr<Session> find(const std::string& id) const;

  TripStore& store_;
  SessionConfig config_;
  mutable std::mutex mu_;
  std::shared_ptr<Session> active_;
  std::uint64_t counter_ = 0;
};

}  // namespace rdemon::service
