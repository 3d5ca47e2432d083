// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/service/session.hpp"

#include <cmath>

#include "rdemon/rde/spec_builder.hpp"
#include "rdemon/rde/verdict.hpp"
#include "rdemon/service/errors.hpp"
#include "rdemon/sim/simulator.hpp"

namespace rdemon::service {

// ---- Subscription ----

std::optional<std::string> Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  auto m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

bool Subscription::closed() const {
  std::lock_guard lock(mu_);
  return closed_ && queue_.empty();
}

std::size_t Subscription::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

void Subscription::push(std::string message) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    queue_.push_back(std::move(message));
    while (queue_.size() > capacity_) {
      queue_.pop_front();
      ++dropped_;
    }
  }
  cv_.notify_all();
}

void Subscription::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

// ---- Session ----

namespace {

obd::ConversionOptions conversion_for(const SessionMode& mode, obd::ConversionOptions base) {
  if (const auto* r = std::get_if<ReplayMode>(&mode)) base.nox = r->trip.vehicle.nox;
  return base;
}

}  // namespace

Session::Session(std::string id, SessionMode mode, SessionConfig config)
    : id_(std::move(id)),
      mode_(std::move(mode)),
      config_(std::move(config)),
      converter_(conversion_for(mode_, config_.conversion)) {
  monitor_ = std::make_unique<engine::Monitor>(rde::compile_rde_spec(config_.params), 0.0);
  if (const auto* r = std::get_if<ReplayMode>(&mode_)) {
    recorded_.vehicle = r->trip.vehicle;
    rate_ = r->rate;
  } else {
    const auto& l = std::get<LiveMode>(mode_);
    recorded_.vehicle = sim::vehicle_of(l.profile);
    rate_ = l.rate;
  }
  publish_state(0.0);
  wall_start_ = std::chrono::steady_clock::now();
  thread_ = std::thread([this] { run(); });
}

Session::~Session() {
  {
    std::lock_guard lock(mu_);
    stop_requested_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  for (auto& w : subscribers_) {
    if (auto s = w.lock()) s->close();
  }
}

std::shared_ptr<const nlohmann::ordered_json> Session::snapshot() const {
  std::lock_guard lock(mu_);
  return snapshot_;
}

std::shared_ptr<Subscription> Session::subscribe() {
  auto sub = std::make_shared<Subscription>(config_.subscriber_queue);
  std::lock_guard lock(mu_);
  sub->push(snapshot_->dump());
  if (stopped_) {
    sub->close();
  } else {
    subscribers_.push_back(sub);
  }
  return sub;
}

void Session::control(const ControlCommand& command) {
  if (!is_live()) throw NotLive(id_);
  {
    std::lock_guard lock(mu_);
    if (finished_) throw NoSession(id_);
    commands_.push_back(command);
  }
  cv_.notify_all();
}

bool Session::finished() const {
  std::lock_guard lock(mu_);
  return finished_;
}

bool Session::wait_finished(std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return finished_; });
}

Session::Final Session::stop() {
  {
    std::lock_guard lock(mu_);
    stop_requested_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  std::vector<std::weak_ptr<Subscription>> subs;
  Final f;
  {
    std::lock_guard lock(mu_);
    stopped_ = true;
    subs.swap(subscribers_);
    f.state = *snapshot_;
  }
  for (auto& w : subs) {
    if (auto s = w.lock()) s->close();
  }
  f.trip = recorded_;
  return f;
}

void Session::run() {
  try {
    if (const auto* r = std::get_if<ReplayMode>(&mode_)) {
      run_replay(*r);
    } else {
      run_live(std::get<LiveMode>(mode_));
    }
    finalize();
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["type"] = "error";
    err["t"] = last_time_;
    err["message"] = e.what();
    publish(err.dump());
  }
  {
    std::lock_guard lock(mu_);
    finished_ = true;
  }
  cv_.notify_all();
}

void Session::run_replay(const ReplayMode& mode) {
  for (const auto& e : mode.trip.events) {
    {
      std::lock_guard lock(mu_);
      if (stop_requested_) return;
    }
    feed_cdp({e});
  }
}

void Session::run_live(const LiveMode& mode) {
  sim::Simulator sim(mode.profile);
  const auto& phases = mode.profile.phases;
  std::size_t phase = 0;
  long left = phases.empty() ? 0 : static_cast<long>(std::ceil(phases[0].duration_s - 1e-9));
  bool manual = phases.empty();
  sim::Control control{0.0, 0.5};
  target_kmph_ = control.target_speed_kmph;
  feed_cdp(sim.start());
  for (long k = 1;; ++k) {
    if (!pace(static_cast<double>(k))) return;
    for (const auto& c : take_commands()) {
      switch (c.kind) {
        case ControlCommand::Kind::SetTarget:
          manual = true;
          control.target_speed_kmph = c.value;
          break;
        case ControlCommand::Kind::SetAggressiveness:
          manual = true;
          control.aggressiveness = c.value;
          break;
        case ControlCommand::Kind::EndDrive: return;
      }
    }
    if (!manual) {
      if (phase < phases.size()) {
        control = sim::Control{phases[phase].target_speed_kmph, phases[phase].aggressiveness};
        if (--left <= 0 && ++phase < phases.size()) {
          left = static_cast<long>(std::ceil(phases[phase].duration_s - 1e-9));
        }
      } else {
        manual = true;
      }
    }
    target_kmph_ = control.target_speed_kmph;
    feed_cdp(sim.advance(1.0, control));
  }
}

void Session::feed_cdp(const std::vector<obd::CdpEvent>& events) {
  for (const auto& e : events) {
    auto out = converter_.push(e, cdp_index_++);
    recorded_.events.push_back(e);
    feed(out);
  }
}

void Session::feed(const std::vector<engine::Event>& events) {
  for (const auto& e : events) {
    advance_to(e.time, false);
    if (!monitor_->accepts(e.stream)) {
      last_time_ = e.time;
      continue;
    }
    const auto before = latches();
    const auto outs = monitor_->ingest(e);
    last_time_ = e.time;
    handle(outs, before);
  }
}

void Session::advance_to(double t, bool inclusive) {
  for (;;) {
    const auto d = monitor_->next_deadline();
    if (!d || *d > t || (!inclusive && *d == t)) return;
    pace(*d);
    const auto before = latches();
    const auto outs = monitor_->advance_time(*d);
    handle(outs, before);
    publish_state(*d);
  }
}

void Session::finalize() {
  feed(converter_.finish());
  advance_to(last_time_, true);
  {
    std::lock_guard lock(mu_);
    finished_ = true;
  }
  publish_state(std::max(last_time_, monitor_->current_time()));
}

std::vector<bool> Session::latches() const {
  const auto n = monitor_->spec().triggers.size();
  std::vector<bool> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = monitor_->trigger_active(static_cast<int>(i));
  return v;
}

void Session::handle(const std::vector<engine::MonitorOutput>& outputs, const std::vector<bool>& before) {
  std::vector<bool> seen = before;
  for (const auto& o : outputs) {
    const auto* tf = std::get_if<engine::TriggerFired>(&o.kind);
    if (!tf || seen[static_cast<std::size_t>(tf->trigger)]) continue;
    seen[static_cast<std::size_t>(tf->trigger)] = true;
    TriggerRecord r{o.time, tf->trigger, tf->message};
    publish(to_json(r).dump());
    recent_.push_back(std::move(r));
    if (recent_.size() > config_.recent_triggers) recent_.erase(recent_.begin());
  }
}

void Session::publish_state(double t) {
  UiState s;
  s.session = id_;
  s.mode = mode_name();
  s.t_s = t;
  if (auto v = monitor_->latest("velo_kmph")) s.velo_kmph = std::get<double>(*v);
  s.target_kmph = target_kmph_;
  s.stats = rde::stats_from_monitor(*monitor_);
  s.verdict = rde::update_verdict(s.stats, config_.params);
  s.recent_triggers = recent_;
  {
    std::lock_guard lock(mu_);
    s.finished = finished_;
  }
  auto json = std::make_shared<const nlohmann::ordered_json>(to_json(s, config_.params));
  auto text = json->dump();
  {
    std::lock_guard lock(mu_);
    snapshot_ = std::move(json);
  }
  publish(text);
}

void Session::publish(const std::string& message) {
  std::vector<std::shared_ptr<Subscription>> subs;
  {
    std::lock_guard lock(mu_);
    for (auto it = subscribers_.begin(); it != subscribers_.end();) {
      if (auto s = it->lock()) {
        subs.push_back(std::move(s));
        ++it;
      } else {
        it = subscribers_.erase(it);
      }
    }
  }
  for (auto& s : subs) s->push(message);
}

bool Session::pace(double sim_time) {
  std::unique_lock lock(mu_);
  if (rate_ > 0.0 && !stop_requested_) {
    const auto due = wall_start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                       std::chrono::duration<double>(sim_time / rate_));
    cv_.wait_until(lock, due, [&] { return stop_requested_; });
  }
  return !stop_requested_;
}

std::vector<ControlCommand> Session::take_commands() {
  std::lock_guard lock(mu_);
  std::vector<ControlCommand> out(commands_.begin(), commands_.end());
  commands_.clear();
  return out;
}

// ---- SessionManager ----

namespace {

double number_field(const nlohmann::json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw BadRequest(std::string(key) + " must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw BadRequest(std::string(key) + " must be finite");
  return v;
}

}  // namespace

SessionManager::SessionManager(TripStore& store, SessionConfig config) : store_(store), config_(std::move(config)) {
  config_.params.validate();
}

SessionManager::~SessionManager() {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mu_);
    s = std::move(active_);
  }
  if (s) s->stop();
}

std::string SessionManager::start(const nlohmann::json& request) {
  if (!request.is_object()) throw BadRequest("session request must be a JSON object");
  const auto mode = request.value("mode", std::string());
  if (mode == "replay") {
    if (!request.contains("trip") || !request["trip"].is_string()) throw BadRequest("replay needs a trip id");
    const double rate = number_field(request, "rate", 0.0);
    if (rate < 0.0) throw BadRequest("rate must be non-negative");
    const auto id = request["trip"].get<std::string>();
    return start(ReplayMode{store_.get(id), id, rate});
  }
  if (mode == "live") {
    const double rate = number_field(request, "rate", 1.0);
    if (!(rate > 0.0)) throw BadRequest("live rate must be positive");
    sim::DriveProfile profile;
    profile.name = "manual";
    try {
      if (request.contains("profile") && request["profile"].is_string()) {
        profile = sim::builtin_profile(request["profile"].get<std::string>());
      } else if (request.contains("profile") && request["profile"].is_object()) {
        profile = sim::parse_profile(request["profile"].dump());
      } else if (request.contains("profile") && !request["profile"].is_null()) {
        throw BadRequest("profile must be a builtin name or a profile object");
      }
    } catch (const sim::ProfileError& e) {
      throw BadRequest(e.what());
    }
    return start(LiveMode{std::move(profile), rate});
  }
  throw BadRequest("mode must be \"replay\" or \"live\"");
}

std::string SessionManager::start(SessionMode mode) {
  std::lock_guard lock(mu_);
  if (active_) throw SessionBusy(active_->id());
  const auto id = "session-" + std::to_string(++counter_);
  active_ = std::make_shared<Session>(id, std::move(mode), config_);
  return id;
}

std::shared_ptr<Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  if (!active_ || active_->id() != id) throw NoSession(id);
  return active_;
}

nlohmann::json SessionManager::stop(const std::string& id) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mu_);
    if (!active_ || active_->id() != id) throw NoSession(id);
    s = std::move(active_);
  }
  auto f = s->stop();
  const auto put = store_.put(f.trip);
  nlohmann::json out;
  out["session"] = id;
  out["trip_id"] = put.id;
  out["state"] = nlohmann::json::parse(f.state.dump());
  out["report"] = store_.report(put.id);
  return out;
}

std::shared_ptr<const nlohmann::ordered_json> SessionManager::state(const std::string& id) const {
  return find(id)->snapshot();
}

nlohmann::json SessionManager::control(const std::string& id, const nlohmann::json& command) {
  auto s = find(id);
  if (!s->is_live()) throw NotLive(id);
  if (!command.is_object() || !command.contains("command") || !command["command"].is_string()) {
    throw BadRequest("control body needs a command");
  }
  const auto name = command["command"].get<std::string>();
  ControlCommand c;
  if (name == "set_target") {
    c.kind = ControlCommand::Kind::SetTarget;
    c.value = number_field(command, "target_kmph", -1.0);
    if (c.value < 0.0 || c.value > 250.0) throw BadRequest("target_kmph must be within [0, 250]");
  } else if (name == "set_aggressiveness") {
    c.kind = ControlCommand::Kind::SetAggressiveness;
    c.value = number_field(command, "value", -1.0);
    if (c.value < 0.0 || c.value > 1.0) throw BadRequest("value must be within [0, 1]");
  } else if (name == "end_drive") {
    c.kind = ControlCommand::Kind::EndDrive;
  } else {
    throw BadRequest("unknown command " + name);
  }
  s->control(c);
  if (c.kind == ControlCommand::Kind::EndDrive) {
    s->wait_finished(std::chrono::seconds(60));
    return stop(id);
  }
  return {{"ack", true}, {"command", name}};
}

std::shared_ptr<Subscription> SessionManager::subscribe(const std::string& id) { return find(id)->subscribe(); }

nlohmann::json SessionManager::describe() const {
  std::lock_guard lock(mu_);
  if (!active_) return {{"active", nullptr}, {"mode", "idle"}};
  return {{"active", active_->id()}, {"mode", active_->mode_name()}, {"finished", active_->finished()}};
}

}  // namespace rdemon::service
