// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rdemon/engine/window.hpp"
#include "rdemon/lang/typecheck.hpp"

namespace rdemon::engine {

using lang::StreamId;
using lang::Value;

/// A timestamped sample of one input stream. Time is seconds since trip start.
struct Event {
  double time = 0.0;
  std::string stream;
  Value value = 0.0;
};

struct StreamValue {
  StreamId stream = -1;
  std::string name;
  Value value;
};

struct TriggerFired {
  int trigger = -1;
  std::string message;
  std::vector<std::pair<std::string, Value>> values;  // streams read by the condition
};

struct MonitorOutput {
  double time = 0.0;
  std::variant<StreamValue, TriggerFired> kind;

  bool is_trigger() const { return std::holds_alternative<TriggerFired>(kind); }
};

class MonitorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonMonotonicTime : public MonitorError {
 public:
  NonMonotonicTime(double got, double current);
};

class UnknownStream : public MonitorError {
 public:
  explicit UnknownStream(const std::string& name);
};

struct MonitorOptions {
  PercentileMethod percentile = PercentileMethod::NearestRank;
};

/// Online evaluator of a typed specification.
///
/// Inputs use sample-and-hold: periodic streams read the latest value of each
/// input. Periodic deadlines sit at start + k/f. A deadline equal to the time
/// of an incoming event is held back until time moves past it, so every event
/// at that timestamp is applied before the evaluation.
///
/// A Monitor has a single owner; it is movable but not safe to share.
class Monitor {
 public:
  Monitor(std::shared_ptr<const lang::TypedSpecification> spec, double start_time,
          MonitorOptions options = {});

  std::vector<MonitorOutput> ingest(const Event& event);

  /// Fires every deadline <= t and moves the clock to t.
  std::vector<MonitorOutput> advance_time(double t);

  double current_time() const { return now_; }
  double start_time() const { return start_; }
  std::optional<double> next_deadline() const;

  /// Current register of a stream: the held value for inputs and event-based
  /// outputs, the value at the last deadline for periodic outputs.
  std::optional<Value> latest(StreamId id) const;
  std::optional<Value> latest(std::string_view name) const;

  bool accepts(std::string_view input) const;
  bool trigger_active(int trigger) const { return trigger_latch_.at(static_cast<std::size_t>(trigger)); }

  const lang::TypedSpecification& spec() const { return *spec_; }

 private:
  struct RateGroup {
    double hz;
    long long next_k = 1;
    std::vector<StreamId> outputs;  // in evaluation order
    std::vector<int> triggers;
  };

  double deadline_of(const RateGroup& g) const { return start_ + static_cast<double>(g.next_k) / g.hz; }
  void fire_deadline(double d, std::vector<MonitorOutput>& out);
  void fire_until(double limit, bool inclusive, std::vector<MonitorOutput>& out);
  void evaluate_output(StreamId id, double t, std::vector<MonitorOutput>& out);
  void evaluate_trigger(int index, double t, std::vector<MonitorOutput>& out);
  void produce(StreamId id, double t, const Value& v);
  std::optional<Value> eval(const lang::Expr& e, double t);

  std::shared_ptr<const lang::TypedSpecification> spec_;
  double start_;
  double now_;
  std::vector<std::optional<Value>> registers_;
  std::vector<SlidingWindow> windows_;
  std::vector<RateGroup> groups_;
  std::vector<bool> trigger_latch_;
};

}  // namespace rdemon::engine
