// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/engine/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdemon::engine {

using namespace lang;

namespace {

std::string format_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

bool as_bool(const Value& v) { return std::get<bool>(v); }
double as_double(const Value& v) { return std::get<double>(v); }

}  // namespace

NonMonotonicTime::NonMonotonicTime(double got, double current)
    : MonitorError("event time " + format_time(got) + " precedes monitor time " + format_time(current)) {}

UnknownStream::UnknownStream(const std::string& name) : MonitorError("unknown input stream " + name) {}

Monitor::Monitor(std::shared_ptr<const TypedSpecification> spec, double start_time, MonitorOptions options)
    : spec_(std::move(spec)), start_(start_time), now_(start_time) {
  registers_.assign(spec_->streams.size(), std::nullopt);
  windows_.reserve(spec_->windows.size());
  for (const auto& w : spec_->windows) windows_.emplace_back(w.duration_s, w.fn, options.percentile);
  trigger_latch_.assign(spec_->triggers.size(), false);

  for (double hz : spec_->rates_hz) groups_.push_back(RateGroup{hz, 1, {}, {}});
  auto group_of = [&](double hz) -> RateGroup& {
    return *std::find_if(groups_.begin(), groups_.end(), [&](const RateGroup& g) { return g.hz == hz; });
  };
  for (const auto& layer : spec_->layers) {
    for (StreamId id : layer) {
      const auto& info = spec_->streams[static_cast<std::size_t>(id)];
      if (info.rate_hz) group_of(*info.rate_hz).outputs.push_back(id);
    }
  }
  for (std::size_t i = 0; i < spec_->triggers.size(); ++i) {
    if (const auto& hz = spec_->triggers[i].rate_hz) group_of(*hz).triggers.push_back(static_cast<int>(i));
  }
}

std::optional<double> Monitor::next_deadline() const {
  std::optional<double> best;
  for (const auto& g : groups_) {
    const double d = deadline_of(g);
    if (!best || d < *best) best = d;
  }
  return best;
}

std::optional<Value> Monitor::latest(StreamId id) const {
  return registers_.at(static_cast<std::size_t>(id));
}

std::optional<Value> Monitor::latest(std::string_view name) const {
  auto id = spec_->find(name);
  if (!id) return std::nullopt;
  return latest(*id);
}

bool Monitor::accepts(std::string_view input) const {
  auto id = spec_->find(input);
  return id && spec_->streams[static_cast<std::size_t>(*id)].is_input;
}

std::vector<MonitorOutput> Monitor::ingest(const Event& event) {
  if (!std::isfinite(event.time)) throw MonitorError("event time must be finite");
  if (event.time < now_) throw NonMonotonicTime(event.time, now_);
  auto id = spec_->find(event.stream);
  if (!id || !spec_->streams[static_cast<std::size_t>(*id)].is_input) throw UnknownStream(event.stream);
  const auto& info = spec_->streams[static_cast<std::size_t>(*id)];
  if (type_of(event.value) != info.type) {
    throw MonitorError("input " + info.name + " expects " + std::string(to_string(info.type)));
  }

  std::vector<MonitorOutput> out;
  fire_until(event.time, false, out);
  now_ = event.time;
  produce(*id, event.time, event.value);
  for (StreamId dep : spec_->event_outputs[static_cast<std::size_t>(*id)]) {
    evaluate_output(dep, event.time, out);
  }
  for (int trig : spec_->event_triggers[static_cast<std::size_t>(*id)]) {
    evaluate_trigger(trig, event.time, out);
  }
  return out;
}

std::vector<MonitorOutput> Monitor::advance_time(double t) {
  if (!std::isfinite(t)) throw MonitorError("time must be finite");
  if (t < now_) throw NonMonotonicTime(t, now_);
  std::vector<MonitorOutput> out;
  fire_until(t, true, out);
  now_ = t;
  return out;
}

void Monitor::fire_until(double limit, bool inclusive, std::vector<MonitorOutput>& out) {
  for (;;) {
    auto d = next_deadline();
    if (!d || *d > limit || (!inclusive && *d == limit)) return;
    fire_deadline(*d, out);
  }
}

void Monitor::fire_deadline(double d, std::vector<MonitorOutput>& out) {
  std::vector<const RateGroup*> due;
  for (const auto& g : groups_) {
    if (deadline_of(g) == d) due.push_back(&g);
  }
  now_ = d;
  if (due.size() == 1) {
    for (StreamId id : due.front()->outputs) evaluate_output(id, d, out);
  } else {
    std::vector<StreamId> ids;
    for (const auto* g : due) ids.insert(ids.end(), g->outputs.begin(), g->outputs.end());
    std::stable_sort(ids.begin(), ids.end(), [&](StreamId a, StreamId b) {
      return spec_->streams[static_cast<std::size_t>(a)].layer < spec_->streams[static_cast<std::size_t>(b)].layer;
    });
    for (StreamId id : ids) evaluate_output(id, d, out);
  }
  std::vector<int> triggers;
  for (const auto* g : due) triggers.insert(triggers.end(), g->triggers.begin(), g->triggers.end());
  std::sort(triggers.begin(), triggers.end());
  for (int t : triggers) evaluate_trigger(t, d, out);
  for (auto& g : groups_) {
    if (deadline_of(g) == d) ++g.next_k;
  }
}

void Monitor::evaluate_output(StreamId id, double t, std::vector<MonitorOutput>& out) {
  const auto& info = spec_->streams[static_cast<std::size_t>(id)];
  const auto& decl = spec_->output(id);
  std::optional<Value> value;
  bool pass = true;
  if (decl.filter) {
    auto f = eval(*decl.filter, t);
    pass = f && as_bool(*f);
  }
  if (pass) value = eval(*decl.body, t);
  if (!value) {
    // Periodic streams are read synchronously, so "no value now" must be
    // visible to readers; event-based streams keep their last value.
    if (info.rate_hz) registers_[static_cast<std::size_t>(id)].reset();
    return;
  }
  produce(id, t, *value);
  out.push_back(MonitorOutput{t, StreamValue{id, info.name, *value}});
}

void Monitor::evaluate_trigger(int index, double t, std::vector<MonitorOutput>& out) {
  const auto& decl = spec_->spec.triggers[static_cast<std::size_t>(index)];
  auto c = eval(*decl.condition, t);
  const bool fired = c && as_bool(*c);
  trigger_latch_[static_cast<std::size_t>(index)] = fired;
  if (!fired) return;
  TriggerFired tf;
  tf.trigger = index;
  tf.message = decl.message.value_or("");
  for (StreamId r : spec_->triggers[static_cast<std::size_t>(index)].referenced) {
    if (const auto& v = registers_[static_cast<std::size_t>(r)]) {
      tf.values.emplace_back(spec_->streams[static_cast<std::size_t>(r)].name, *v);
    }
  }
  out.push_back(MonitorOutput{t, std::move(tf)});
}

void Monitor::produce(StreamId id, double t, const Value& v) {
  registers_[static_cast<std::size_t>(id)] = v;
  const auto& slots = spec_->windows_of[static_cast<std::size_t>(id)];
  if (slots.empty()) return;
  const double x = std::holds_alternative<bool>(v) ? (std::get<bool>(v) ? 1.0 : 0.0) : std::get<double>(v);
  for (int slot : slots) windows_[static_cast<std::size_t>(slot)].push(t, x);
}

std::optional<Value> Monitor::eval(const Expr& e, double t) {
  return std::visit(
      [&](const auto& n) -> std::optional<Value> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          return Value{n.value};
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return Value{n.value};
        } else if constexpr (std::is_same_v<T, StreamRef>) {
          return registers_[static_cast<std::size_t>(n.resolved)];
        } else if constexpr (std::is_same_v<T, Unary>) {
          auto v = eval(*n.operand, t);
          if (!v) return std::nullopt;
          if (n.op == UnaryOp::Neg) return Value{-as_double(*v)};
          return Value{!as_bool(*v)};
        } else if constexpr (std::is_same_v<T, Binary>) {
          auto l = eval(*n.lhs, t);
          if (!l) return std::nullopt;
          auto r = eval(*n.rhs, t);
          if (!r) return std::nullopt;
          switch (n.op) {
            case BinaryOp::Add: return Value{as_double(*l) + as_double(*r)};
            case BinaryOp::Sub: return Value{as_double(*l) - as_double(*r)};
            case BinaryOp::Mul: return Value{as_double(*l) * as_double(*r)};
            case BinaryOp::Div: return Value{as_double(*l) / as_double(*r)};
            case BinaryOp::Lt: return Value{as_double(*l) < as_double(*r)};
            case BinaryOp::Le: return Value{as_double(*l) <= as_double(*r)};
            case BinaryOp::Gt: return Value{as_double(*l) > as_double(*r)};
            case BinaryOp::Ge: return Value{as_double(*l) >= as_double(*r)};
            case BinaryOp::Eq: return Value{*l == *r};
            case BinaryOp::Ne: return Value{*l != *r};
            case BinaryOp::And: return Value{as_bool(*l) && as_bool(*r)};
            case BinaryOp::Or: return Value{as_bool(*l) || as_bool(*r)};
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, WindowExpr>) {
          auto v = windows_[static_cast<std::size_t>(n.slot)].evaluate(t);
          if (!v) return std::nullopt;
          return Value{*v};
        } else if constexpr (std::is_same_v<T, DefaultExpr>) {
          auto v = eval(*n.expr, t);
          return v ? v : std::optional<Value>{n.fallback};
        } else if constexpr (std::is_same_v<T, Conditional>) {
          auto c = eval(*n.condition, t);
          if (!c) return std::nullopt;
          return as_bool(*c) ? eval(*n.then_branch, t) : eval(*n.else_branch, t);
        }
      },
      e.node);
}

}  // namespace rdemon::engine
