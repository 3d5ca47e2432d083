// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/engine/offline.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace rdemon::engine {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw MonitorError("line " + std::to_string(line) + ": malformed number '" + std::string(s) + "'");
  }
  return v;
}

nlohmann::json to_json(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  return std::get<double>(v);
}

}  // namespace

std::vector<Event> read_event_csv(std::istream& in) {
  std::vector<Event> events;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    if (events.empty() && s.starts_with("time")) continue;
    const auto c1 = s.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw MonitorError("line " + std::to_string(line) + ": expected time,stream,value");
    }
    Event e;
    e.time = parse_double(trim(s.substr(0, c1)), line);
    e.stream = std::string(trim(s.substr(c1 + 1, c2 - c1 - 1)));
    const auto value = trim(s.substr(c2 + 1));
    if (value == "true") {
      e.value = true;
    } else if (value == "false") {
      e.value = false;
    } else {
      e.value = parse_double(value, line);
    }
    events.push_back(std::move(e));
  }
  return events;
}

void write_event_csv(std::ostream& out, const std::vector<Event>& events) {
  out << "time,stream,value\n";
  for (const auto& e : events) {
    out << nlohmann::json(e.time).dump() << ',' << e.stream << ',' << to_json(e.value).dump() << '\n';
  }
}

std::string to_json_line(const MonitorOutput& output) {
  nlohmann::ordered_json j;
  j["t"] = output.time;
  if (const auto* sv = std::get_if<StreamValue>(&output.kind)) {
    j["stream"] = sv->name;
    j["value"] = to_json(sv->value);
  } else {
    const auto& tf = std::get<TriggerFired>(output.kind);
    j["trigger"] = tf.trigger;
    j["message"] = tf.message;
  }
  return j.dump();
}

void write_output_jsonl(std::ostream& out, const std::vector<MonitorOutput>& outputs) {
  for (const auto& o : outputs) out << to_json_line(o) << '\n';
}

std::vector<MonitorOutput> run_offline(const Monitor& prototype, const std::vector<Event>& events,
                                       std::optional<double> end_time) {
  Monitor monitor = prototype;
  std::vector<MonitorOutput> all;
  for (const auto& e : events) {
    auto outs = monitor.ingest(e);
    all.insert(all.end(), std::make_move_iterator(outs.begin()), std::make_move_iterator(outs.end()));
  }
  auto tail = monitor.advance_time(end_time.value_or(monitor.current_time()));
  all.insert(all.end(), std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
  return all;
}

}  // namespace rdemon::engine
