// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdemon/engine/monitor.hpp"

namespace rdemon::engine {

/// Reads `time,stream,value` lines. A leading header line starting with
/// "time" is skipped; `true`/`false` read as Bool, anything else as Float64.
std::vector<Event> read_event_csv(std::istream& in);

void write_event_csv(std::ostream& out, const std::vector<Event>& events);

/// One JSON object per line: {"t":..,"stream":..,"value":..} or
/// {"t":..,"trigger":..,"message":..}.
std::string to_json_line(const MonitorOutput& output);

void write_output_jsonl(std::ostream& out, const std::vector<MonitorOutput>& outputs);

/// Feeds every event, then advances to `end_time` (or the last event time).
std::vector<MonitorOutput> run_offline(const Monitor& prototype, const std::vector<Event>& events,
                                       std::optional<double> end_time = std::nullopt);

}  // namespace rdemon::engine
