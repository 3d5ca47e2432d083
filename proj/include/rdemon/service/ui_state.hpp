// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdemon/rde/params.hpp"
#include "rdemon/rde/verdict.hpp"

namespace rdemon::service {

struct TriggerRecord {
  double t = 0.0;
  int trigger = -1;
  std::string message;
};

/// Point-in-time view of a session. Thresholds and bounds are copied from
/// the verdict so clients never recompute them.
struct UiState {
  std::string session;
  std::string mode;  // "replay" or "live"
  bool finished = false;
  double t_s = 0.0;
  std::optional<double> velo_kmph;
  std::optional<double> target_kmph;  // live sessions
  rde::TripStats stats;
  rde::RdeVerdict verdict;
  std::vector<TriggerRecord> recent_triggers;  // oldest first
};

/// Shape documented in docs/api.md; GET /state and the push channel send
/// exactly this object.
nlohmann::ordered_json to_json(const UiState& state, const rde::RdeParameters& params);

nlohmann::ordered_json to_json(const TriggerRecord& record);

}  // namespace rdemon::service
