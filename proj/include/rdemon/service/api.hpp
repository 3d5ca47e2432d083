// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rdemon/service/session.hpp"
#include "rdemon/service/trip_store.hpp"

namespace rdemon::service {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Transport-independent request routing; see docs/api.md for payloads.
/// Errors are answered as {"error": code, "message": text}.
class Api {
 public:
  Api(SessionManager& sessions, TripStore& store) : sessions_(sessions), store_(store) {}

  HttpResponse handle(std::string_view method, std::string_view target, std::string_view body);

  /// Session id when `target` is the push channel /sessions/:id/live.
  static std::optional<std::string> live_session(std::string_view target);

  SessionManager& sessions() { return sessions_; }

 private:
  HttpResponse route(std::string_view method, std::string_view path, std::string_view query, std::string_view body);

  SessionManager& sessions_;
  TripStore& store_;
};

}  // namespace rdemon::service
