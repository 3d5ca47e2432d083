// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rdemon::service {

/// Error carrying the HTTP status and the `error` code sent to clients.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

struct SessionBusy : ServiceError {
  explicit SessionBusy(const std::string& active)
      : ServiceError(409, "SessionBusy", "session " + active + " is still active") {}
};

struct NoSession : ServiceError {
  explicit NoSession(const std::string& id) : ServiceError(404, "NoSession", "no active session " + id) {}
};

struct NotLive : ServiceError {
  explicit NotLive(const std::string& id) : ServiceError(409, "NotLive", "session " + id + " is not a live session") {}
};

struct UnknownTrip : ServiceError {
  explicit UnknownTrip(const std::string& id) : ServiceError(404, "UnknownTrip", "unknown trip " + id) {}
};

struct SchemaError : ServiceError {
  explicit SchemaError(const std::string& message) : ServiceError(400, "SchemaError", message) {}
};

struct BadRequest : ServiceError {
  explicit BadRequest(const std::string& message) : ServiceError(400, "BadRequest", message) {}
};

}  // namespace rdemon::service
