// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rdemon/service/api.hpp"

namespace rdemon::service {

/// HTTP/1.1 plus WebSocket server, one thread per connection.
class Server {
 public:
  /// Port 0 picks a free port; see port() after start().
  Server(Api& api, std::string address = "127.0.0.1", unsigned short port = 0);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  void start();
  void stop();
  unsigned short port() const { return port_; }

 private:
  struct Impl;
  Api& api_;
  std::string address_;
  unsigned short port_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rdemon::service
