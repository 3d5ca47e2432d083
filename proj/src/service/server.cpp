// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/service/server.hpp"

#include <sys/socket.h>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <list>

#include "rdemon/service/errors.hpp"

namespace rdemon::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct Server::Impl {
  struct Connection {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done = std::make_shared<std::atomic<bool>>(false);
    int fd = -1;
  };

  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::thread accept_thread;
  std::atomic<bool> stopping{false};
  std::mutex mu;
  std::list<Connection> connections;

  void reap() {
    std::lock_guard lock(mu);
    for (auto it = connections.begin(); it != connections.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }
};

namespace {

std::string_view sv(beast::string_view s) { return {s.data(), s.size()}; }

void add_common_headers(http::response<http::string_body>& res) {
  res.set(http::field::server, "rdemon");
  res.set(http::field::access_control_allow_origin, "*");
  res.set(http::field::access_control_allow_methods, "GET, POST, DELETE, OPTIONS");
  res.set(http::field::access_control_allow_headers, "Content-Type");
}

void serve_live(Api& api, tcp::socket socket, http::request<http::string_body> req, const std::string& id,
                const std::atomic<bool>& stopping) {
  std::shared_ptr<Subscription> sub;
  try {
    sub = api.sessions().subscribe(id);
  } catch (const ServiceError& e) {
    http::response<http::string_body> res{static_cast<http::status>(e.status()), req.version()};
    add_common_headers(res);
    res.set(http::field::content_type, "application/json");
    res.body() = nlohmann::json{{"error", e.code()}, {"message", e.what()}}.dump() + "\n";
    res.prepare_payload();
    beast::error_code ec;
    http::write(socket, res, ec);
    return;
  }
  websocket::stream<tcp::socket> ws(std::move(socket));
  ws.set_option(websocket::stream_base::decorator(
      [](websocket::response_type& res) { res.set(http::field::server, "rdemon"); }));
  ws.accept(req);
  ws.text(true);
  beast::error_code ec;
  while (!stopping.load()) {
    auto msg = sub->next(std::chrono::milliseconds(200));
    if (msg) {
      msg->push_back('\n');
      ws.write(asio::buffer(*msg), ec);
      if (ec) return;
    } else if (sub->closed()) {
      break;
    }
  }
  ws.close(websocket::close_code::normal, ec);
  // Drain until the peer acknowledges the close.
  beast::flat_buffer buf;
  while (!ec) ws.read(buf, ec);
}

void serve(Api& api, tcp::socket socket, const std::atomic<bool>& stopping) {
  beast::flat_buffer buffer;
  beast::error_code ec;
  for (;;) {
    http::request_parser<http::string_body> parser;
    parser.body_limit(256u * 1024u * 1024u);
    http::read(socket, buffer, parser, ec);
    if (ec) return;
    auto req = parser.release();
    if (websocket::is_upgrade(req)) {
      if (auto id = Api::live_session(sv(req.target()))) {
        serve_live(api, std::move(socket), std::move(req), *id, stopping);
        return;
      }
    }
    const auto r = api.handle(sv(req.method_string()), sv(req.target()), req.body());
    http::response<http::string_body> res{static_cast<http::status>(r.status), req.version()};
    add_common_headers(res);
    res.set(http::field::content_type, r.content_type);
    res.keep_alive(req.keep_alive());
    res.body() = r.body;
    res.prepare_payload();
    http::write(socket, res, ec);
    if (ec || !req.keep_alive()) break;
  }
  socket.shutdown(tcp::socket::shutdown_send, ec);
}

}  // namespace

Server::Server(Api& api, std::string address, unsigned short port)
    : api_(api), address_(std::move(address)), port_(port), impl_(std::make_unique<Impl>()) {}

Server::~Server() { stop(); }

void Server::start() {
  auto& a = impl_->acceptor;
  const tcp::endpoint ep(asio::ip::make_address(address_), port_);
  a.open(ep.protocol());
  a.set_option(asio::socket_base::reuse_address(true));
  a.bind(ep);
  a.listen();
  port_ = a.local_endpoint().port();
  impl_->accept_thread = std::thread([this] {
    auto& impl = *impl_;
    while (!impl.stopping.load()) {
      beast::error_code ec;
      tcp::socket socket(impl.io);
      impl.acceptor.accept(socket, ec);
      if (ec || impl.stopping.load()) continue;
      impl.reap();
      std::lock_guard lock(impl.mu);
      auto& c = impl.connections.emplace_back();
      c.fd = socket.native_handle();
      c.thread = std::thread([this, s = std::move(socket), done = c.done]() mutable {
        try {
          serve(api_, std::move(s), impl_->stopping);
        } catch (const std::exception&) {
          // Connection errors only affect this client.
        }
        done->store(true);
      });
    }
  });
}

void Server::stop() {
  if (!impl_ || !impl_->accept_thread.joinable()) return;
  impl_->stopping.store(true);
  // Wake the blocking accept.
  ::shutdown(impl_->acceptor.native_handle(), SHUT_RDWR);
  impl_->accept_thread.join();
  beast::error_code ec;
  impl_->acceptor.close(ec);
  std::list<Impl::Connection> conns;
  {
    std::lock_guard lock(impl_->mu);
    for (auto& c : impl_->connections) {
      if (!c.done->load()) ::shutdown(c.fd, SHUT_RDWR);
    }
    conns.swap(impl_->connections);
  }
  for (auto& c : conns) c.thread.join();
}

}  // namespace rdemon::service
