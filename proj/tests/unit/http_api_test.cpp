// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the service through real sockets: HTTP via cpp-httplib, the
// push channel via a Beast WebSocket client.

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <filesystem>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "rdemon/reporting/report.hpp"
#include "rdemon/service/server.hpp"
#include "rdemon/sim/fixture.hpp"
#include "rdemon/sim/simulator.hpp"

using namespace rdemon;
using namespace rdemon::service;
using nlohmann::json;
namespace fs = std::filesystem;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = boost::asio::ip::tcp;

namespace {

struct Fixture {
  fs::path dir;
  std::unique_ptr<TripStore> store;
  std::unique_ptr<SessionManager> sessions;
  std::unique_ptr<Api> api;
  std::unique_ptr<Server> server;
  std::unique_ptr<httplib::Client> http;

  Fixture() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("rdemon-http-" + std::to_string(rd()) + std::to_string(rd()));
    store = std::make_unique<TripStore>(dir);
    sessions = std::make_unique<SessionManager>(*store);
    api = std::make_unique<Api>(*sessions, *store);
    server = std::make_unique<Server>(*api);
    server->start();
    http = std::make_unique<httplib::Client>("127.0.0.1", server->port());
    http->set_read_timeout(60, 0);
  }
  ~Fixture() {
    http.reset();
    server->stop();
    sessions.reset();
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  std::pair<int, json> call(const std::string& method, const std::string& path, const std::string& body = "") {
    httplib::Result r = method == "GET"      ? http->Get(path)
                        : method == "DELETE" ? http->Delete(path)
                                             : http->Post(path, body, "application/json");
    REQUIRE(r);
    json j = r->body.empty() ? json() : json::parse(r->body, nullptr, false);
    return {r->status, j};
  }

  json wait_finished(const std::string& id) {
    for (int i = 0; i < 3000; ++i) {
      auto [status, s] = call("GET", "/sessions/" + id + "/state");
      REQUIRE(status == 200);
      if (s["finished"] == true) return s;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    FAIL("session did not finish");
    return {};
  }
};

std::vector<json> read_live(unsigned short port, const std::string& id, std::function<void()> after_handshake) {
  boost::asio::io_context io;
  tcp::resolver resolver(io);
  websocket::stream<tcp::socket> ws(io);
  boost::asio::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
  ws.handshake("127.0.0.1", "/sessions/" + id + "/live");
  after_handshake();
  std::vector<json> out;
  beast::flat_buffer buf;
  beast::error_code ec;
  for (;;) {
    ws.read(buf, ec);
    if (ec) break;
    const auto text = beast::buffers_to_string(buf.data());
    buf.consume(buf.size());
    CHECK(text.back() == '\n');
    out.push_back(json::parse(text));
  }
  CHECK(ec == websocket::error::closed);
  return out;
}

}  // namespace

TEST_CASE("trip upload and report over HTTP") {
  Fixture f;
  const auto trip = sim::segment_fixture(sim::drive2_targets());
  const auto text = obd::write_cdp(trip);
  auto [status, body] = f.call("POST", "/trips", text);
  CHECK(status == 201);
  const auto id = body["trip_id"].get<std::string>();
  CHECK(id == sha256_hex(text));
  auto again = f.call("POST", "/trips", text);
  CHECK(again.first == 200);
  CHECK(again.second["created"] == false);

  auto [rs, report] = f.call("GET", "/trips/" + id + "/report");
  CHECK(rs == 200);
  const auto oracle = reporting::to_json(reporting::segment_table(trip));
  CHECK(report["total"] == oracle["total"]);
  CHECK(report["segments"] == oracle["segments"]);
  CHECK(std::abs(report["total"]["distance_km"].get<double>() - 90.22) <= 0.02 + 1e-9);
  CHECK(report["total"]["nox_mg_per_km"] == 99);
  CHECK(report["total"]["co2_g_per_km"] == 205);

  auto listing = f.call("GET", "/trips");
  CHECK(listing.second["trips"].size() == 1);
  auto raw = f.http->Get("/trips/" + id);
  REQUIRE(raw);
  CHECK(raw->body == text);

  auto series = f.call("GET", "/trips/" + id + "/series?streams=velo_kmph,nox_mgps&max_points=40");
  CHECK(series.first == 200);
  CHECK(series.second["series"].size() == 2);
  CHECK(series.second["series"][0]["t"].size() == 40);
  CHECK(f.call("GET", "/trips/" + id + "/series?streams=warp").first == 400);

  auto bad = f.call("POST", "/trips", "{ not json");
  CHECK(bad.first == 400);
  CHECK(bad.second["error"] == "SchemaError");
  auto missing = f.call("GET", "/trips/" + std::string(64, '0') + "/report");
  CHECK(missing.first == 404);
  CHECK(missing.second["error"] == "UnknownTrip");
}

TEST_CASE("session endpoints and error codes") {
  Fixture f;
  CHECK(f.call("GET", "/health").second["status"] == "ok");
  CHECK(f.call("GET", "/nowhere").first == 404);
  CHECK(f.call("DELETE", "/trips").first == 405);
  auto none = f.call("DELETE", "/sessions/session-1");
  CHECK(none.first == 404);
  CHECK(none.second["error"] == "NoSession");
  CHECK(f.call("POST", "/sessions", R"({"mode": "bogus"})").first == 400);

  const auto tid = f.store->put(sim::run_profile(sim::builtin_profile("valid-rde"))).id;
  auto [status, started] = f.call("POST", "/sessions", json{{"mode", "replay"}, {"trip", tid}}.dump());
  CHECK(status == 201);
  const auto id = started["session"].get<std::string>();
  CHECK(started["state"]["verdict"] == "?");
  auto busy = f.call("POST", "/sessions", R"({"mode": "live"})");
  CHECK(busy.first == 409);
  CHECK(busy.second["error"] == "SessionBusy");
  auto notlive = f.call("POST", "/sessions/" + id + "/control", R"({"command": "end_drive"})");
  CHECK(notlive.first == 409);
  CHECK(notlive.second["error"] == "NotLive");

  const auto last = f.wait_finished(id);
  CHECK(last["verdict"] == "valid");
  auto [ds, fin] = f.call("DELETE", "/sessions/" + id);
  CHECK(ds == 200);
  CHECK(fin["trip_id"] == tid);
  CHECK(fin["report"]["total"]["distance_km"].get<double>() > 80.0);
  CHECK(f.call("GET", "/sessions/" + id + "/state").first == 404);
}

TEST_CASE("push channel streams states and triggers") {
  Fixture f;
  const auto tid = f.store->put(sim::run_profile(sim::builtin_profile("speeding"))).id;
  auto [status, started] = f.call("POST", "/sessions", json{{"mode", "replay"}, {"trip", tid}, {"rate", 0}}.dump());
  REQUIRE(status == 201);
  const auto id = started["session"].get<std::string>();
  // The channel closes when the session is stopped.
  std::thread stopper;
  const auto msgs = read_live(f.server->port(), id, [&] {
    stopper = std::thread([&f, id] {
      f.wait_finished(id);
      f.call("DELETE", "/sessions/" + id);
    });
  });
  stopper.join();
  REQUIRE(msgs.size() > 100);
  CHECK(msgs.front()["type"] == "state");
  double t = 0.0;
  bool trigger = false;
  bool latched = false;
  for (const auto& m : msgs) {
    const double now = m["type"] == "state" ? m["t_s"].get<double>() : m["t"].get<double>();
    CHECK(now >= t);
    t = now;
    if (m["type"] == "trigger") trigger = true;
    if (m["type"] == "state") {
      latched = latched || m["irrecoverable"].get<bool>();
      if (latched) CHECK(m["verdict"] == "invalid");
    }
  }
  CHECK(trigger);
  CHECK(latched);
  CHECK(msgs.back()["finished"] == true);
  // The last pushed state has the same shape as GET /state.
  auto keys = [](const json& j) {
    std::vector<std::string> k;
    for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
    return k;
  };
  CHECK(keys(msgs.back()) == keys(started["state"]));
}

TEST_CASE("live session over HTTP") {
  Fixture f;
  auto [status, started] = f.call("POST", "/sessions", R"({"mode": "live", "profile": "city-loop", "rate": 100})");
  REQUIRE(status == 201);
  const auto id = started["session"].get<std::string>();
  CHECK(f.call("POST", "/sessions/" + id + "/control", R"({"command": "set_target", "target_kmph": 50})")
            .second["ack"] == true);
  auto [es, fin] = f.call("POST", "/sessions/" + id + "/control", R"({"command": "end_drive"})");
  CHECK(es == 200);
  CHECK(fin["state"]["finished"] == true);
  CHECK(f.call("GET", "/trips/" + fin["trip_id"].get<std::string>()).first == 200);
  CHECK(f.call("GET", "/sessions").second["mode"] == "idle");
  CHECK(f.call("GET", "/sessions/" + id + "/live").first == 404);
}
