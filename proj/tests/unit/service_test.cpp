// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <random>
#include <thread>

#include "doctest.h"
#include "rdemon/service/errors.hpp"
#include "rdemon/service/session.hpp"
#include "rdemon/sim/fixture.hpp"
#include "rdemon/sim/simulator.hpp"

using namespace rdemon;
using namespace rdemon::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("rdemon-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

json drain(SessionManager& m, const std::string& id) {
  for (int i = 0; i < 6000; ++i) {
    auto s = m.state(id);
    if ((*s)["finished"].get<bool>()) return json::parse(s->dump());
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  FAIL("session did not finish");
  return {};
}

std::vector<json> collect(Subscription& sub) {
  std::vector<json> out;
  while (!sub.closed()) {
    if (auto m = sub.next(std::chrono::milliseconds(100))) out.push_back(json::parse(*m));
  }
  return out;
}

}  // namespace

TEST_CASE("sha256 of a known vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("trip store is content addressed") {
  TempDir dir;
  TripStore store(dir.path);
  const auto trip = sim::segment_fixture({{rde::SegmentClass::Urban, 1.0, 100.0, 150.0}});
  const auto a = store.put(trip);
  CHECK(a.created);
  CHECK(a.id == sha256_hex(obd::write_cdp(trip)));
  const auto b = store.put_text(obd::write_cdp(trip));
  CHECK_FALSE(b.created);
  CHECK(b.id == a.id);
  CHECK(store.list() == std::vector<std::string>{a.id});
  CHECK(obd::write_cdp(store.get(a.id)) == obd::write_cdp(trip));
  CHECK(store.report(a.id)["total"]["nox_mg_per_km"] == 100);
  CHECK_THROWS_AS(store.get("0000"), UnknownTrip);
  CHECK_THROWS_AS(store.report("../etc/passwd"), UnknownTrip);
  CHECK_THROWS_AS(store.put_text("{\"version\": 1"), SchemaError);
  CHECK_THROWS_AS(store.put_text("{\"version\": \"1.0\"}"), SchemaError);
}

TEST_CASE("session lifecycle errors") {
  TempDir dir;
  TripStore store(dir.path);
  SessionManager m(store);
  CHECK_THROWS_AS(m.stop("session-9"), NoSession);
  CHECK_THROWS_AS(m.state("session-9"), NoSession);
  CHECK_THROWS_AS(m.start(json{{"mode", "replay"}, {"trip", std::string(64, 'a')}}), UnknownTrip);
  CHECK_THROWS_AS(m.start(json{{"mode", "warp"}}), BadRequest);
  CHECK_THROWS_AS(m.start(json{{"mode", "live"}, {"rate", 0}}), BadRequest);
  CHECK_THROWS_AS(m.start(json{{"mode", "live"}, {"profile", "nope"}}), BadRequest);

  const auto id = m.start(json{{"mode", "live"}, {"rate", 20.0}});
  const auto first = *m.state(id);
  CHECK(first["t_s"] == 0.0);
  CHECK(first["total_distance_km"] == 0.0);
  CHECK(first["verdict"] == "?");
  CHECK_THROWS_AS(m.start(json{{"mode", "live"}}), SessionBusy);
  CHECK(m.describe()["active"] == id);
  const auto fin = m.stop(id);
  CHECK(fin["session"] == id);
  CHECK(store.contains(fin["trip_id"].get<std::string>()));
  CHECK_THROWS_AS(m.stop(id), NoSession);
  CHECK(m.describe()["mode"] == "idle");
}

TEST_CASE("replaying the golden trip ends valid") {
  TempDir dir;
  TripStore store(dir.path);
  SessionManager m(store);
  const auto trip = sim::run_profile(sim::builtin_profile("valid-rde"));
  const auto tid = store.put(trip).id;
  const auto id = m.start(json{{"mode", "replay"}, {"trip", tid}});
  CHECK_THROWS_AS(m.control(id, json{{"command", "end_drive"}}), NotLive);
  const auto last = drain(m, id);
  CHECK(last["verdict"] == "valid");
  CHECK_FALSE(last["irrecoverable"].get<bool>());
  CHECK(last["t_s"].get<double>() > 5400.0);
  const auto fin = m.stop(id);
  CHECK(fin["trip_id"] == tid);
  CHECK(fin["state"]["verdict"] == "valid");
  CHECK(fin["report"]["total"]["distance_km"].get<double>() > 80.0);
}

TEST_CASE("replaying the first reference drive flags NOx") {
  TempDir dir;
  TripStore store(dir.path);
  SessionManager m(store);
  const auto tid = store.put(sim::segment_fixture(sim::drive1_targets())).id;
  const auto id = m.start(json{{"mode", "replay"}, {"trip", tid}});
  const auto last = drain(m, id);
  CHECK(last["nox"]["over_limit"] == true);
  CHECK(last["nox"]["mg_per_km"].get<double>() == doctest::Approx(214.0).epsilon(0.005));
  CHECK(last["nox"]["limit"] == 168.0);
  m.stop(id);
}

TEST_CASE("push channel is ordered and replays are reproducible") {
  TempDir dir;
  TripStore store(dir.path);
  SessionManager m(store);
  const auto tid = store.put(sim::run_profile(sim::builtin_profile("speeding"))).id;
  std::vector<std::vector<json>> runs;
  for (int round = 0; round < 2; ++round) {
    const auto id = m.start(json{{"mode", "replay"}, {"trip", tid}, {"rate", 0}});
    auto sub = m.subscribe(id);
    drain(m, id);
    m.stop(id);
    auto msgs = collect(*sub);
    for (auto& j : msgs) j.erase("session");
    runs.push_back(std::move(msgs));
  }
  REQUIRE(runs[0].size() > 100);
  CHECK(runs[0] == runs[1]);

  const auto& msgs = runs[0];
  double t = 0.0;
  bool irrecoverable = false;
  bool trigger_seen = false;
  for (const auto& j : msgs) {
    CHECK(j.contains("t") != j.contains("t_s"));
    const double now = j.contains("t_s") ? j["t_s"].get<double>() : j["t"].get<double>();
    CHECK(now >= t);
    t = now;
    if (j["type"] == "trigger" && j["message"] == "speed above 160 km/h") trigger_seen = true;
    if (j["type"] == "state") {
      if (j["irrecoverable"].get<bool>()) irrecoverable = true;
      if (irrecoverable) CHECK(j["verdict"] == "invalid");
    }
  }
  CHECK(trigger_seen);
  CHECK(irrecoverable);
}

TEST_CASE("live session follows control commands") {
  TempDir dir;
  TripStore store(dir.path);
  SessionManager m(store);
  const auto id = m.start(json{{"mode", "live"}, {"rate", 200.0}});
  CHECK(m.control(id, json{{"command", "set_target"}, {"target_kmph", 50}})["ack"] == true);
  CHECK_THROWS_AS(m.control(id, json{{"command", "set_target"}, {"target_kmph", -5}}), BadRequest);
  CHECK_THROWS_AS(m.control(id, json{{"command", "fly"}}), BadRequest);
  double v = 0.0;
  for (int i = 0; i < 500 && v < 49.0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
    const auto s = *m.state(id);
    if (s["velo_kmph"].is_number()) v = s["velo_kmph"].get<double>();
  }
  CHECK(v == doctest::Approx(50.0).epsilon(0.03));
  CHECK((*m.state(id))["target_kmph"] == 50.0);
  const auto fin = m.control(id, json{{"command", "end_drive"}});
  CHECK(fin["state"]["finished"] == true);
  CHECK(store.contains(fin["trip_id"].get<std::string>()));
  CHECK_THROWS_AS(m.state(id), NoSession);
}

TEST_CASE("live speeding turns the verdict irrecoverably invalid") {
  TempDir dir;
  TripStore store(dir.path);
  SessionManager m(store);
  const auto id = m.start(json{{"mode", "live"}, {"rate", 500.0}});
  m.control(id, json{{"command", "set_aggressiveness"}, {"value", 1.0}});
  m.control(id, json{{"command", "set_target"}, {"target_kmph", 170}});
  bool irrecoverable = false;
  for (int i = 0; i < 1000 && !irrecoverable; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
    irrecoverable = (*m.state(id))["irrecoverable"].get<bool>();
  }
  CHECK(irrecoverable);
  const auto s = *m.state(id);
  CHECK(s["verdict"] == "invalid");
  CHECK(s["triggers"].size() >= 1);
  m.stop(id);
}
