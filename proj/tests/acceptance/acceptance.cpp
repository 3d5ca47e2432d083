// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "rdemon/engine/offline.hpp"
#include "rdemon/lang/printer.hpp"
#include "rdemon/obd/convert.hpp"
#include "rdemon/obd/pid.hpp"
#include "rdemon/rde/spec_builder.hpp"
#include "rdemon/rde/verdict.hpp"
#include "rdemon/reporting/report.hpp"
#include "rdemon/service/server.hpp"
#include "rdemon/sim/fixture.hpp"
#include "rdemon/sim/simulator.hpp"
#include "support/window_oracle.hpp"

using namespace rdemon;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failed expectation.
struct Checker {
  Outcome out;
  void expect(bool cond, const std::string& what) {
    if (!cond && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

fs::path temp_dir(const std::string& tag) {
  std::random_device rd;
  auto dir = fs::temp_directory_path() / ("rdemon-accept-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------
// Fragment fidelity

std::string fragment_source(const rde::RdeParameters& p) {
  using lang::format_duration;
  using lang::format_number;
  return "input velo_kmph, accel_mpss: Float64\n"
         "output is_rural := velo_kmph > " + format_number(p.urban_max_kmph) + " ∧ velo_kmph <= " +
         format_number(p.rural_max_kmph) + "\n" +
         "output rural_velo : Float64 @1Hz filter: is_rural := velo_kmph\n"
         "output rural_avg_velo : Float64 @1Hz := rural_velo.aggregate(over: " + format_duration(p.window_s) +
         ", using: avg).defaults(to: 0.0)\n"
         "output rural_dyn : Float64 @1Hz filter: is_rural := velo_kmph * accel_mpss / 3.6\n"
         "output rural_pctl_dyn : Float64 @1Hz :=\n"
         "    rural_dyn.aggregate(over: 7200, using: pctl(95)).defaults(to: 0.0)\n"
         "trigger rural_pctl_dyn > (0.136 * rural_avg_velo + 14.44)\n"
         "    ∧ rural_avg_velo <= 74.6\n";
}

struct TraceSample {
  double v;
  double a;
};

// Recomputes the fragment from scratch at every tick: sample-and-hold
// inputs, rural filter, nearest-rank percentile over the whole window.
struct FragmentOracle {
  std::vector<double> dyn_at;     // per tick, NaN when not rural
  std::vector<bool> fires_at;
  std::vector<double> pctl_at;
};

FragmentOracle brute_force(const std::vector<TraceSample>& trace, double window) {
  FragmentOracle o;
  const std::size_t n = trace.size() - 1;  // ticks 1..n
  o.dyn_at.assign(n + 1, std::nan(""));
  o.fires_at.assign(n + 1, false);
  o.pctl_at.assign(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    if (trace[k].v > 60.0 && trace[k].v <= 90.0) o.dyn_at[k] = trace[k].v * trace[k].a / 3.6;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<double> dyn;
    double vsum = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      if (static_cast<double>(j) <= static_cast<double>(k) - window || std::isnan(o.dyn_at[j])) continue;
      dyn.push_back(o.dyn_at[j]);
      vsum += trace[j].v;
    }
    double pctl = 0.0, avg = 0.0;
    if (!dyn.empty()) {
      std::sort(dyn.begin(), dyn.end());
      auto r = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(dyn.size())));
      pctl = dyn[std::clamp<std::size_t>(r, 1, dyn.size()) - 1];
      avg = vsum / static_cast<double>(dyn.size());
    }
    o.pctl_at[k] = pctl;
    o.fires_at[k] = pctl > 0.136 * avg + 14.44 && avg <= 74.6;
  }
  return o;
}

struct FragmentRun {
  std::map<double, double> dyn, pctl;
  std::set<double> fired;
  double seconds = 0.0;
};

FragmentRun run_fragment(const std::shared_ptr<const lang::TypedSpecification>& spec,
                         const std::vector<TraceSample>& trace) {
  FragmentRun r;
  const auto start = std::chrono::steady_clock::now();
  engine::Monitor m(spec, 0.0);
  std::vector<engine::MonitorOutput> all;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = static_cast<double>(k);
    auto a = m.ingest({t, "velo_kmph", trace[k].v});
    auto b = m.ingest({t, "accel_mpss", trace[k].a});
    all.insert(all.end(), a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
  }
  auto tail = m.advance_time(static_cast<double>(trace.size() - 1));
  all.insert(all.end(), tail.begin(), tail.end());
  r.seconds = seconds_since(start);
  for (const auto& o : all) {
    if (o.is_trigger()) {
      r.fired.insert(o.time);
    } else if (const auto& sv = std::get<engine::StreamValue>(o.kind); sv.name == "rural_dyn") {
      r.dyn[o.time] = std::get<double>(sv.value);
    } else if (sv.name == "rural_pctl_dyn") {
      r.pctl[o.time] = std::get<double>(sv.value);
    }
  }
  return r;
}

void compare_fragment(Checker& c, const std::string& name, const FragmentRun& run, const FragmentOracle& o) {
  const std::size_t n = o.dyn_at.size() - 1;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k);
    const auto it = run.dyn.find(t);
    if (std::isnan(o.dyn_at[k])) {
      c.expect(it == run.dyn.end(), name + ": rural_dyn present at non-rural tick " + fixed(t, 0));
    } else {
      c.expect(it != run.dyn.end() && std::abs(it->second - o.dyn_at[k]) <= 1e-9,
               name + ": rural_dyn mismatch at tick " + fixed(t, 0));
    }
    const auto p = run.pctl.find(t);
    c.expect(p != run.pctl.end() && std::abs(p->second - o.pctl_at[k]) <= 1e-9,
             name + ": rural_pctl_dyn mismatch at tick " + fixed(t, 0));
    c.expect(run.fired.count(t) == (o.fires_at[k] ? 1u : 0u), name + ": trigger mismatch at tick " + fixed(t, 0));
  }
  c.expect(run.seconds < 1.0, name + ": monitor took " + fixed(run.seconds, 3) + " s");
}

Outcome fragment_fidelity() {
  Checker c;
  const rde::RdeParameters p;
  const auto spec = std::make_shared<const lang::TypedSpecification>(lang::typecheck(lang::parse(fragment_source(p))));
  c.expect(spec->warnings.empty(), "fragment typechecks with warnings");

  // Constant 70 km/h at 1 m/s^2 for 1800 s.
  std::vector<TraceSample> constant(1801, TraceSample{70.0, 1.0});
  const auto o1 = brute_force(constant, p.window_s);
  const auto r1 = run_fragment(spec, constant);
  compare_fragment(c, "constant", r1, o1);
  const double dyn = 70.0 * 1.0 / 3.6;
  const double threshold = 0.136 * 70.0 + 14.44;
  c.expect(fixed(dyn, 2) == "19.44", "rural_dyn prints " + fixed(dyn, 2));
  c.expect(std::abs(threshold - 23.96) <= 1e-9, "threshold is " + fixed(threshold, 12));
  c.expect(r1.fired.empty(), "trigger fired on the constant trace");

  // Mixed trace: leaves the rural band and carries bursts above the threshold.
  std::mt19937_64 rng(70);
  std::vector<TraceSample> mixed{{0.0, 0.0}};
  const double speeds[] = {50.0, 62.0, 70.0, 74.0, 88.0, 95.0};
  for (int k = 1; k <= 1800; ++k) {
    const bool burst = (k / 150) % 3 == 2;
    mixed.push_back({speeds[rng() % 6], burst ? 1.2 + 0.1 * static_cast<double>(rng() % 6) : 0.8});
  }
  const auto o2 = brute_force(mixed, p.window_s);
  const auto r2 = run_fragment(spec, mixed);
  compare_fragment(c, "mixed", r2, o2);
  c.expect(!r2.fired.empty(), "mixed trace never fires");
  c.expect(r2.fired.size() < 1800, "mixed trace always fires");

  if (c.out.pass) {
    c.out.detail = "rural_dyn=" + fixed(dyn, 2) + " threshold=" + fixed(threshold, 2) + "; constant trace 0 fires, mixed " +
                   std::to_string(r2.fired.size()) + "/1800 fires match brute force (1e-9); monitor " +
                   fixed(std::max(r1.seconds, r2.seconds), 3) + " s";
  }
  return c.out;
}

// ---------------------------------------------------------------------------
// Published drive aggregates

Outcome table_reproduction() {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  struct Drive {
    std::string name;
    std::vector<sim::SegmentTarget> targets;
    double km, nox, co2;
  };
  std::string detail;
  for (const auto& d : {Drive{"drive 1", sim::drive1_targets(), 83.88, 214, 183},
                        Drive{"drive 2", sim::drive2_targets(), 90.22, 99, 205}}) {
    const auto trip = sim::segment_fixture(d.targets);
    // Parse the printed CSV total row, as a user of the report would see it.
    const auto csv = reporting::format_csv(reporting::segment_table(trip));
    const auto pos = csv.find("\ntotal,");
    c.expect(pos != std::string::npos, d.name + ": no total row");
    if (pos == std::string::npos) continue;
    std::istringstream row(csv.substr(pos + 7));
    double km = 0, nox = 0, co2 = 0;
    char comma = 0;
    row >> km >> comma >> nox >> comma >> co2;
    c.expect(std::abs(km - d.km) <= 0.02 + 1e-9, d.name + ": distance " + fixed(km, 2));
    c.expect(std::abs(nox - d.nox) <= 1.0, d.name + ": NOx " + fixed(nox, 0));
    c.expect(std::abs(co2 - d.co2) <= 1.0, d.name + ": CO2 " + fixed(co2, 0));
    detail += d.name + " " + fixed(km, 2) + " km / " + fixed(nox, 0) + " / " + fixed(co2, 0) + "; ";
  }
  const double secs = seconds_since(start);
  c.expect(secs < 5.0, "took " + fixed(secs, 2) + " s");
  if (c.out.pass) c.out.detail = detail + fixed(secs, 2) + " s";
  return c.out;
}

// ---------------------------------------------------------------------------
// Window oracle

Outcome window_oracle() {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  testing::OracleTally tally;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) testing::check_random_stream(seed, tally);
  const double secs = seconds_since(start);
  c.expect(tally.mismatches == 0, std::to_string(tally.mismatches) + " mismatches, first: " + tally.first_failure);
  c.expect(secs < 30.0, "took " + fixed(secs, 2) + " s");
  if (c.out.pass) {
    c.out.detail = "1000 streams, " + std::to_string(tally.comparisons) + " comparisons, 0 mismatches, " +
                   fixed(secs, 2) + " s";
  }
  return c.out;
}

// ---------------------------------------------------------------------------
// Verdict end to end

struct Snapshot {
  double t;
  rde::TripStats stats;
  rde::RdeVerdict verdict;
};

// Runs the generated specification over a simulated trip, taking a verdict
// snapshot every `step` seconds of the monitor clock.
std::vector<Snapshot> monitor_timeline(const obd::CdpTrip& trip, double step) {
  const rde::RdeParameters p;
  const auto events = obd::to_engine_events(trip);
  engine::Monitor m(rde::compile_rde_spec(p), 0.0);
  std::vector<Snapshot> out;
  std::size_t i = 0;
  const double end = events.back().time;
  for (double t = step;; t += step) {
    const double lim = std::min(t, end);
    for (; i < events.size() && events[i].time <= lim; ++i) {
      if (m.accepts(events[i].stream)) m.ingest(events[i]);
    }
    m.advance_time(lim);
    const auto stats = rde::stats_from_monitor(m);
    out.push_back({lim, stats, rde::update_verdict(stats, p)});
    if (lim >= end) break;
  }
  return out;
}

Outcome verdict_end_to_end() {
  Checker c;
  std::string detail;

  const auto golden = monitor_timeline(sim::run_profile(sim::builtin_profile("valid-rde")), 60.0);
  int valid_snaps = 0;
  for (const auto& s : golden) {
    if (s.t >= 91 * 60.0 && s.t <= 119 * 60.0 && s.verdict.overall == rde::Overall::Valid) ++valid_snaps;
  }
  c.expect(valid_snaps > 0, "golden profile never valid in minutes 91..119");
  detail += "golden valid at " + std::to_string(valid_snaps) + " snapshots; ";

  const auto speeding = sim::run_profile(sim::builtin_profile("speeding"));
  const auto sp = monitor_timeline(speeding, 1.0);
  // The transgression tick: first deadline whose held velocity exceeds the limit.
  double transgression = -1.0;
  {
    const auto events = obd::to_engine_events(speeding);
    double held = 0.0;
    std::size_t i = 0;
    for (double k = 1.0; k <= events.back().time && transgression < 0; k += 1.0) {
      while (i < events.size() && events[i].time <= k) {
        if (events[i].stream == "velo_kmph") held = std::get<double>(events[i].value);
        ++i;
      }
      if (held > 160.0) transgression = k;
    }
  }
  c.expect(transgression > 0, "speeding profile never exceeds 160 km/h");
  for (const auto& s : sp) {
    const bool after = s.t >= transgression;
    c.expect(s.verdict.irrecoverable == after, "irrecoverable=" + std::string(s.verdict.irrecoverable ? "true" : "false") +
                                                  " at t=" + fixed(s.t, 0));
    if (after) c.expect(s.verdict.overall == rde::Overall::Invalid, "speeding not invalid at t=" + fixed(s.t, 0));
  }
  detail += "speeding irrecoverable from t=" + fixed(transgression, 0) + " s; ";

  const auto alt = monitor_timeline(sim::run_profile(sim::builtin_profile("alternation")), 60.0);
  double valid_at = -1.0, invalid_at = -1.0;
  for (const auto& s : alt) {
    if (s.t < 90 * 60.0 || s.t > 120 * 60.0) continue;
    if (valid_at < 0 && s.verdict.overall == rde::Overall::Valid) valid_at = s.t;
    if (valid_at >= 0 && invalid_at < 0 && s.verdict.overall == rde::Overall::Invalid) {
      invalid_at = s.t;
      c.expect(!s.verdict.irrecoverable, "alternation turned irrecoverable");
      const auto* share = s.verdict.find("urban_share");
      c.expect(share && share->status == rde::Status::Violated, "alternation invalid for another reason");
    }
  }
  c.expect(valid_at > 0 && invalid_at > 0, "no valid to invalid transition in minutes 90..120");
  detail += "alternation valid at " + fixed(valid_at / 60.0, 0) + " min, invalid (urban share) at " +
            fixed(invalid_at / 60.0, 0) + " min";
  if (c.out.pass) c.out.detail = detail;
  return c.out;
}

// ---------------------------------------------------------------------------
// Determinism

std::string monitor_log(const obd::CdpTrip& trip) {
  engine::Monitor m(rde::compile_rde_spec({}), 0.0);
  std::ostringstream os;
  std::vector<engine::Event> events;
  for (auto& e : obd::to_engine_events(trip)) {
    if (m.accepts(e.stream)) events.push_back(std::move(e));
  }
  engine::write_output_jsonl(os, engine::run_offline(m, events));
  return os.str();
}

Outcome determinism() {
  Checker c;
  const auto dir_a = temp_dir("a");
  const auto dir_b = temp_dir("b");
  service::TripStore a(dir_a), b(dir_b);
  std::vector<obd::CdpTrip> trips;
  for (const auto& name : sim::builtin_profile_names()) trips.push_back(sim::run_profile(sim::builtin_profile(name)));
  trips.push_back(sim::segment_fixture(sim::drive1_targets()));
  trips.push_back(sim::segment_fixture(sim::drive2_targets()));
  std::size_t bytes = 0;
  for (const auto& trip : trips) {
    const auto id = a.put(trip).id;
    c.expect(b.put(trip).id == id, "stores disagree on the trip id");
    const auto log1 = monitor_log(a.get(id));
    const auto log2 = monitor_log(b.get(id));
    c.expect(!log1.empty() && log1 == log2, "monitor logs differ for " + id);
    const auto r1 = a.report(id).dump();
    const auto r2 = b.report(id).dump();
    c.expect(r1 == r2, "reports differ for " + id);
    c.expect(reporting::format_csv(reporting::segment_table(a.get(id))) ==
                 reporting::format_csv(reporting::segment_table(b.get(id))),
             "printed tables differ for " + id);
    bytes += log1.size();
  }
  std::error_code ec;
  fs::remove_all(dir_a, ec);
  fs::remove_all(dir_b, ec);
  if (c.out.pass) {
    c.out.detail = std::to_string(trips.size()) + " stored trips replayed twice, " + std::to_string(bytes) +
                   " log bytes identical, reports identical";
  }
  return c.out;
}

// ---------------------------------------------------------------------------
// CDP round trip and decode totality

obd::CdpTrip random_trip(std::mt19937_64& rng, std::size_t n) {
  static const std::vector<std::string> models = {"A6 50 TDI", "Škoda", "日産 リーフ", "quote \" \\ x", ""};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  obd::CdpTrip trip;
  trip.vehicle.model = models[rng() % models.size()];
  trip.vehicle.sensor_profile = "p" + std::to_string(rng() % 4);
  if (unit(rng) < 0.3) trip.vehicle.nox = obd::NoxScaling{0.05 * static_cast<double>(1 + rng() % 10), -3.0};
  double t = 1.7e9 + std::floor(unit(rng) * 1e6) / 16.0;
  const auto table = obd::pid_table();
  for (std::size_t i = 0; i < n; ++i) {
    t += std::floor(unit(rng) * 8.0) / 8.0;
    if (unit(rng) < 0.75) {
      const auto& info = table[rng() % table.size()];
      obd::Bytes payload(info.payload_length);
      for (auto& x : payload) x = static_cast<std::uint8_t>(rng() % 256);
      trip.events.push_back(obd::CdpEvent{t, obd::ObdResponse{info.pid, payload}});
    } else {
      obd::GpsFix g{unit(rng) * 180.0 - 90.0, unit(rng) * 360.0 - 180.0, unit(rng) * 3000.0 - 100.0, std::nullopt};
      if (unit(rng) < 0.5) g.speed_mps = unit(rng) * 60.0;
      trip.events.push_back(obd::CdpEvent{t, g});
    }
  }
  return trip;
}

Outcome cdp_round_trip() {
  Checker c;
  std::mt19937_64 rng(661);
  int trips = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    const auto trip = random_trip(rng, i * 3);
    const auto text = obd::write_cdp(trip);
    const auto back = obd::read_cdp(text);
    c.expect(back == trip, "trip " + std::to_string(i) + " does not read back equal");
    c.expect(obd::write_cdp(back) == text, "trip " + std::to_string(i) + " text is not stable");
    ++trips;
  }
  const auto sim_trip = sim::run_profile(sim::builtin_profile("city-loop"));
  c.expect(obd::read_cdp(obd::write_cdp(sim_trip)) == sim_trip, "simulated trip does not round trip");

  std::set<int> known;
  long decoded = 0;
  for (const auto& info : obd::pid_table()) {
    known.insert(info.pid);
    const std::size_t n = info.payload_length;
    auto check = [&](const obd::Bytes& payload) {
      try {
        for (const auto& r : obd::decode_pid(info.pid, payload)) {
          c.expect(std::isfinite(r.value), "non-finite reading for PID " + std::to_string(info.pid));
        }
        ++decoded;
      } catch (const std::exception& e) {
        c.expect(false, "PID " + std::to_string(info.pid) + " rejected a payload: " + e.what());
      }
    };
    if (n <= 2) {
      for (long code = 0; code < (n == 1 ? 256 : 65536); ++code) {
        obd::Bytes payload;
        if (n == 2) payload.push_back(static_cast<std::uint8_t>(code >> 8));
        payload.push_back(static_cast<std::uint8_t>(code & 0xFF));
        check(payload);
      }
    } else {
      for (int k = 0; k < 50000; ++k) {
        obd::Bytes payload(n);
        for (auto& x : payload) x = static_cast<std::uint8_t>(rng() % 256);
        check(payload);
      }
    }
    for (std::size_t wrong = 0; wrong <= 6; ++wrong) {
      if (wrong == n) continue;
      bool threw = false;
      try {
        obd::decode_pid(info.pid, obd::Bytes(wrong, 0));
      } catch (const obd::PayloadLength&) {
        threw = true;
      }
      c.expect(threw, "PID " + std::to_string(info.pid) + " accepted a payload of length " + std::to_string(wrong));
    }
  }
  for (int p = 0; p < 256; ++p) {
    if (known.count(p)) continue;
    bool threw = false;
    try {
      obd::decode_pid(static_cast<std::uint8_t>(p), obd::Bytes{0, 0});
    } catch (const obd::UnknownPid&) {
      threw = true;
    }
    c.expect(threw, "unknown PID " + std::to_string(p) + " decoded");
  }
  if (c.out.pass) {
    c.out.detail = std::to_string(trips) + " random trips round trip; " + std::to_string(decoded) + " payloads over " +
                   std::to_string(known.size()) + " PIDs decode; wrong lengths and unknown PIDs rejected";
  }
  return c.out;
}

// ---------------------------------------------------------------------------
// Service API over real sockets

std::vector<json> read_push_channel(unsigned short port, const std::string& id, const std::function<void()>& ready) {
  namespace beast = boost::beast;
  using tcp = boost::asio::ip::tcp;
  boost::asio::io_context io;
  tcp::resolver resolver(io);
  beast::websocket::stream<tcp::socket> ws(io);
  boost::asio::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
  ws.handshake("127.0.0.1", "/sessions/" + id + "/live");
  ready();
  std::vector<json> out;
  beast::flat_buffer buf;
  beast::error_code ec;
  for (;;) {
    ws.read(buf, ec);
    if (ec) break;
    out.push_back(json::parse(beast::buffers_to_string(buf.data())));
    buf.consume(buf.size());
  }
  return out;
}

Outcome service_api() {
  Checker c;
  const auto dir = temp_dir("svc");
  {
    service::TripStore store(dir);
    service::SessionManager sessions(store);
    service::Api api(sessions, store);
    service::Server server(api);
    server.start();
    httplib::Client http("127.0.0.1", server.port());
    http.set_read_timeout(120, 0);

    auto status_of = [&](const httplib::Result& r) { return r ? r->status : -1; };
    c.expect(status_of(http.Get("/health")) == 200, "GET /health");

    const auto text = obd::write_cdp(sim::run_profile(sim::builtin_profile("valid-rde")));
    auto up = http.Post("/trips", text, "application/json");
    c.expect(status_of(up) == 201, "POST /trips did not create");
    const auto trip_id = up ? json::parse(up->body).value("trip_id", "") : "";
    c.expect(status_of(http.Post("/trips", text, "application/json")) == 200, "re-upload not idempotent");
    c.expect(status_of(http.Post("/trips", "{\"version\":", "application/json")) == 400, "malformed trip accepted");

    auto rep = http.Get("/trips/" + trip_id + "/report");
    c.expect(status_of(rep) == 200 && json::parse(rep->body).contains("segments"), "GET report");
    auto ser = http.Get("/trips/" + trip_id + "/series?streams=velo_kmph,total_km&max_points=50");
    c.expect(status_of(ser) == 200, "GET series");
    c.expect(status_of(http.Get("/trips/" + std::string(64, '0'))) == 404, "unknown trip not 404");

    const auto req = json{{"mode", "replay"}, {"trip", trip_id}, {"rate", 0}}.dump();
    auto st = http.Post("/sessions", req, "application/json");
    c.expect(status_of(st) == 201, "POST /sessions");
    const auto sid = st ? json::parse(st->body).value("session", "") : "";
    c.expect(status_of(http.Post("/sessions", req, "application/json")) == 409, "second session not 409");
    c.expect(status_of(http.Get("/sessions/nope/state")) == 404, "unknown session not 404");

    json final_state;
    std::string stop_body;
    std::thread stopper;
    const auto msgs = read_push_channel(server.port(), sid, [&] {
      stopper = std::thread([&] {
        for (int i = 0; i < 12000; ++i) {
          auto s = http.Get("/sessions/" + sid + "/state");
          if (s && s->status == 200 && json::parse(s->body).value("finished", false)) break;
          std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        auto d = http.Delete("/sessions/" + sid);
        if (d) stop_body = d->body;
      });
    });
    stopper.join();
    c.expect(msgs.size() > 100, "push channel delivered " + std::to_string(msgs.size()) + " messages");
    if (!msgs.empty()) final_state = msgs.back();
    c.expect(final_state.value("finished", false), "last pushed state not finished");
    c.expect(final_state.value("verdict", "") == "valid", "golden replay verdict " + final_state.value("verdict", ""));
    c.expect(json::parse(stop_body, nullptr, false).value("trip_id", "") == trip_id, "stop did not return the trip");
    c.expect(status_of(http.Get("/sessions/" + sid + "/state")) == 404, "stopped session still answers");

    auto live = http.Post("/sessions", json{{"mode", "live"}, {"profile", "city-loop"}, {"rate", 100}}.dump(),
                          "application/json");
    c.expect(status_of(live) == 201, "live session not started");
    const auto lid = live ? json::parse(live->body).value("session", "") : "";
    c.expect(status_of(http.Post("/sessions/" + lid + "/control", R"({"command":"set_target","target_kmph":40})",
                                 "application/json")) == 200,
             "control command rejected");
    c.expect(status_of(http.Delete("/sessions/" + lid)) == 200, "live session not stopped");

    if (c.out.pass) {
      c.out.detail = "HTTP and WebSocket on port " + std::to_string(server.port()) + ", " + std::to_string(msgs.size()) +
                     " pushed messages, final verdict valid; no dashboard built";
    }
    server.stop();
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return c.out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"fragment-fidelity", fragment_fidelity},   {"drive-table-reproduction", table_reproduction},
      {"window-oracle", window_oracle},           {"verdict-end-to-end", verdict_end_to_end},
      {"determinism", determinism},               {"cdp-round-trip-and-decode-totality", cdp_round_trip},
      {"service-api-without-dashboard", service_api},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << cr.name << " (" << fixed(seconds_since(start), 2) << " s): " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
