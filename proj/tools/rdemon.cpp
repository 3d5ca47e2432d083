// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: specification checking, offline monitoring,
// trip conversion, simulation, reports and the monitor service.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rdemon/engine/offline.hpp"
#include "rdemon/lang/errors.hpp"
#include "rdemon/lang/parser.hpp"
#include "rdemon/obd/convert.hpp"
#include "rdemon/rde/spec_builder.hpp"
#include "rdemon/rde/verdict.hpp"
#include "rdemon/reporting/report.hpp"
#include "rdemon/service/server.hpp"
#include "rdemon/service/ui_state.hpp"
#include "rdemon/sim/simulator.hpp"

using namespace rdemon;

namespace {

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout for "" and "-".
void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

rde::RdeParameters params_from(const std::string& path) {
  return path.empty() ? rde::RdeParameters{} : rde::load_parameters(path);
}

obd::ConversionOptions conversion_from(const std::string& coefficients) {
  obd::ConversionOptions o;
  if (!coefficients.empty()) o.coefficients = emissions::load_coefficients(coefficients);
  return o;
}

sim::DriveProfile profile_from(const std::string& name_or_path) {
  for (const auto& n : sim::builtin_profile_names()) {
    if (n == name_or_path) return sim::builtin_profile(n);
  }
  return sim::load_profile(name_or_path);
}

lang::TypedSpecification compile(const std::string& path) {
  return lang::typecheck(lang::parse(read_text(path)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rdemon: stream-based runtime verification of real driving emission trips"};
  app.require_subcommand(1);

  std::string spec_path, events_path, out_path, trip_path, params_path, coeff_path, profile_name, format;
  std::optional<double> end_time;
  std::optional<std::uint64_t> seed;

  auto* check = app.add_subcommand("check", "Parse and typecheck a specification");
  check->add_option("spec", spec_path, "Specification file")->required();

  auto* run = app.add_subcommand("run", "Monitor a CSV event stream offline, writing JSON lines");
  run->add_option("spec", spec_path, "Specification file")->required();
  run->add_option("events", events_path, "time,stream,value CSV ('-' for stdin)")->required();
  run->add_option("--end", end_time, "Advance time to this point after the last event");
  run->add_option("-o,--out", out_path, "Output file (default stdout)");

  auto* exp = app.add_subcommand("export-spec", "Print the generated RDE specification");
  exp->add_option("--params", params_path, "RDE parameter file");
  exp->add_option("-o,--out", out_path, "Output file (default stdout)");

  auto* events = app.add_subcommand("events", "Convert a CDP trip to engine events CSV");
  events->add_option("trip", trip_path, "CDP trip file")->required();
  events->add_option("--coefficients", coeff_path, "Emission coefficient file");
  events->add_option("-o,--out", out_path, "Output file (default stdout)");

  bool list_profiles = false;
  auto* simulate = app.add_subcommand("simulate", "Run a drive profile and write the CDP trip");
  simulate->add_option("--profile", profile_name, "Builtin profile name or profile file");
  simulate->add_option("--seed", seed, "Override the profile seed");
  simulate->add_option("-o,--out", out_path, "Output file (default stdout)");
  simulate->add_flag("--list", list_profiles, "List builtin profiles");

  auto* report = app.add_subcommand("report", "Per-segment distance and emission table of a trip");
  report->add_option("trip", trip_path, "CDP trip file")->required();
  format = "table";
  report->add_option("--format", format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  report->add_option("--params", params_path, "RDE parameter file");
  report->add_option("--coefficients", coeff_path, "Emission coefficient file");
  report->add_option("-o,--out", out_path, "Output file (default stdout)");

  std::string log_path;
  double every = 0.0;
  auto* replay = app.add_subcommand("replay", "Monitor a CDP trip with the RDE specification");
  replay->add_option("trip", trip_path, "CDP trip file")->required();
  replay->add_option("--params", params_path, "RDE parameter file");
  replay->add_option("--coefficients", coeff_path, "Emission coefficient file");
  replay->add_option("--log", log_path, "Write every monitor output as JSON lines");
  replay->add_option("--every", every, "Also print the verdict every N seconds")->check(CLI::NonNegativeNumber);

  std::vector<std::string> streams;
  std::optional<std::size_t> max_points;
  auto* series = app.add_subcommand("series", "Time series of trip or specification streams as JSON");
  series->add_option("trip", trip_path, "CDP trip file")->required();
  series->add_option("--streams", streams, "Stream names")->required()->delimiter(',');
  series->add_option("--max-points", max_points, "Downsample to at most this many points per stream");
  series->add_option("--params", params_path, "RDE parameter file");

  std::string address = "127.0.0.1", store_dir = "trips";
  unsigned short port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the monitor service (HTTP and WebSocket)");
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--port", port, "Listen port (0 picks one)");
  serve->add_option("--store", store_dir, "Trip store directory");
  serve->add_option("--params", params_path, "RDE parameter file");
  serve->add_option("--coefficients", coeff_path, "Emission coefficient file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      const auto typed = compile(spec_path);
      std::size_t outputs = typed.streams.size() - typed.input_count();
      std::cout << "ok: " << typed.input_count() << " inputs, " << outputs << " outputs, "
                << typed.spec.triggers.size() << " triggers\n";
      for (const auto& w : typed.warnings) std::cerr << "warning: " << w << '\n';
    } else if (*run) {
      auto spec = std::make_shared<const lang::TypedSpecification>(compile(spec_path));
      std::istringstream in(read_text(events_path));
      engine::Monitor monitor(spec, 0.0);
      std::vector<engine::Event> evs;
      std::size_t skipped = 0;
      for (auto& e : engine::read_event_csv(in)) {
        if (monitor.accepts(e.stream)) {
          evs.push_back(std::move(e));
        } else {
          ++skipped;
        }
      }
      if (skipped > 0) std::cerr << "skipped " << skipped << " events on undeclared streams\n";
      std::ostringstream out;
      engine::write_output_jsonl(out, engine::run_offline(monitor, evs, end_time));
      write_text(out_path, out.str());
    } else if (*exp) {
      write_text(out_path, rde::build_rde_spec(params_from(params_path)));
    } else if (*events) {
      const auto trip = obd::read_cdp(read_text(trip_path));
      std::ostringstream out;
      engine::write_event_csv(out, obd::to_engine_events(trip, conversion_from(coeff_path)));
      write_text(out_path, out.str());
    } else if (*simulate) {
      if (list_profiles) {
        for (const auto& n : sim::builtin_profile_names()) std::cout << n << '\n';
        return 0;
      }
      if (profile_name.empty()) throw std::runtime_error("--profile is required");
      auto profile = profile_from(profile_name);
      if (seed) profile.seed = *seed;
      write_text(out_path, obd::write_cdp(sim::run_profile(profile)));
    } else if (*report) {
      const auto trip = obd::read_cdp(read_text(trip_path));
      const auto table = reporting::segment_table(trip, params_from(params_path), conversion_from(coeff_path));
      if (format == "csv") {
        write_text(out_path, reporting::format_csv(table));
      } else if (format == "json") {
        write_text(out_path, reporting::to_json(table).dump(2) + "\n");
      } else {
        write_text(out_path, reporting::format_table(table));
      }
    } else if (*replay) {
      const auto params = params_from(params_path);
      const auto trip = obd::read_cdp(read_text(trip_path));
      const auto evs = obd::to_engine_events(trip, conversion_from(coeff_path));
      engine::Monitor monitor(rde::compile_rde_spec(params), 0.0);
      std::ofstream log;
      if (!log_path.empty()) {
        log.open(log_path, std::ios::binary | std::ios::trunc);
        if (!log) throw std::runtime_error("cannot write " + log_path);
      }
      double next_print = every;
      auto emit = [&](const std::vector<engine::MonitorOutput>& outs) {
        for (const auto& o : outs) {
          if (log.is_open()) log << engine::to_json_line(o) << '\n';
          if (o.is_trigger()) continue;
          if (every > 0.0 && o.time >= next_print) {
            const auto st = rde::stats_from_monitor(monitor);
            const auto v = rde::update_verdict(st, params);
            std::cout << "t=" << o.time << " km=" << st.total_km() << " verdict=" << rde::to_string(v.overall)
                      << (v.irrecoverable ? " (irrecoverable)" : "") << '\n';
            next_print += every;
          }
        }
      };
      for (const auto& e : evs) {
        if (monitor.accepts(e.stream)) emit(monitor.ingest(e));
      }
      if (!evs.empty()) emit(monitor.advance_time(evs.back().time));
      service::UiState s;
      s.mode = "replay";
      s.finished = true;
      s.t_s = monitor.current_time();
      if (const auto v = monitor.latest("velo_kmph")) {
        if (const auto* x = std::get_if<double>(&*v)) s.velo_kmph = *x;
      }
      s.stats = rde::stats_from_monitor(monitor);
      s.verdict = rde::update_verdict(s.stats, params);
      std::cout << service::to_json(s, params).dump(2) << '\n';
    } else if (*series) {
      const auto trip = obd::read_cdp(read_text(trip_path));
      const auto out = reporting::series(trip, streams, max_points, params_from(params_path));
      std::cout << reporting::to_json(out).dump() << '\n';
    } else if (*serve) {
      sigset_t set;
      sigemptyset(&set);
      sigaddset(&set, SIGINT);
      sigaddset(&set, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &set, nullptr);

      const auto params = params_from(params_path);
      service::TripStore store(store_dir, params);
      service::SessionConfig cfg;
      cfg.params = params;
      cfg.conversion = conversion_from(coeff_path);
      service::SessionManager sessions(store, cfg);
      service::Api api(sessions, store);
      service::Server server(api, address, port);
      server.start();
      std::cout << "listening on " << address << ':' << server.port() << ", trips in " << store_dir << std::endl;
      int sig = 0;
      sigwait(&set, &sig);
      server.stop();
    }
  } catch (const lang::SpecError& e) {
    std::cerr << spec_path << ':' << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
