// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rdemon/engine/monitor.hpp"
#include "rdemon/lang/parser.hpp"
#include "rdemon/lang/printer.hpp"
#include "rdemon/lang/typecheck.hpp"

namespace rdemon::testing {

struct OracleTally {
  long comparisons = 0;
  long mismatches = 0;
  std::string first_failure;
};

// Brute-force aggregate straight from the full history, no incremental state.
inline std::optional<double> naive_aggregate(const std::vector<std::pair<double, double>>& history, double now,
                                             double duration, const std::string& fn) {
  std::vector<std::pair<double, double>> in;
  for (const auto& s : history) {
    if (s.first > now - duration && s.first <= now) in.push_back(s);
  }
  if (in.empty()) return std::nullopt;
  if (fn == "count") return static_cast<double>(in.size());
  if (fn == "sum" || fn == "avg") {
    double s = 0.0;
    for (const auto& x : in) s += x.second;
    return fn == "sum" ? s : s / static_cast<double>(in.size());
  }
  if (fn == "min" || fn == "max") {
    double m = in.front().second;
    for (const auto& x : in) m = fn == "min" ? std::min(m, x.second) : std::max(m, x.second);
    return m;
  }
  if (fn == "integral") {
    double a = 0.0;
    for (std::size_t i = 1; i < in.size(); ++i) {
      a += (in[i].first - in[i - 1].first) * (in[i].second + in[i - 1].second) / 2.0;
    }
    return a;
  }
  // pctl(p), nearest rank
  const double p = std::stod(fn.substr(5));
  std::vector<double> v;
  for (const auto& x : in) v.push_back(x.second);
  std::sort(v.begin(), v.end());
  auto k = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
  k = std::clamp<std::size_t>(k, 1, v.size());
  return v[k - 1];
}

inline bool close_enough(double got, double want, bool exact) {
  if (exact) return got == want;
  const double scale = std::max({std::abs(got), std::abs(want), 1.0});
  return std::abs(got - want) <= 1e-9 * scale;
}

// Runs one random stream through a monitor carrying one window per
// aggregation function and checks every deadline against naive_aggregate.
inline void check_random_stream(std::uint64_t seed, OracleTally& tally) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double duration = std::floor(unit(rng) * 40.0 + 1.0) / (unit(rng) < 0.3 ? 2.0 : 1.0);
  const double hz = unit(rng) < 0.7 ? 1.0 : 4.0;
  const std::vector<std::string> fns = {"count", "sum", "avg", "min", "max", "integral", "pctl(95)",
                                        "pctl(50)", "pctl(12.5)"};

  std::string src = "input x: Float64\n";
  for (std::size_t i = 0; i < fns.size(); ++i) {
    src += "output w" + std::to_string(i) + " @" + lang::format_number(hz) + "Hz := x.aggregate(over: " +
           lang::format_number(duration) + ", using: " + fns[i] + ")\n";
  }
  auto typed = std::make_shared<const lang::TypedSpecification>(lang::typecheck(lang::parse(src)));
  engine::Monitor monitor(typed, 0.0);

  std::vector<std::pair<double, double>> history;
  auto check = [&](const std::vector<engine::MonitorOutput>& outs) {
    // Every deadline produces one value per window unless the window is empty.
    for (const auto& o : outs) {
      const auto& sv = std::get<engine::StreamValue>(o.kind);
      const auto idx = static_cast<std::size_t>(std::stoi(sv.name.substr(1)));
      const auto want = naive_aggregate(history, o.time, duration, fns[idx]);
      ++tally.comparisons;
      const bool exact = fns[idx] != "sum" && fns[idx] != "avg" && fns[idx] != "integral";
      if (!want || !close_enough(std::get<double>(sv.value), *want, exact)) {
        ++tally.mismatches;
        if (tally.first_failure.empty()) {
          tally.first_failure = "seed " + std::to_string(seed) + " " + fns[idx] + " at t=" +
                                lang::format_number(o.time);
        }
      }
    }
  };
  auto check_absent = [&](double from, double to, const std::vector<engine::MonitorOutput>& outs) {
    // Deadlines in (from, to] with an empty window must produce nothing.
    for (long k = static_cast<long>(std::floor(from * hz)) + 1; static_cast<double>(k) / hz <= to; ++k) {
      const double d = static_cast<double>(k) / hz;
      if (d <= from) continue;
      const bool empty = !naive_aggregate(history, d, duration, "count");
      const auto n = std::count_if(outs.begin(), outs.end(), [&](const auto& o) { return o.time == d; });
      ++tally.comparisons;
      if (empty != (n == 0) || (!empty && n != static_cast<long>(fns.size()))) {
        ++tally.mismatches;
        if (tally.first_failure.empty()) {
          tally.first_failure = "seed " + std::to_string(seed) + " presence at t=" + lang::format_number(d);
        }
      }
    }
  };

  double t = 0.0;
  const int n_events = 20 + static_cast<int>(unit(rng) * 180.0);
  for (int i = 0; i < n_events; ++i) {
    const double r = unit(rng);
    // Mix of gaps: duplicates, grid-aligned, sub-second and long pauses.
    if (r < 0.1) {
    } else if (r < 0.3) {
      t = std::floor(t) + 1.0;
    } else if (r < 0.9) {
      t += std::floor(unit(rng) * 16.0) / 8.0;
    } else {
      t += unit(rng) * duration * 1.5;
    }
    const double value = unit(rng) < 0.5 ? std::floor(unit(rng) * 10.0) : unit(rng) * 200.0 - 100.0;
    const double before = monitor.current_time();
    auto outs = monitor.ingest(engine::Event{t, "x", value});
    check(outs);
    check_absent(before, std::nextafter(t, -1.0), outs);
    history.emplace_back(t, value);
  }
  const double before = monitor.current_time();
  const double end = t + duration + 2.0;
  auto outs = monitor.advance_time(end);
  check(outs);
  check_absent(before, end, outs);
}

}  // namespace rdemon::testing
