// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/service/ui_state.hpp"

namespace rdemon::service {

namespace {

using Json = nlohmann::ordered_json;

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

}  // namespace

Json to_json(const UiState& s, const rde::RdeParameters& p) {
  const auto& v = s.verdict;
  Json j;
  j["type"] = "state";
  j["session"] = s.session;
  j["mode"] = s.mode;
  j["finished"] = s.finished;
  j["t_s"] = s.t_s;
  j["velo_kmph"] = opt(s.velo_kmph);
  j["target_kmph"] = opt(s.target_kmph);
  j["duration"] = {{"elapsed_s", s.stats.elapsed_s}, {"min_s", p.duration_min_s}, {"max_s", p.duration_max_s}};
  j["total_distance_km"] = s.stats.total_km();
  j["expected_trip_km"] = p.expected_trip_km;
  j["verdict"] = std::string(rde::to_string(v.overall));
  j["irrecoverable"] = v.irrecoverable;
  j["nox"] = {{"mg_per_km", opt(v.nox_mg_per_km)}, {"limit", p.nox_limit_mg_per_km}, {"over_limit", v.nox_over_limit}};

  Json segs = Json::array();
  for (rde::SegmentClass seg : rde::kSegments) {
    const std::string name(rde::to_string(seg));
    const auto& st = s.stats.segment(seg);
    const auto* share = v.find(name + "_share");
    const auto* dyn = v.find(name + "_dynamics");
    const auto* rpa = v.find(name + "_rpa");
    Json e;
    e["segment"] = name;
    e["distance_km"] = st.distance_km;
    e["share_pct"] = s.stats.share_pct(seg);
    e["share_lo_pct"] = share ? opt(share->lo) : Json();
    e["share_hi_pct"] = share ? opt(share->hi) : Json();
    e["avg_velocity_kmph"] = st.avg_velocity_kmph;
    e["dynamics_p95"] = st.dynamics_p95;
    e["dynamics_threshold"] = dyn ? opt(dyn->hi) : Json();
    e["rpa"] = opt(st.rpa);
    e["rpa_threshold"] = rpa ? opt(rpa->lo) : Json();
    segs.push_back(std::move(e));
  }
  j["segments"] = std::move(segs);

  Json cons = Json::array();
  for (const auto& c : v.constraints) {
    cons.push_back({{"id", c.id},
                    {"description", c.description},
                    {"status", std::string(rde::to_string(c.status))},
                    {"value", opt(c.value)},
                    {"lo", opt(c.lo)},
                    {"hi", opt(c.hi)}});
  }
  j["constraints"] = std::move(cons);

  Json trig = Json::array();
  for (const auto& r : s.recent_triggers) trig.push_back({{"t", r.t}, {"message", r.message}});
  j["triggers"] = std::move(trig);
  return j;
}

Json to_json(const TriggerRecord& r) {
  Json j;
  j["type"] = "trigger";
  j["t"] = r.t;
  j["trigger"] = r.trigger;
  j["message"] = r.message;
  return j;
}

}  // namespace rdemon::service
