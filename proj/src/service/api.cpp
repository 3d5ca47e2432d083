// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/service/api.hpp"

#include <charconv>
#include <map>
#include <vector>

#include "rdemon/reporting/report.hpp"
#include "rdemon/service/errors.hpp"
#include "rdemon/sim/profile.hpp"

namespace rdemon::service {

namespace {

using nlohmann::json;

HttpResponse reply(int status, const json& body) { return HttpResponse{status, body.dump() + "\n"}; }

HttpResponse error(int status, const std::string& code, const std::string& message) {
  return reply(status, {{"error", code}, {"message", message}});
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out.push_back(' ');
    } else if (s[i] == '%' && i + 2 < s.size() && hex_value(s[i + 1]) >= 0 && hex_value(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(s[i + 1]) * 16 + hex_value(s[i + 2])));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::map<std::string, std::string> parse_query(std::string_view q) {
  std::map<std::string, std::string> out;
  while (!q.empty()) {
    const auto amp = q.find('&');
    const auto pair = q.substr(0, amp);
    const auto eq = pair.find('=');
    out[url_decode(pair.substr(0, eq))] = eq == std::string_view::npos ? "" : url_decode(pair.substr(eq + 1));
    if (amp == std::string_view::npos) break;
    q.remove_prefix(amp + 1);
  }
  return out;
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body.begin(), body.end());
  } catch (const json::exception& e) {
    throw BadRequest(std::string("malformed JSON body: ") + e.what());
  }
}

HttpResponse method_not_allowed() { return error(405, "MethodNotAllowed", "method not allowed"); }

}  // namespace

std::optional<std::string> Api::live_session(std::string_view target) {
  const auto path = target.substr(0, target.find('?'));
  const auto parts = split_path(path);
  if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "live") return std::string(parts[1]);
  return std::nullopt;
}

HttpResponse Api::handle(std::string_view method, std::string_view target, std::string_view body) {
  const auto q = target.find('?');
  const auto path = target.substr(0, q);
  const auto query = q == std::string_view::npos ? std::string_view() : target.substr(q + 1);
  try {
    if (method == "OPTIONS") return HttpResponse{204, "", "text/plain"};
    return route(method, path, query, body);
  } catch (const ServiceError& e) {
    return error(e.status(), e.code(), e.what());
  } catch (const reporting::UnknownStream& e) {
    return error(400, "UnknownStream", e.what());
  } catch (const std::exception& e) {
    return error(500, "Internal", e.what());
  }
}

HttpResponse Api::route(std::string_view method, std::string_view path, std::string_view query,
                        std::string_view body) {
  const auto parts = split_path(path);
  const bool get = method == "GET";
  const bool post = method == "POST";

  if (parts.size() == 1 && parts[0] == "health") return get ? reply(200, {{"status", "ok"}}) : method_not_allowed();

  if (parts.size() == 1 && parts[0] == "profiles") {
    return get ? reply(200, {{"profiles", sim::builtin_profile_names()}}) : method_not_allowed();
  }

  if (!parts.empty() && parts[0] == "sessions") {
    if (parts.size() == 1) {
      if (get) return reply(200, sessions_.describe());
      if (!post) return method_not_allowed();
      const auto id = sessions_.start(parse_body(body));
      return reply(201, {{"session", id}, {"state", json::parse(sessions_.state(id)->dump())}});
    }
    const std::string id(parts[1]);
    if (parts.size() == 2) {
      return method == "DELETE" ? reply(200, sessions_.stop(id)) : method_not_allowed();
    }
    if (parts.size() == 3 && parts[2] == "state") {
      return get ? HttpResponse{200, sessions_.state(id)->dump() + "\n"} : method_not_allowed();
    }
    if (parts.size() == 3 && parts[2] == "control") {
      return post ? reply(200, sessions_.control(id, parse_body(body))) : method_not_allowed();
    }
    if (parts.size() == 3 && parts[2] == "live") {
      sessions_.state(id);
      return error(426, "UpgradeRequired", "the live channel is a WebSocket endpoint");
    }
  }

  if (!parts.empty() && parts[0] == "trips") {
    if (parts.size() == 1) {
      if (get) return reply(200, {{"trips", store_.list()}});
      if (!post) return method_not_allowed();
      const auto r = store_.put_text(body);
      return reply(r.created ? 201 : 200, {{"trip_id", r.id}, {"created", r.created}});
    }
    const std::string id(parts[1]);
    if (parts.size() == 2) {
      return get ? HttpResponse{200, store_.canonical_text(id)} : method_not_allowed();
    }
    if (parts.size() == 3 && parts[2] == "report") {
      if (!get) return method_not_allowed();
      auto report = store_.report(id);
      if (report.contains("error")) return error(422, "NotReportable", report["error"].get<std::string>());
      return reply(200, report);
    }
    if (parts.size() == 3 && parts[2] == "series") {
      if (!get) return method_not_allowed();
      const auto params = parse_query(query);
      std::vector<std::string> streams;
      if (auto it = params.find("streams"); it != params.end()) {
        std::string_view s = it->second;
        while (!s.empty()) {
          const auto comma = s.find(',');
          if (comma != 0) streams.emplace_back(s.substr(0, comma));
          if (comma == std::string_view::npos) break;
          s.remove_prefix(comma + 1);
        }
      }
      if (streams.empty()) throw BadRequest("streams query parameter is required");
      std::optional<std::size_t> max_points;
      if (auto it = params.find("max_points"); it != params.end()) {
        std::size_t n = 0;
        const auto& v = it->second;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
        if (ec != std::errc{} || p != v.data() + v.size()) throw BadRequest("max_points must be a non-negative integer");
        max_points = n;
      }
      const auto trip = store_.get(id);
      return reply(200, {{"trip_id", id},
                         {"series", reporting::to_json(reporting::series(trip, streams, max_points,
                                                                         sessions_.config().params,
                                                                         sessions_.config().conversion))}});
    }
  }
  return error(404, "NotFound", "no route for " + std::string(path));
}

}  // namespace rdemon::service
