// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rdemon/obd/cdp.hpp"
#include "rdemon/rde/params.hpp"

namespace rdemon::service {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Directory of canonical CDP files `<id>.cdp.json` with report sidecars
/// `<id>.report.json`. The id is the SHA-256 of the canonical bytes, so
/// storing the same trip twice is a no-op.
class TripStore {
 public:
  explicit TripStore(std::filesystem::path dir, rde::RdeParameters params = {});

  struct PutResult {
    std::string id;
    bool created = false;
  };

  PutResult put(const obd::CdpTrip& trip);

  /// Parses CDP text; malformed input throws SchemaError.
  PutResult put_text(std::string_view cdp_text);

  bool contains(const std::string& id) const;
  obd::CdpTrip get(const std::string& id) const;
  std::string canonical_text(const std::string& id) const;

  /// Segment table JSON, or {"error": ...} for trips that cannot be
  /// reported. Throws UnknownTrip.
  nlohmann::json report(const std::string& id) const;

  std::vector<std::string> list() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path trip_path(const std::string& id) const;
  std::filesystem::path report_path(const std::string& id) const;

  std::filesystem::path dir_;
  rde::RdeParameters params_;
  mutable std::mutex mu_;
};

}  // namespace rdemon::service
