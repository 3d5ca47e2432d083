// Copyright 2026 The rdemon Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdemon/service/trip_store.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rdemon/reporting/report.hpp"
#include "rdemon/service/errors.hpp"

namespace rdemon::service {

namespace fs = std::filesystem;

namespace {

bool valid_id(const std::string& id) {
  return id.size() == 64 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write-then-rename so readers never see partial files.
void write_file(const fs::path& p, const std::string& text) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, p);
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0x0F]);
  }
  return out;
}

TripStore::TripStore(fs::path dir, rde::RdeParameters params) : dir_(std::move(dir)), params_(std::move(params)) {
  fs::create_directories(dir_);
}

fs::path TripStore::trip_path(const std::string& id) const { return dir_ / (id + ".cdp.json"); }
fs::path TripStore::report_path(const std::string& id) const { return dir_ / (id + ".report.json"); }

TripStore::PutResult TripStore::put(const obd::CdpTrip& trip) {
  const auto text = obd::write_cdp(trip);
  PutResult r{sha256_hex(text), false};
  std::lock_guard lock(mu_);
  if (fs::exists(trip_path(r.id)) && fs::exists(report_path(r.id))) return r;
  nlohmann::json report;
  try {
    report = reporting::to_json(reporting::segment_table(trip, params_));
  } catch (const std::exception& e) {
    report = {{"error", e.what()}};
  }
  report["trip_id"] = r.id;
  write_file(trip_path(r.id), text);
  write_file(report_path(r.id), report.dump(2) + "\n");
  r.created = true;
  return r;
}

TripStore::PutResult TripStore::put_text(std::string_view cdp_text) {
  obd::CdpTrip trip;
  try {
    trip = obd::read_cdp(cdp_text);
  } catch (const obd::CdpError& e) {
    throw SchemaError(e.what());
  }
  return put(trip);
}

bool TripStore::contains(const std::string& id) const {
  std::lock_guard lock(mu_);
  return valid_id(id) && fs::exists(trip_path(id));
}

std::string TripStore::canonical_text(const std::string& id) const {
  std::lock_guard lock(mu_);
  if (!valid_id(id) || !fs::exists(trip_path(id))) throw UnknownTrip(id);
  return read_file(trip_path(id));
}

obd::CdpTrip TripStore::get(const std::string& id) const { return obd::read_cdp(canonical_text(id)); }

nlohmann::json TripStore::report(const std::string& id) const {
  std::lock_guard lock(mu_);
  if (!valid_id(id) || !fs::exists(report_path(id))) throw UnknownTrip(id);
  return nlohmann::json::parse(read_file(report_path(id)));
}

std::vector<std::string> TripStore::list() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    const std::string suffix = ".cdp.json";
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      auto id = name.substr(0, name.size() - suffix.size());
      if (valid_id(id)) ids.push_back(std::move(id));
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace rdemon::service
