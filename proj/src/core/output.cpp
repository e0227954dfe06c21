// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <json.hpp>
#include <ostream>

#include "core/error.hpp"

namespace cavitas {

const char* version() { return CAVITAS_VERSION; }

namespace {

void put(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  line += buf;
}

}  // namespace

void emit_series(const RabiSeries& series, std::ostream& out) {
  require(!series.rows.empty(), ErrorKind::Precondition, "refusing to write an empty series");
  out << "phi,t_us,P,P_stderr,P_upper,P_lower,flight_limit\n";
  std::string line;
  for (const RabiSample& r : series.rows) {
    line.clear();
    put(line, r.phi);
    line += ',';
    put(line, r.t);
    line += ',';
    put(line, r.p);
    line += ',';
    put(line, r.p_stderr);
    line += ',';
    put(line, r.p_upper);
    line += ',';
    put(line, r.p_lower);
    line += r.beyond_flight_limit ? ",1\n" : ",0\n";
    out << line;
  }
  if (!out) fail(ErrorKind::Io, "failed writing series");
}

void emit_series(const RabiSeries& series, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  emit_series(series, f);
  f.close();
  if (!f) fail(ErrorKind::Io, "failed writing '" + path + "'");
}

void write_jump_csv(const std::vector<JumpRecord>& records, std::ostream& out) {
  out << "trajectory_id,jump_time,channel\n";
  char buf[96];
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const JumpEvent& e : records[i].events()) {
      std::snprintf(buf, sizeof buf, "%zu,%.12g,%s\n", i, e.time, to_string(e.channel));
      out << buf;
    }
  }
  if (!out) fail(ErrorKind::Io, "failed writing jump records");
}

void write_schedule(const std::vector<RevivalEntry>& schedule, std::ostream& out) {
  out << "phi,phi_over_2pi,gcd,pairs,replica,separations\n";
  char buf[96];
  for (const RevivalEntry& r : schedule) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d,%d,%d,", r.phi, r.phi / (2.0 * std::numbers::pi), r.gcd,
                  r.pair_count, r.replica ? 1 : 0);
    out << buf;
    for (std::size_t k = 0; k < r.separations.size(); ++k)
      out << (k ? " " : "") << r.separations[k];
    out << '\n';
  }
}

void write_report(const ValidationReport& report, std::ostream& out) {
  for (const ValidationCheck& c : report.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.measured << '\n';
  out << (report.passed() ? "all checks passed\n" : "validation failed\n");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "cavitas";
  j["version"] = m.version;
  j["seed"] = m.config.seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.config.entries()) cfg[k] = v;
  j["config"] = cfg;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["outputs"] = m.outputs;
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  f << manifest_json(manifest);
  f.close();
  if (!f) fail(ErrorKind::Io, "failed writing '" + path + "'");
}

}  // namespace cavitas
