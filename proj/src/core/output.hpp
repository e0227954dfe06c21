// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/mesoscopic.hpp"
#include "core/montecarlo.hpp"
#include "core/protocols.hpp"
#include "core/series.hpp"

namespace cavitas {

/// Header phi,t_us,P,P_stderr,P_upper,P_lower,flight_limit; 12 significant digits.
void emit_series(const RabiSeries& series, std::ostream& out);
void emit_series(const RabiSeries& series, const std::string& path);

/// Columns trajectory_id,jump_time,channel.
void write_jump_csv(const std::vector<JumpRecord>& records, std::ostream& out);

void write_schedule(const std::vector<RevivalEntry>& schedule, std::ostream& out);
void write_report(const ValidationReport& report, std::ostream& out);

struct RunManifest {
  ExperimentConfig config;
  std::string version;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};

std::string utc_timestamp();
std::string manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

const char* version();

}  // namespace cavitas
