// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "cavitas/cavitas.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/output.hpp"
#include "core/protocols.hpp"

struct cavitas_config {
  cavitas::ExperimentConfig cfg;
};

struct cavitas_series {
  cavitas::RabiSeries series;
};

struct cavitas_report {
  cavitas::ValidationReport report;
};

namespace {

thread_local std::string last_error;

cavitas_status status_of(cavitas::ErrorKind kind) {
  using cavitas::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidConfig: return CAVITAS_E_INVALID_CONFIG;
    case ErrorKind::Range: return CAVITAS_E_RANGE;
    case ErrorKind::Truncation: return CAVITAS_E_TRUNCATION;
    case ErrorKind::Precondition: return CAVITAS_E_PRECONDITION;
    case ErrorKind::Numerical: return CAVITAS_E_NUMERICAL;
    case ErrorKind::Io: return CAVITAS_E_IO;
  }
  return CAVITAS_E_INTERNAL;
}

template <class F>
cavitas_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return CAVITAS_OK;
  } catch (const cavitas::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CAVITAS_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CAVITAS_E_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return CAVITAS_E_INTERNAL;
  }
}

cavitas_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return CAVITAS_E_NULL_ARGUMENT;
}

template <class W>
void with_output(const char* path, W&& write) {
  if (std::strcmp(path, "-") == 0) {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) cavitas::fail(cavitas::ErrorKind::Io, "failed writing to standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) cavitas::fail(cavitas::ErrorKind::Io, std::string("cannot open '") + path + "' for writing");
  write(f);
  f.close();
  if (!f) cavitas::fail(cavitas::ErrorKind::Io, std::string("failed writing '") + path + "'");
}

}  // namespace

extern "C" {

const char* cavitas_version(void) { return cavitas::version(); }

const char* cavitas_last_error(void) { return last_error.c_str(); }

const char* cavitas_status_name(cavitas_status status) {
  switch (status) {
    case CAVITAS_OK: return "ok";
    case CAVITAS_E_INVALID_CONFIG: return "invalid-config";
    case CAVITAS_E_RANGE: return "range";
    case CAVITAS_E_TRUNCATION: return "truncation";
    case CAVITAS_E_PRECONDITION: return "precondition";
    case CAVITAS_E_NUMERICAL: return "numerical";
    case CAVITAS_E_IO: return "io";
    case CAVITAS_E_NULL_ARGUMENT: return "null-argument";
    case CAVITAS_E_INTERNAL: return "internal";
  }
  return "unknown";
}

cavitas_status cavitas_config_create(cavitas_config** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new cavitas_config(); });
}

void cavitas_config_destroy(cavitas_config* config) { delete config; }

cavitas_status cavitas_config_load_file(cavitas_config* config, const char* path) {
  if (config == nullptr) return null_argument("config");
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    std::ifstream in(path);
    if (!in) cavitas::fail(cavitas::ErrorKind::Io,
                           std::string("cannot read config file '") + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    cavitas::ExperimentConfig next = config->cfg;
    for (const auto& [k, v] : cavitas::parse_key_values(text, path))
      cavitas::apply_setting(next, k, v);
    config->cfg = next;
  });
}

cavitas_status cavitas_config_set(cavitas_config* config, const char* key, const char* value) {
  if (config == nullptr) return null_argument("config");
  if (key == nullptr || value == nullptr) return null_argument("key/value");
  return guarded([&] { cavitas::apply_setting(config->cfg, key, value); });
}

cavitas_status cavitas_config_get(const cavitas_config* config, const char* key, char* buf,
                                  size_t len) {
  if (config == nullptr) return null_argument("config");
  if (key == nullptr || buf == nullptr) return null_argument("key/buf");
  return guarded([&] {
    for (const auto& [k, v] : config->cfg.entries()) {
      if (k != key) continue;
      if (v.size() + 1 > len) cavitas::fail(cavitas::ErrorKind::Range, "buffer too small");
      std::memcpy(buf, v.c_str(), v.size() + 1);
      return;
    }
    cavitas::fail(cavitas::ErrorKind::InvalidConfig, std::string("key '") + key + "' is unset");
  });
}

cavitas_status cavitas_config_validate(const cavitas_config* config) {
  if (config == nullptr) return null_argument("config");
  return guarded([&] { config->cfg.validate(); });
}

cavitas_status cavitas_run(const cavitas_config* config, cavitas_series** out) {
  if (config == nullptr) return null_argument("config");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    config->cfg.validate();
    auto* s = new cavitas_series{cavitas::run_experiment(config->cfg)};
    *out = s;
  });
}

void cavitas_series_destroy(cavitas_series* series) { delete series; }

size_t cavitas_series_length(const cavitas_series* series) {
  return series == nullptr ? 0 : series->series.rows.size();
}

cavitas_status cavitas_series_row(const cavitas_series* series, size_t index, cavitas_row* out) {
  if (series == nullptr) return null_argument("series");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    if (index >= series->series.rows.size())
      cavitas::fail(cavitas::ErrorKind::Range, "row index out of range");
    const cavitas::RabiSample& r = series->series.rows[index];
    *out = cavitas_row{r.phi, r.t, r.p, r.p_stderr, r.p_upper, r.p_lower,
                       r.beyond_flight_limit ? 1 : 0};
  });
}

size_t cavitas_series_warning_count(const cavitas_series* series) {
  return series == nullptr ? 0 : series->series.warnings.size();
}

const char* cavitas_series_warning(const cavitas_series* series, size_t index) {
  if (series == nullptr || index >= series->series.warnings.size()) return nullptr;
  return series->series.warnings[index].c_str();
}

cavitas_status cavitas_series_write_csv(const cavitas_series* series, const char* path) {
  if (series == nullptr) return null_argument("series");
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    with_output(path, [&](std::ostream& os) { cavitas::emit_series(series->series, os); });
  });
}

cavitas_status cavitas_validate(const cavitas_config* config, cavitas_report** out) {
  if (config == nullptr) return null_argument("config");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new cavitas_report{cavitas::validate(config->cfg)}; });
}

void cavitas_report_destroy(cavitas_report* report) { delete report; }

int cavitas_report_passed(const cavitas_report* report) {
  return report != nullptr && report->report.passed() ? 1 : 0;
}

size_t cavitas_report_count(const cavitas_report* report) {
  return report == nullptr ? 0 : report->report.checks.size();
}

cavitas_status cavitas_report_check(const cavitas_report* report, size_t index, const char** name,
                                    int* passed, const char** measured) {
  if (report == nullptr) return null_argument("report");
  return guarded([&] {
    if (index >= report->report.checks.size())
      cavitas::fail(cavitas::ErrorKind::Range, "check index out of range");
    const cavitas::ValidationCheck& c = report->report.checks[index];
    if (name != nullptr) *name = c.name.c_str();
    if (passed != nullptr) *passed = c.passed ? 1 : 0;
    if (measured != nullptr) *measured = c.measured.c_str();
  });
}

cavitas_status cavitas_report_write(const cavitas_report* report, const char* path) {
  if (report == nullptr) return null_argument("report");
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    with_output(path, [&](std::ostream& os) { cavitas::write_report(report->report, os); });
  });
}

cavitas_status cavitas_schedule_write(int n_atoms, const char* path) {
  if (path == nullptr) return null_argument("path");
  return guarded([&] {
    const auto schedule = cavitas::revival_schedule(cavitas::SpinQuantum(n_atoms));
    with_output(path, [&](std::ostream& os) { cavitas::write_schedule(schedule, os); });
  });
}

cavitas_status cavitas_manifest_write(const cavitas_config* config, const cavitas_series* series,
                                      const char* started, const char* const* outputs,
                                      size_t n_outputs, const char* path) {
  if (config == nullptr) return null_argument("config");
  if (path == nullptr) return null_argument("path");
  if (n_outputs > 0 && outputs == nullptr) return null_argument("outputs");
  return guarded([&] {
    cavitas::RunManifest m{config->cfg, cavitas::version(), started ? started : "",
                           cavitas::utc_timestamp(), {}, {}};
    for (size_t k = 0; k < n_outputs; ++k) m.outputs.emplace_back(outputs[k]);
    if (series != nullptr) m.warnings = series->series.warnings;
    cavitas::write_manifest(m, path);
  });
}

const char* cavitas_utc_now(void) {
  static thread_local std::string stamp;
  stamp = cavitas::utc_timestamp();
  return stamp.c_str();
}

}  // extern "C"
