// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Exit codes: 0 success, 1 validation failure,
// 2 configuration error, 3 I/O error.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cavitas/cavitas.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

const std::vector<std::string> kKeys{
    "n_atoms", "nbar",         "g_over_gamma", "g_khz",     "n_th", "c",
    "cutoff",  "t_pi_us",      "gamma_tp",     "n0",        "trajectories",
    "phi_max", "phi_steps",    "seed",         "out",       "courant", "threads"};

struct Invocation {
  std::string mode;
  std::string config_file;
  std::map<std::string, std::string> values;
};

int exit_code(cavitas_status s) { return s == CAVITAS_E_IO ? kExitIo : kExitConfig; }

int report_failure(cavitas_status s, const char* context) {
  std::fprintf(stderr, "cavitas: %s: %s\n", context, cavitas_last_error());
  return exit_code(s);
}

struct ConfigDeleter {
  void operator()(cavitas_config* c) const { cavitas_config_destroy(c); }
};
struct SeriesDeleter {
  void operator()(cavitas_series* s) const { cavitas_series_destroy(s); }
};
struct ReportDeleter {
  void operator()(cavitas_report* r) const { cavitas_report_destroy(r); }
};

int execute(const Invocation& inv) {
  cavitas_config* raw = nullptr;
  if (cavitas_config_create(&raw) != CAVITAS_OK) return report_failure(CAVITAS_E_INTERNAL, "setup");
  std::unique_ptr<cavitas_config, ConfigDeleter> cfg(raw);

  cavitas_status s = CAVITAS_OK;
  if (!inv.config_file.empty()) {
    s = cavitas_config_load_file(cfg.get(), inv.config_file.c_str());
    if (s != CAVITAS_OK) return report_failure(s, "config");
  }
  if (const char* env = std::getenv("CAVITAS_SEED"); env != nullptr && *env != '\0') {
    s = cavitas_config_set(cfg.get(), "seed", env);
    if (s != CAVITAS_OK) return report_failure(s, "CAVITAS_SEED");
  }
  for (const auto& [k, v] : inv.values) {
    s = cavitas_config_set(cfg.get(), k.c_str(), v.c_str());
    if (s != CAVITAS_OK) return report_failure(s, ("--" + k).c_str());
  }
  s = cavitas_config_set(cfg.get(), "mode", inv.mode.c_str());
  if (s != CAVITAS_OK) return report_failure(s, "mode");
  s = cavitas_config_validate(cfg.get());
  if (s != CAVITAS_OK) return report_failure(s, "config");

  char out_buf[4096];
  std::string out = "-";
  if (cavitas_config_get(cfg.get(), "out", out_buf, sizeof out_buf) == CAVITAS_OK) out = out_buf;

  if (inv.mode == "schedule") {
    char n_buf[32];
    cavitas_config_get(cfg.get(), "n_atoms", n_buf, sizeof n_buf);
    s = cavitas_schedule_write(std::atoi(n_buf), out.c_str());
    return s == CAVITAS_OK ? 0 : report_failure(s, "schedule");
  }

  const std::string started = cavitas_utc_now();
  if (inv.mode == "validate") {
    cavitas_report* rep_raw = nullptr;
    s = cavitas_validate(cfg.get(), &rep_raw);
    if (s != CAVITAS_OK) return report_failure(s, "validate");
    std::unique_ptr<cavitas_report, ReportDeleter> rep(rep_raw);
    s = cavitas_report_write(rep.get(), "-");
    if (s != CAVITAS_OK) return report_failure(s, "report");
    if (out != "-") {
      s = cavitas_report_write(rep.get(), out.c_str());
      if (s != CAVITAS_OK) return report_failure(s, "report");
    }
    return cavitas_report_passed(rep.get()) ? 0 : kExitValidation;
  }

  cavitas_series* ser_raw = nullptr;
  s = cavitas_run(cfg.get(), &ser_raw);
  if (s != CAVITAS_OK) return report_failure(s, inv.mode.c_str());
  std::unique_ptr<cavitas_series, SeriesDeleter> series(ser_raw);
  for (size_t k = 0; k < cavitas_series_warning_count(series.get()); ++k)
    std::fprintf(stderr, "cavitas: warning: %s\n", cavitas_series_warning(series.get(), k));
  s = cavitas_series_write_csv(series.get(), out.c_str());
  if (s != CAVITAS_OK) return report_failure(s, "output");
  if (out != "-") {
    const std::string manifest = out + ".manifest.json";
    const char* outputs[] = {out.c_str()};
    s = cavitas_manifest_write(cfg.get(), series.get(), started.c_str(), outputs, 1,
                               manifest.c_str());
    if (s != CAVITAS_OK) return report_failure(s, "manifest");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavitas: atoms in a mesoscopic cavity field"};
  app.set_version_flag("--version", std::string(cavitas_version()));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"spontaneous", "spontaneous collapse and revival"},
      {"echo", "echo pulse at t_pi_us and the induced revival"},
      {"thermal", "thermal preparation followed by the coupled run"},
      {"envelopes", "analytic signal and envelopes only"},
      {"validate", "self-checks; exits 1 on failure"},
      {"schedule", "revival schedule table"}};

  Invocation inv;
  std::map<std::string, std::string> raw;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config_file, "flat key=value config file");
    for (const std::string& key : kKeys) sub->add_option("--" + key, raw[key]);
    sub->callback([&inv, name = name] { inv.mode = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    for (const std::string& key : kKeys)
      if (sub->count("--" + key) > 0) inv.values[key] = raw[key];
  }
  return execute(inv);
}
