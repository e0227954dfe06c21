// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "core/error.hpp"

namespace cavitas {

const char* to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Spontaneous: return "spontaneous";
    case Mode::Echo: return "echo";
    case Mode::Thermal: return "thermal";
    case Mode::Envelopes: return "envelopes";
    case Mode::Validate: return "validate";
    case Mode::Schedule: return "schedule";
  }
  return "spontaneous";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::Spontaneous, Mode::Echo, Mode::Thermal, Mode::Envelopes, Mode::Validate,
                 Mode::Schedule})
    if (text == to_string(m)) return m;
  fail(ErrorKind::InvalidConfig, "key 'mode': unknown mode '" + text + "'");
}

double ExperimentConfig::g() const { return 2.0 * std::numbers::pi * g_khz * 1e-3; }

double ExperimentConfig::gamma() const {
  return std::isinf(g_over_gamma) ? 0.0 : g() / g_over_gamma;
}

BathParams ExperimentConfig::bath() const {
  return BathParams{gamma(), mode == Mode::Thermal ? thermal_occupation() : n_th};
}

double ExperimentConfig::echo_time_us() const { return t_pi_us.value_or(30.0); }

double ExperimentConfig::prep_time_us() const {
  require(gamma() > 0, ErrorKind::InvalidConfig,
          "key 'g_over_gamma': thermal preparation needs a finite value");
  return gamma_tp / gamma();
}

double ExperimentConfig::thermal_occupation() const {
  if (n_th > 0 || !n0) return n_th;
  return *n0 / -std::expm1(-gamma_tp);
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const char* key, const std::string& why) {
    if (!ok) fail(ErrorKind::InvalidConfig, std::string("key '") + key + "': " + why);
  };
  check(n_atoms >= 1 && n_atoms <= kMaxRotationAtoms, "n_atoms",
        "must lie in [1, " + std::to_string(kMaxRotationAtoms) + "]");
  check(nbar > 0 && std::isfinite(nbar), "nbar", "must be positive");
  check(g_over_gamma > 0 && !std::isnan(g_over_gamma), "g_over_gamma", "must be positive or inf");
  check(g_khz > 0 && std::isfinite(g_khz), "g_khz", "must be positive");
  check(n_th >= 0 && std::isfinite(n_th), "n_th", "must be non-negative");
  if (c) check(*c >= 0 && *c <= n_atoms + 1, "c", "must lie in [0, n_atoms+1]");
  if (cutoff) check(*cutoff >= 1, "cutoff", "must be at least 1");
  if (t_pi_us) check(*t_pi_us > 0 && std::isfinite(*t_pi_us), "t_pi_us", "must be positive");
  check(gamma_tp > 0 && std::isfinite(gamma_tp), "gamma_tp", "must be positive");
  if (n0) check(*n0 >= 0 && std::isfinite(*n0), "n0", "must be non-negative");
  check(trajectories >= 1, "trajectories", "must be at least 1");
  check(phi_max > 0 && std::isfinite(phi_max), "phi_max", "must be positive");
  check(phi_steps >= 1, "phi_steps", "must be at least 1");
  check(courant > 0 && courant <= 0.05, "courant", "must lie in (0, 0.05]");
  check(threads >= 0, "threads", "must be non-negative");
  if (mode == Mode::Thermal) {
    check(gamma() > 0, "g_over_gamma", "thermal mode needs a finite value");
    const double nth = thermal_occupation();
    check(nth > 0, "n_th", "thermal mode needs n_th > 0 or n0 > 0");
    if (n0 && n_th > 0) {
      const double implied = n_th * -std::expm1(-gamma_tp);
      check(std::abs(implied - *n0) <= 0.02, "n0",
            "inconsistent with n_th*(1-exp(-gamma_tp)) = " + std::to_string(implied));
    }
  }
}

namespace {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, bool allow_inf = false) {
  if (allow_inf && (v == "inf" || v == "infinity" || v == "Inf"))
    return std::numeric_limits<double>::infinity();
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    fail(ErrorKind::InvalidConfig, "key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    fail(ErrorKind::InvalidConfig, "key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("mode", to_string(mode));
  e.emplace_back("n_atoms", std::to_string(n_atoms));
  e.emplace_back("nbar", format_double(nbar));
  e.emplace_back("g_over_gamma", format_double(g_over_gamma));
  e.emplace_back("g_khz", format_double(g_khz));
  e.emplace_back("n_th", format_double(n_th));
  if (c) e.emplace_back("c", format_double(*c));
  if (cutoff) e.emplace_back("cutoff", std::to_string(*cutoff));
  if (t_pi_us) e.emplace_back("t_pi_us", format_double(*t_pi_us));
  e.emplace_back("gamma_tp", format_double(gamma_tp));
  if (n0) e.emplace_back("n0", format_double(*n0));
  e.emplace_back("trajectories", std::to_string(trajectories));
  e.emplace_back("phi_max", format_double(phi_max));
  e.emplace_back("phi_steps", std::to_string(phi_steps));
  e.emplace_back("seed", std::to_string(seed));
  if (!out.empty()) e.emplace_back("out", out);
  e.emplace_back("courant", format_double(courant));
  e.emplace_back("threads", std::to_string(threads));
  return e;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "mode", "n_atoms", "nbar", "g_over_gamma", "g_khz", "n_th", "c", "cutoff", "t_pi_us",
      "gamma_tp", "n0", "trajectories", "phi_max", "phi_steps", "seed", "out", "courant",
      "threads"};
  return keys;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text,
                                                                  const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    // several pairs may share a line
    std::istringstream words(line);
    std::string word;
    while (words >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos || eq == 0)
        fail(ErrorKind::InvalidConfig,
             origin + ":" + std::to_string(lineno) + ": expected key=value, got '" + word + "'");
      out.emplace_back(word.substr(0, eq), word.substr(eq + 1));
    }
  }
  return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "mode") cfg.mode = parse_mode(v);
  else if (key == "n_atoms") cfg.n_atoms = to_int<int>(key, v);
  else if (key == "nbar") cfg.nbar = to_double(key, v);
  else if (key == "g_over_gamma") cfg.g_over_gamma = to_double(key, v, true);
  else if (key == "g_khz") cfg.g_khz = to_double(key, v);
  else if (key == "n_th") cfg.n_th = to_double(key, v);
  else if (key == "c") cfg.c = to_double(key, v);
  else if (key == "cutoff") cfg.cutoff = to_int<int>(key, v);
  else if (key == "t_pi_us") cfg.t_pi_us = to_double(key, v);
  else if (key == "gamma_tp") cfg.gamma_tp = to_double(key, v);
  else if (key == "n0") cfg.n0 = to_double(key, v);
  else if (key == "trajectories") cfg.trajectories = to_int<long>(key, v);
  else if (key == "phi_max") cfg.phi_max = to_double(key, v);
  else if (key == "phi_steps") cfg.phi_steps = to_int<int>(key, v);
  else if (key == "seed") cfg.seed = to_int<std::uint64_t>(key, v);
  else if (key == "out") cfg.out = v;
  else if (key == "courant") cfg.courant = to_double(key, v);
  else if (key == "threads") cfg.threads = to_int<int>(key, v);
  else fail(ErrorKind::InvalidConfig, "unknown key '" + key + "'");
}

ExperimentConfig parse_config(const ConfigSources& sources) {
  ExperimentConfig cfg;
  if (sources.file) {
    std::ifstream in(*sources.file);
    if (!in) fail(ErrorKind::Io, "cannot read config file '" + *sources.file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    for (const auto& [k, v] : parse_key_values(buf.str(), *sources.file)) apply_setting(cfg, k, v);
  }
  if (sources.env_seed && !sources.env_seed->empty())
    apply_setting(cfg, "seed", *sources.env_seed);
  for (const auto& [k, v] : sources.overrides) apply_setting(cfg, k, v);
  cfg.validate();
  return cfg;
}

}  // namespace cavitas
