// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/exact_dynamics.hpp"

namespace cavitas {

const char* to_string(JumpChannel channel) noexcept {
  return channel == JumpChannel::Emit ? "emit" : "absorb";
}

void JumpRecord::push(double time, JumpChannel channel) {
  require(events_.empty() || time > events_.back().time, ErrorKind::Numerical,
          "jump times must be strictly increasing");
  events_.push_back({time, channel});
}

long JumpRecord::count(JumpChannel channel) const {
  return long(std::count_if(events_.begin(), events_.end(),
                            [&](const JumpEvent& e) { return e.channel == channel; }));
}

void TrajectoryPlan::validate() const {
  model.bath.validate();
  require(model.g >= 0 && std::isfinite(model.g), ErrorKind::InvalidConfig,
          "coupling must be finite and non-negative");
  require(prep_duration >= 0, ErrorKind::InvalidConfig, "preparation time must be non-negative");
  require(!times.empty(), ErrorKind::InvalidConfig, "trajectory needs at least one sample time");
  require(times.front() >= 0, ErrorKind::InvalidConfig, "sample times must be non-negative");
  for (std::size_t k = 1; k < times.size(); ++k)
    require(times[k] > times[k - 1], ErrorKind::InvalidConfig,
            "sample times must be strictly increasing");
  require(dt >= 0, ErrorKind::InvalidConfig, "time step must be non-negative");
  if (echo_time) require(*echo_time >= 0, ErrorKind::InvalidConfig, "echo time must be non-negative");
}

Observable top_population_observable() {
  return {"P_top", 1, [](const SampleView& v, double* out) {
            const int L = v.cutoff.levels();
            out[0] = v.psi.segment(Eigen::Index(v.spin.atoms()) * L, L).squaredNorm();
          }};
}

Observable populations_observable(const SpinQuantum& spin) {
  return {"populations", spin.dimension(), [](const SampleView& v, double* out) {
            const int L = v.cutoff.levels();
            for (int i = 0; i < v.spin.dimension(); ++i)
              out[i] = v.psi.segment(Eigen::Index(i) * L, L).squaredNorm();
          }};
}

Observable photon_number_observable() {
  return {"photons", 1, [](const SampleView& v, double* out) {
            const int L = v.cutoff.levels();
            double acc = 0;
            for (Eigen::Index k = 0; k < v.psi.size(); ++k)
              acc += double(k % L) * std::norm(v.psi[k]);
            out[0] = acc;
          }};
}

Observable jump_count_observable() {
  return {"jumps", 2, [](const SampleView& v, double* out) {
            out[0] = double(v.jumps.count(JumpChannel::Emit));
            out[1] = double(v.jumps.count(JumpChannel::Absorb));
          }};
}

Observable jump_phase_observable(double theta) {
  return {"jump_phase", 2, [theta](const SampleView& v, double* out) {
            const double a = theta * double(v.jumps.count(JumpChannel::Emit));
            out[0] = std::cos(a);
            out[1] = std::sin(a);
          }};
}

Observable pair_phase_observable(int q, double g, double nbar, std::optional<double> echo_time) {
  const double rate = g / (2.0 * std::sqrt(nbar));
  return {"pair_phase", 2, [q, rate, echo_time](const SampleView& v, double* out) {
            double total = 0;
            for (const JumpEvent& e : v.jumps.events()) {
              if (e.channel != JumpChannel::Emit) continue;
              const double t = e.time - v.coupling_start;
              if (t < 0) continue;
              const double tau = (echo_time && t > *echo_time) ? 2.0 * *echo_time - t : t;
              total += q * rate * tau;
            }
            out[0] = std::cos(total);
            out[1] = std::sin(total);
          }};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double unit_draw(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

TrajectoryResult mc_trajectory(const JointState& initial, const TrajectoryPlan& plan,
                               const Observable& obs, std::uint64_t seed) {
  plan.validate();
  const CavityModel& m = plan.model;
  require(initial.spin() == m.spin && initial.cutoff() == m.cutoff, ErrorKind::InvalidConfig,
          "initial state does not match the trajectory model");
  const CavityGenerator main(m.spin, m.cutoff, m.g, m.bath.emit_rate(), m.bath.absorb_rate());
  const double dt = plan.dt > 0 ? plan.dt : max_stable_step(main, plan.courant);
  check_step(main, dt);

  std::mt19937_64 rng(seed);
  TrajectoryResult res;
  JumpHooks hooks;
  hooks.threshold = [&rng] { return 1.0 - unit_draw(rng); };
  hooks.jump = [&](double t, Eigen::VectorXcd& psi) {
    const double we = main.emission_weight(psi);
    const double wa = main.absorption_weight(psi);
    if (we + wa > 0) {
      if (unit_draw(rng) * (we + wa) < we) {
        main.emit(psi);
        res.jumps.push(t, JumpChannel::Emit);
      } else {
        main.absorb(psi);
        res.jumps.push(t, JumpChannel::Absorb);
      }
    }
    psi.normalize();
  };

  const double offset = plan.prep_duration;
  const CavityGenerator prep(m.spin, m.cutoff, 0.0, m.bath.emit_rate(), m.bath.absorb_rate());
  Evolution evo(offset > 0 ? prep : main, initial.amplitudes(), 0.0,
                offset > 0 ? max_stable_step(prep, plan.courant) : dt);
  evo.arm(&hooks);
  if (offset > 0) {
    evo.advance_to(offset);
    evo.renormalize();
    evo.switch_generator(main, dt);
  }

  std::vector<double> times(plan.times);
  for (double& t : times) t += offset;
  std::optional<double> echo;
  if (plan.echo_time) echo = *plan.echo_time + offset;

  res.samples.assign(plan.times.size() * obs.channels, 0.0);
  auto apply = [&](Eigen::VectorXcd& psi) { apply_echo(m.spin, m.cutoff, psi); };
  run_sampled(evo, times, echo, apply,
              [&](std::size_t k, const Eigen::VectorXcd& psi, double drift) {
                res.max_norm_drift = std::max(res.max_norm_drift, drift);
                const JointState view(m.spin, m.cutoff, psi);
                const double leak = truncation_leakage(view, m.bath.absorb_rate() > 0);
                if (leak > kMaxLeakage) {
                  std::ostringstream os;
                  os << "truncation leakage " << leak << " in trajectory; raise the Fock cutoff above "
                     << m.cutoff.nmax();
                  fail(ErrorKind::Truncation, os.str());
                }
                res.max_leakage = std::max(res.max_leakage, leak);
                const SampleView v{k, plan.times[k], offset, psi, m.spin, m.cutoff, res.jumps};
                obs.eval(v, res.samples.data() + k * obs.channels);
              });
  res.final_state = evo.state();
  return res;
}

EnsembleAccumulator::EnsembleAccumulator(std::size_t samples, int channels)
    : samples_(samples),
      channels_(channels),
      sum_(samples * channels, 0.0),
      sum2_(samples * channels, 0.0) {}

void EnsembleAccumulator::add(const std::vector<double>& values) {
  require(values.size() == sum_.size(), ErrorKind::InvalidConfig,
          "trajectory sample layout does not match the ensemble");
  for (std::size_t k = 0; k < values.size(); ++k) {
    sum_[k] += values[k];
    sum2_[k] += values[k] * values[k];
  }
  ++count_;
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  require(other.samples_ == samples_ && other.channels_ == channels_, ErrorKind::InvalidConfig,
          "cannot merge ensembles with different sample layouts");
  for (std::size_t k = 0; k < sum_.size(); ++k) {
    sum_[k] += other.sum_[k];
    sum2_[k] += other.sum2_[k];
  }
  count_ += other.count_;
}

EnsembleStats EnsembleAccumulator::finish() const {
  require(count_ >= 2, ErrorKind::Precondition, "ensemble statistics need at least 2 trajectories");
  EnsembleStats s;
  s.samples = samples_;
  s.channels = channels_;
  s.trajectories = count_;
  s.mean.resize(sum_.size());
  s.stderr_.resize(sum_.size());
  const double m = double(count_);
  for (std::size_t k = 0; k < sum_.size(); ++k) {
    const double mean = sum_[k] / m;
    const double var = std::max(0.0, (sum2_[k] - m * mean * mean) / (m - 1.0));
    s.mean[k] = mean;
    s.stderr_[k] = std::sqrt(var / m);
  }
  return s;
}

namespace {

constexpr long kChunk = 16;

}  // namespace

EnsembleResult mc_average(const JointState& initial, const TrajectoryPlan& plan,
                          const Observable& obs, const EnsembleOptions& options) {
  require(options.trajectories >= 2, ErrorKind::InvalidConfig,
          "an ensemble needs at least 2 trajectories");
  plan.validate();
  const long M = options.trajectories;
  const long chunks = (M + kChunk - 1) / kChunk;
  const std::size_t S = plan.times.size();
  std::vector<EnsembleAccumulator> partial(chunks, EnsembleAccumulator(S, obs.channels));
  std::vector<double> drift(chunks, 0.0), leak(chunks, 0.0);
  EnsembleResult result;
  if (options.keep_jumps) result.jumps.resize(M);

  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        for (long i = c * kChunk; i < std::min(M, (c + 1) * kChunk); ++i) {
          TrajectoryResult r = mc_trajectory(initial, plan, obs, trajectory_seed(options.seed, i));
          partial[c].add(r.samples);
          drift[c] = std::max(drift[c], r.max_norm_drift);
          leak[c] = std::max(leak[c], r.max_leakage);
          if (options.keep_jumps) result.jumps[i] = std::move(r.jumps);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  int threads = options.threads > 0 ? options.threads : int(std::thread::hardware_concurrency());
  threads = int(std::clamp<long>(threads, 1, chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  EnsembleAccumulator total(S, obs.channels);
  for (long c = 0; c < chunks; ++c) {
    total.merge(partial[c]);
    result.max_norm_drift = std::max(result.max_norm_drift, drift[c]);
    result.max_leakage = std::max(result.max_leakage, leak[c]);
  }
  result.stats = total.finish();
  return result;
}

}  // namespace cavitas
