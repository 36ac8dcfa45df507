// Copyright 2026 The Cosserat Observer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cosserat/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <utility>

#include "cosserat/errors.hpp"

namespace cosserat {

namespace {

constexpr double kPerturbationFrequency = 20.0;

long step_count(const ExperimentConfig& config, double dt) {
  return std::max(1L, std::lround(config.end_time_s / dt));
}

constexpr double kTimeTolerance = 1e-9;

SimulationState subsample(const SimulationState& state, int factor) {
  SimulationState out;
  out.time = state.time;
  out.step_count = state.step_count;
  for (int i = 0; i < state.size(); i += factor) {
    out.strain.push_back(state.strain[i]);
    out.velocity.push_back(state.velocity[i]);
    out.poses.push_back(state.poses[i]);
  }
  return out;
}

}  // namespace

void StudySpec::validate() const {
  if (!(amplitude >= 0.0)) throw ConfigError("study amplitude must be >= 0");
}

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::kNone: return "none";
    case StudyKind::kNoise: return "noise";
    case StudyKind::kParams: return "params";
    case StudyKind::kRouting: return "routing";
  }
  return "none";
}

StudyKind parse_study_kind(const std::string& name) {
  if (name == "none") return StudyKind::kNone;
  if (name == "noise") return StudyKind::kNoise;
  if (name == "params") return StudyKind::kParams;
  if (name == "routing") return StudyKind::kRouting;
  throw ConfigError("unknown study kind '" + name + "' (none|noise|params|routing)");
}

ExperimentConfig ExperimentConfig::paper() { return {}; }

ExperimentConfig ExperimentConfig::soft() {
  ExperimentConfig c;
  c.material.axial_shear_stiffness_scale = 0.01;
  c.material.rotary_inertia_scale = 100.0;
  return c;
}

void ExperimentConfig::validate() const {
  const RodMaterial& m = material;
  for (const auto& [value, name] :
       {std::pair{m.length_m, "length_m"}, {m.radius_m, "radius_m"},
        {m.density_kg_m3, "density_kg_m3"}, {m.youngs_modulus_pa, "youngs_modulus_pa"},
        {m.shear_modulus_pa, "shear_modulus_pa"},
        {m.axial_shear_stiffness_scale, "axial_shear_stiffness_scale"},
        {m.rotary_inertia_scale, "rotary_inertia_scale"}}) {
    if (!(value > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  }
  if (!(m.damping_ratio_s >= 0.0)) throw ConfigError("damping_ratio_s must be >= 0");
  if (!(dissipation >= 0.0)) throw ConfigError("dissipation must be >= 0");
  if (nodes < 5) throw ConfigError("nodes must be >= 5");
  if (observer_nodes != 0 && observer_nodes < 5) throw ConfigError("observer_nodes must be >= 5");
  if (!(end_time_s > 0.0)) throw ConfigError("end_time_s must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
  if (!(gain >= 0.0)) throw ConfigError("gain must be >= 0");
  if (initial_configuration < 0 || initial_configuration > 3) {
    throw ConfigError("initial_configuration must be 0, 1, 2 or 3");
  }
  if (initial_strain && static_cast<int>(initial_strain->size()) != nodes) {
    throw ConfigError("initial strain needs one twist per node");
  }
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  if (!(relax_damping_per_s > 0.0)) throw ConfigError("relax_damping_per_s must be positive");
  if (schedule == ScheduleKind::kConstant && tendons && constant_tensions_n.size() != 2) {
    throw ConfigError("constant_tensions_n needs one value per tendon");
  }
  study.validate();
  if (study.kind == StudyKind::kParams && study.amplitude >= 1.0) {
    throw ConfigError("parameter perturbation amplitude must be < 1");
  }
  if (study.kind == StudyKind::kNoise && study.amplitude > 1.0) {
    throw ConfigError("noise amplitude must lie in [0, 1]");
  }
  make_parameters(*this).validate();
}

double gain_stability_bound(const RodModel& model, double dt) {
  const int n = model.grid().nodes() - 1;
  Eigen::SelfAdjointEigenSolver<Mat6> eig(model.section(n).inertia, Eigen::EigenvaluesOnly);
  return 0.5 * model.grid().spacing() * eig.eigenvalues().minCoeff() / dt;
}

std::array<double, 2> hold_tensions(int configuration) {
  switch (configuration) {
    case 1: return {-20.0, 0.0};
    case 2: return {0.0, -50.0};
    case 3: return {-30.0, -30.0};
    default: throw ConfigError("initial configuration must be 1, 2 or 3");
  }
}

RodParameters make_parameters(const ExperimentConfig& config) {
  RodParameters p = make_uniform_rod(config.material);
  p.gravity = config.gravity_m_s2;
  p.tip_load_global = make_twist(Vec3::Zero(), config.tip_force_n);
  return p;
}

Actuation make_actuation(const ExperimentConfig& config) {
  Actuation a;
  if (!config.tendons) return a;
  a.routings = paper_routings();
  switch (config.schedule) {
    case ScheduleKind::kPaper: a.schedule = paper_schedule(); break;
    case ScheduleKind::kConstant: a.schedule = constant_schedule(config.constant_tensions_n); break;
    case ScheduleKind::kNone: break;
  }
  return a;
}

Grid make_grid(const ExperimentConfig& config, bool observer) {
  const int n = observer && config.observer_nodes > 0 ? config.observer_nodes : config.nodes;
  return Grid(config.material.length_m, n);
}

double resolve_dt(const ExperimentConfig& config) {
  if (config.dt_s > 0.0) return config.dt_s;
  const RodParameters p = make_parameters(config);
  double dt = stable_dt(p, make_grid(config), config.cfl_safety);
  if (config.observer_nodes > 0) {
    dt = std::min(dt, stable_dt(p, make_grid(config, true), config.cfl_safety));
  }
  return dt;
}

IntegratorConfig make_integrator(const ExperimentConfig& config) {
  IntegratorConfig integ;
  integ.reorthonormalize_every = config.reorthonormalize_every;
  integ.tip = config.tip_condition;
  integ.dissipation = config.dissipation;
  return integ;
}

SimulationState relax_equilibrium(const ExperimentConfig& config,
                                  const std::array<double, 2>& tensions) {
  ExperimentConfig hold = config;
  hold.schedule = ScheduleKind::kConstant;
  hold.constant_tensions_n = {tensions[0], tensions[1]};
  const RodModel model(make_parameters(hold), make_actuation(hold), make_grid(hold));
  const IntegratorConfig integ = make_integrator(config);
  const double dt = resolve_dt(config);
  const double factor = std::exp(-config.relax_damping_per_s * dt);
  const long check_every = std::max(1L, std::lround(0.01 / dt));

  SimulationState s = init_straight_estimate(model);
  for (long k = 1;; ++k) {
    s = step(s, model, dt, integ);
    for (Twist& eta : s.velocity) eta *= factor;
    if (k % check_every != 0) continue;
    if (kinetic_energy(s, model) < config.relax_kinetic_energy_j) break;
    if (s.time > config.relax_max_time_s) {
      throw ConfigError("equilibrium relaxation did not settle within relax_max_time_s");
    }
  }
  for (Twist& eta : s.velocity) eta.setZero();
  s.time = 0.0;
  s.step_count = 0;
  return s;
}

SimulationState initial_truth_state(const ExperimentConfig& config) {
  const RodModel model(make_parameters(config), make_actuation(config), make_grid(config));
  if (config.initial_strain) {
    SimulationState s;
    s.strain = *config.initial_strain;
    s.velocity.assign(s.strain.size(), Twist::Zero());
    s.poses = reconstruct_poses(s.strain, model.grid().spacing(), model.params().base_pose);
    return s;
  }
  if (config.initial_configuration == 0) return init_straight_estimate(model);
  return relax_equilibrium(config, hold_tensions(config.initial_configuration));
}

TruthRun run_truth(const ExperimentConfig& config) {
  return run_truth(config, initial_truth_state(config));
}

TruthRun run_truth(const ExperimentConfig& config, const SimulationState& initial) {
  config.validate();
  const RodModel model(make_parameters(config), make_actuation(config), make_grid(config));
  const IntegratorConfig integ = make_integrator(config);
  const double dt = resolve_dt(config);
  const long steps = step_count(config, dt);

  TruthRun run;
  run.log.metadata.dt = dt;
  run.log.metadata.seed = config.seed;
  SimulationState s = initial;
  if (s.size() != model.grid().nodes()) throw ConfigError("initial state does not match the grid");
  run.trajectory.snapshots.push_back(s);
  run.log.append(s.time, s.velocity.back(), s.poses.back().rotation);
  for (long k = 1; k <= steps; ++k) {
    s = step(s, model, dt, integ);
    run.log.append(s.time, s.velocity.back(), s.poses.back().rotation);
    if (k % config.snapshot_stride == 0 || k == steps) run.trajectory.snapshots.push_back(s);
  }
  return run;
}

ObserverRun run_observer(const ExperimentConfig& config, const MeasurementLog& log,
                         const Trajectory* truth) {
  config.validate();
  RodParameters params = make_parameters(config);
  Actuation actuation = make_actuation(config);
  if (config.study.kind == StudyKind::kParams) {
    params = perturb_params(params, config.study.amplitude);
  } else if (config.study.kind == StudyKind::kRouting) {
    for (TendonRouting& r : actuation.routings) r = perturb_routing(r, config.study.amplitude);
  }
  const RodModel model(params, actuation, make_grid(config, true));
  const IntegratorConfig integ = make_integrator(config);
  const double dt = resolve_dt(config);
  const long steps = step_count(config, dt);
  // Step times accumulate rounding, so allow the log's interpolation slack.
  const double horizon = steps * dt;
  if (log.empty() || log.start_time() > 1e-9 * dt ||
      log.end_time() < horizon - 1e-9 * std::max(1.0, horizon)) {
    throw RangeError("measurement log does not cover [0, " + std::to_string(horizon) + "] s");
  }
  const ObserverGain gain =
      config.gain > 0.0 ? ObserverGain::scalar(config.gain) : ObserverGain::open_loop();

  ObserverRun run;
  SimulationState e = init_straight_estimate(model);
  run.trajectory.snapshots.push_back(e);
  for (long k = 1; k <= steps; ++k) {
    e = observer_step(e, model, log, gain, integ, dt);
    if (k % config.snapshot_stride == 0 || k == steps) run.trajectory.snapshots.push_back(e);
  }
  if (truth) run.errors = compare_trajectories(*truth, run.trajectory, model);
  return run;
}

TwinRun run_twin(const ExperimentConfig& config) {
  TwinRun twin;
  twin.truth = run_truth(config);
  MeasurementLog log = twin.truth.log;
  if (config.study.kind == StudyKind::kNoise) {
    log = apply_noise(log, config.study.amplitude, config.seed);
  }
  twin.observer = run_observer(config, log, &twin.truth.trajectory);
  return twin;
}

std::vector<ErrorRecord> compare_trajectories(const Trajectory& truth,
                                              const Trajectory& estimate,
                                              const RodModel& estimate_model) {
  std::vector<ErrorRecord> out;
  if (truth.snapshots.empty() || estimate.snapshots.empty()) return out;
  const int nt = truth.snapshots.front().size();
  const int ne = estimate.snapshots.front().size();
  if (ne < 2 || (nt - 1) % (ne - 1) != 0) {
    throw ConfigError("truth grid does not refine the estimate grid by an integer factor");
  }
  const int factor = (nt - 1) / (ne - 1);
  std::size_t j = 0;
  for (const SimulationState& est : estimate.snapshots) {
    while (j < truth.snapshots.size() && truth.snapshots[j].time < est.time - kTimeTolerance) ++j;
    if (j == truth.snapshots.size()) break;
    if (std::abs(truth.snapshots[j].time - est.time) > kTimeTolerance) continue;
    const SimulationState t =
        factor == 1 ? truth.snapshots[j] : subsample(truth.snapshots[j], factor);
    out.push_back(state_error(t, est, estimate_model));
  }
  return out;
}

MeasurementLog apply_noise(const MeasurementLog& log, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
    throw ConfigError("noise amplitude must lie in [0, 1]");
  }
  MeasurementLog out = log;
  out.metadata.seed = seed;
  out.metadata.noise = "uniform " + std::to_string(amplitude);
  if (amplitude == 0.0) return out;
  double max_angular = 0.0, max_linear = 0.0;
  for (const auto& s : log.samples()) {
    max_angular = std::max(max_angular, angular(s.tip_velocity).norm());
    max_linear = std::max(max_linear, linear(s.tip_velocity).norm());
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto& s : out.mutable_samples()) {
    for (int c = 0; c < 6; ++c) {
      const double scale = c < 3 ? max_angular : max_linear;
      s.tip_velocity[c] += amplitude * scale * unit(rng);
    }
  }
  return out;
}

RodParameters perturb_params(const RodParameters& params, double amplitude) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) {
    throw ConfigError("parameter perturbation amplitude must lie in [0, 1) to keep J, K SPD");
  }
  RodParameters out = params;
  out.section_at = [base = params.section_at, amplitude](double s) {
    SectionProperties p = base(s);
    const double f = 1.0 + amplitude * std::sin(kPerturbationFrequency * s);
    p.inertia *= f;
    p.stiffness *= f;
    return p;
  };
  return out;
}

TendonRouting perturb_routing(const TendonRouting& routing, double amplitude) {
  if (!(amplitude >= 0.0)) throw ConfigError("routing perturbation amplitude must be >= 0");
  return routing.scaled(amplitude, kPerturbationFrequency);
}

std::vector<StudyCell> run_study(const ExperimentConfig& config, StudyKind kind,
                                 const std::vector<double>& amplitudes,
                                 const std::vector<std::uint64_t>& seeds, int workers) {
  ExperimentConfig base = config;
  base.study = {};
  const TruthRun truth = run_truth(base);

  std::vector<StudyCell> cells;
  for (double a : amplitudes) {
    for (std::uint64_t seed : seeds) {
      StudyCell c;
      c.kind = kind;
      c.amplitude = a;
      c.seed = seed;
      cells.push_back(c);
    }
  }
  for (const StudyCell& c : cells) {
    ExperimentConfig cfg = base;
    cfg.study = {c.kind, c.amplitude};
    cfg.validate();
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        StudyCell& c = cells[i];
        ExperimentConfig cfg = base;
        cfg.study = {c.kind, c.amplitude};
        cfg.seed = c.seed;
        const MeasurementLog log = c.kind == StudyKind::kNoise
                                       ? apply_noise(truth.log, c.amplitude, c.seed)
                                       : truth.log;
        c.errors = run_observer(cfg, log, &truth.trajectory).errors;
        if (!c.errors.empty()) {
          c.initial_error = c.errors.front().stacked_linf();
          c.final_error = c.errors.back().stacked_linf();
          c.steady_state_error = steady_state_error(c.errors, kSteadyStateWindow);
          c.convergence_time = convergence_time(c.errors, kConvergenceFraction);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int n = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  n = std::clamp(n, 1, static_cast<int>(std::max<std::size_t>(1, cells.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return cells;
}

}  // namespace cosserat
