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

// Twin-simulation experiments: truth runs, measurement logs, observer runs
// and the robustness studies.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosserat/actuation.hpp"
#include "cosserat/discretize.hpp"
#include "cosserat/metrics.hpp"
#include "cosserat/observer.hpp"

namespace cosserat {

enum class StudyKind { kNone, kNoise, kParams, kRouting };

struct StudySpec {
  StudyKind kind = StudyKind::kNone;
  double amplitude = 0.0;

  // Throws ConfigError on a negative amplitude.
  void validate() const;
};

std::string to_string(StudyKind kind);
// Accepts none|noise|params|routing. Throws ConfigError otherwise.
StudyKind parse_study_kind(const std::string& name);

// Which tendon tensions drive the rod during a run.
enum class ScheduleKind { kPaper, kConstant, kNone };

struct ExperimentConfig {
  RodMaterial material;
  int nodes = 41;
  double dt_s = 0.0;  // <= 0 selects stable_dt
  double cfl_safety = 0.5;
  double end_time_s = 2.0;
  int reorthonormalize_every = 100;
  TipCondition tip_condition = TipCondition::kPenalty;
  double dissipation = 0.0;  // velocity hyperviscosity sigma

  Vec3 gravity_m_s2 = Vec3(0.0, 0.0, -9.81);
  Vec3 tip_force_n = Vec3(0.0, 0.0, -1.0);  // global frame
  bool tendons = true;
  ScheduleKind schedule = ScheduleKind::kPaper;
  std::vector<double> constant_tensions_n = {0.0, 0.0};

  double gain = 0.01;  // Gamma = gain I

  // 0 starts from the straight reference, 1..3 from the held equilibria.
  int initial_configuration = 1;
  std::optional<std::vector<Twist>> initial_strain;  // per node, overrides the id
  double relax_damping_per_s = 50.0;
  double relax_kinetic_energy_j = 1e-8;
  double relax_max_time_s = 20.0;

  int observer_nodes = 0;  // 0: same grid as the truth
  StudySpec study;
  std::uint64_t seed = 0;
  int snapshot_stride = 100;
  std::string output_dir = "out";

  // Table 1 rod with default loads.
  static ExperimentConfig paper();
  // Same rod with K2 scaled by 0.01 and J1 by 100, for short runs.
  static ExperimentConfig soft();

  // Throws ConfigError on invalid values.
  void validate() const;
};

// Largest Gamma eigenvalue for which an explicit boundary-cell update stays
// stable, (h/2) lambda_min(J_N) / dt. Only kStrong relies on it; kPenalty
// integrates the gain exactly.
double gain_stability_bound(const RodModel& model, double dt);

// Hold tensions of the three stand-in initial configurations.
std::array<double, 2> hold_tensions(int configuration);

RodParameters make_parameters(const ExperimentConfig& config);
Actuation make_actuation(const ExperimentConfig& config);
Grid make_grid(const ExperimentConfig& config, bool observer = false);
IntegratorConfig make_integrator(const ExperimentConfig& config);
// Step size used by runs of this config.
double resolve_dt(const ExperimentConfig& config);

// Plant at rest under constant hold tensions, relaxed with velocity damping
// until the kinetic energy drops below the config threshold. Throws
// ConfigError when that does not happen within relax_max_time_s.
SimulationState relax_equilibrium(const ExperimentConfig& config,
                                  const std::array<double, 2>& tensions);

// Initial truth state for the config, time reset to 0.
SimulationState initial_truth_state(const ExperimentConfig& config);

struct Trajectory {
  std::vector<SimulationState> snapshots;
};

struct TruthRun {
  Trajectory trajectory;
  MeasurementLog log;
};

struct ObserverRun {
  Trajectory trajectory;
  std::vector<ErrorRecord> errors;  // empty unless a truth was supplied
};

struct TwinRun {
  TruthRun truth;
  ObserverRun observer;
};

// Integrates the plant, logging the tip every step and storing a snapshot
// every snapshot_stride steps and at the end.
TruthRun run_truth(const ExperimentConfig& config);
TruthRun run_truth(const ExperimentConfig& config, const SimulationState& initial);

// Integrates the observer against the log, with the study perturbations of
// the config applied to the observer model. When truth is given, errors are
// computed at the shared snapshot times. Throws RangeError when the log
// does not cover the horizon.
ObserverRun run_observer(const ExperimentConfig& config, const MeasurementLog& log,
                         const Trajectory* truth = nullptr);

// run_truth, then the study's noise on the log, then run_observer.
TwinRun run_twin(const ExperimentConfig& config);

// Errors of estimate snapshots against truth snapshots at equal times. The
// truth grid must refine the estimate grid by an integer factor.
std::vector<ErrorRecord> compare_trajectories(const Trajectory& truth,
                                              const Trajectory& estimate,
                                              const RodModel& estimate_model);

// Per sample and component, uniform noise in [-a, a] times the largest
// magnitude of the matching velocity block over the log.
MeasurementLog apply_noise(const MeasurementLog& log, double amplitude, std::uint64_t seed);

// J(s), K(s) scaled by 1 + amplitude sin(20 s). Throws ConfigError unless
// 0 <= amplitude < 1.
RodParameters perturb_params(const RodParameters& params, double amplitude);

// D(s) scaled by 1 + amplitude sin(20 s). Throws ConfigError on a negative
// amplitude.
TendonRouting perturb_routing(const TendonRouting& routing, double amplitude);

struct StudyCell {
  StudyKind kind = StudyKind::kNone;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  double steady_state_error = 0.0;
  std::optional<double> convergence_time;
  double initial_error = 0.0;
  double final_error = 0.0;
  std::vector<ErrorRecord> errors;
};

// One truth run shared by observer runs at each (amplitude, seed) cell.
// Cells run on up to `workers` threads (0: hardware concurrency).
std::vector<StudyCell> run_study(const ExperimentConfig& config, StudyKind kind,
                                 const std::vector<double>& amplitudes,
                                 const std::vector<std::uint64_t>& seeds, int workers = 0);

constexpr double kSteadyStateWindow = 0.5;
constexpr double kConvergenceFraction = 0.05;

}  // namespace cosserat
