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


#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cosserat/errors.hpp"
#include "cosserat/harness.hpp"
#include "cosserat/io.hpp"
#include "test_util.hpp"

namespace cosserat {
namespace {

using testing::max_abs;

constexpr double kPi = std::numbers::pi;

ExperimentConfig quick(double end_time = 0.02) {
  ExperimentConfig c = ExperimentConfig::soft();
  c.nodes = 21;
  c.end_time_s = end_time;
  c.initial_configuration = 0;
  c.snapshot_stride = 50;
  return c;
}

ExperimentConfig zero_input() {
  ExperimentConfig c = quick();
  c.tendons = false;
  c.gravity_m_s2.setZero();
  c.tip_force_n.setZero();
  return c;
}

TEST(Config, DefaultsMatchTable1) {
  const ExperimentConfig c = ExperimentConfig::paper();
  EXPECT_EQ(c.material.length_m, 0.5);
  EXPECT_EQ(c.material.radius_m, 1e-3);
  EXPECT_EQ(c.material.density_kg_m3, 1.6e4);
  EXPECT_EQ(c.material.youngs_modulus_pa, 207e9);
  EXPECT_EQ(c.material.shear_modulus_pa, 79.6e9);
  EXPECT_EQ(c.gain, 0.01);
  EXPECT_EQ(c.tip_force_n, Vec3(0, 0, -1));
  EXPECT_EQ(c.gravity_m_s2, Vec3(0, 0, -9.81));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ValidationErrors) {
  auto bad = [](auto mutate) {
    ExperimentConfig c = quick();
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  };
  bad([](ExperimentConfig& c) { c.nodes = 3; });
  bad([](ExperimentConfig& c) { c.end_time_s = 0; });
  bad([](ExperimentConfig& c) { c.gain = -1; });
  bad([](ExperimentConfig& c) { c.initial_configuration = 4; });
  bad([](ExperimentConfig& c) { c.study = {StudyKind::kNoise, -0.1}; });
  bad([](ExperimentConfig& c) { c.study = {StudyKind::kParams, 1.0}; });
  bad([](ExperimentConfig& c) { c.material.radius_m = -1; });
  bad([](ExperimentConfig& c) { c.material.density_kg_m3 = 0; });
  bad([](ExperimentConfig& c) { c.material.rotary_inertia_scale = 0; });
  bad([](ExperimentConfig& c) { c.material.damping_ratio_s = -1e-3; });
  bad([](ExperimentConfig& c) { c.dissipation = -1e-3; });
  bad([](ExperimentConfig& c) { c.initial_strain = std::vector<Twist>(3); });
  EXPECT_THROW(parse_study_kind("tendons"), ConfigError);
  EXPECT_EQ(parse_study_kind("routing"), StudyKind::kRouting);
}

TEST(RunTruth, ZeroInputIsStationary) {
  const TruthRun run = run_truth(zero_input());
  ASSERT_GT(run.trajectory.snapshots.size(), 2u);
  const SimulationState& first = run.trajectory.snapshots.front();
  for (const SimulationState& s : run.trajectory.snapshots) {
    for (int i = 0; i < s.size(); ++i) {
      EXPECT_LT(max_abs(s.strain[i] - first.strain[i]), 1e-12);
      EXPECT_LT(max_abs(s.velocity[i]), 1e-12);
    }
  }
  for (const auto& m : run.log.samples()) EXPECT_LT(max_abs(m.tip_velocity), 1e-12);
}

TEST(RunTruth, LoadsMoveTheTip) {
  const TruthRun run = run_truth(quick());
  double peak = 0.0;
  for (const auto& m : run.log.samples()) peak = std::max(peak, m.tip_velocity.norm());
  EXPECT_GT(peak, 1e-3);
  const double dt = resolve_dt(quick());
  EXPECT_EQ(run.log.metadata.dt, dt);
  EXPECT_EQ(static_cast<long>(run.log.samples().size()), std::lround(0.02 / dt) + 1);
}

TEST(RunTruth, Deterministic) {
  const TruthRun a = run_truth(quick());
  const TruthRun b = run_truth(quick());
  EXPECT_EQ(log_to_string(a.log, Format::kCsv), log_to_string(b.log, Format::kCsv));
  EXPECT_EQ(trajectory_to_string(a.trajectory, Format::kCsv),
            trajectory_to_string(b.trajectory, Format::kCsv));
}

TEST(RunObserver, MatchedInitialStateIsExact) {
  const ExperimentConfig c = quick();
  const TruthRun truth = run_truth(c);
  const ObserverRun run = run_observer(c, truth.log, &truth.trajectory);
  ASSERT_EQ(run.errors.size(), truth.trajectory.snapshots.size());
  for (const ErrorRecord& r : run.errors) {
    EXPECT_LT(r.linf_position, 1e-12);
    EXPECT_LT(r.linf_angular_velocity, 1e-9);
    EXPECT_LT(r.linf_linear_velocity, 1e-9);
  }
}

TEST(RunObserver, ReplayIsIdenticalAndErrorsNeedTruth) {
  ExperimentConfig c = quick();
  c.initial_configuration = 0;
  const TruthRun truth = run_truth(c);
  const ObserverRun a = run_observer(c, truth.log);
  const ObserverRun b = run_observer(c, truth.log);
  EXPECT_TRUE(a.errors.empty());
  EXPECT_EQ(trajectory_to_string(a.trajectory, Format::kCsv),
            trajectory_to_string(b.trajectory, Format::kCsv));
}

TEST(RunObserver, HorizonBeyondLogThrows) {
  const ExperimentConfig c = quick();
  const TruthRun truth = run_truth(c);
  ExperimentConfig longer = c;
  longer.end_time_s = 0.03;
  EXPECT_THROW(run_observer(longer, truth.log), RangeError);
}

// Long runs accumulate rounding in the step times; a log that ends a few
// ulps of the horizon short must still be accepted.
TEST(RunObserver, ToleratesAccumulatedTimeRounding) {
  ExperimentConfig c = zero_input();
  c.dt_s = 1e-5;
  c.end_time_s = 0.03;
  MeasurementLog log = run_truth(c).log;
  for (auto& sample : log.mutable_samples()) sample.time *= 1.0 - 5e-10;
  EXPECT_NO_THROW(run_observer(c, log));
}

TEST(RunObserver, CoarserObserverGrid) {
  ExperimentConfig c = quick();
  c.observer_nodes = 11;
  const TwinRun twin = run_twin(c);
  ASSERT_FALSE(twin.observer.errors.empty());
  EXPECT_EQ(twin.observer.trajectory.snapshots.front().size(), 11);
  c.observer_nodes = 12;
  const TruthRun truth = run_truth(c);
  EXPECT_THROW(run_observer(c, truth.log, &truth.trajectory), ConfigError);
}

TEST(ApplyNoise, ZeroBoundAndDeterminism) {
  const TruthRun truth = run_truth(quick());
  const MeasurementLog& log = truth.log;
  const MeasurementLog same = apply_noise(log, 0.0, 5);
  EXPECT_EQ(log_to_string(same, Format::kCsv), log_to_string(log, Format::kCsv));

  double max_w = 0, max_v = 0;
  for (const auto& s : log.samples()) {
    max_w = std::max(max_w, angular(s.tip_velocity).norm());
    max_v = std::max(max_v, linear(s.tip_velocity).norm());
  }
  const MeasurementLog noisy = apply_noise(log, 0.2, 7);
  double used_w = 0, used_v = 0;
  for (std::size_t k = 0; k < log.samples().size(); ++k) {
    const Twist d = noisy.samples()[k].tip_velocity - log.samples()[k].tip_velocity;
    for (int c = 0; c < 3; ++c) {
      EXPECT_LE(std::abs(d[c]), 0.2 * max_w);
      EXPECT_LE(std::abs(d[c + 3]), 0.2 * max_v);
      used_w = std::max(used_w, std::abs(d[c]));
      used_v = std::max(used_v, std::abs(d[c + 3]));
    }
    EXPECT_EQ(noisy.samples()[k].tip_rotation, log.samples()[k].tip_rotation);
  }
  EXPECT_GT(used_w, 0.15 * max_w);
  EXPECT_GT(used_v, 0.15 * max_v);

  EXPECT_EQ(log_to_string(apply_noise(log, 0.2, 7), Format::kCsv),
            log_to_string(noisy, Format::kCsv));
  EXPECT_NE(log_to_string(apply_noise(log, 0.2, 8), Format::kCsv),
            log_to_string(noisy, Format::kCsv));
  EXPECT_THROW(apply_noise(log, 1.5, 7), ConfigError);
}

TEST(PerturbParams, ScalingAndSpd) {
  const RodParameters p = make_parameters(ExperimentConfig::paper());
  const RodParameters same = perturb_params(p, 0.0);
  EXPECT_EQ(same.section_at(0.3).stiffness, p.section_at(0.3).stiffness);
  const double peak = kPi / 40.0;
  const RodParameters q = perturb_params(p, 0.2);
  EXPECT_LT(max_abs(q.section_at(peak).stiffness - 1.2 * p.section_at(peak).stiffness),
            1e-12 * p.section_at(peak).stiffness.maxCoeff());
  EXPECT_LT(max_abs(q.section_at(peak).inertia - 1.2 * p.section_at(peak).inertia), 1e-20);
  const Grid g(0.5, 41);
  for (int i = 0; i < g.nodes(); ++i) {
    Eigen::SelfAdjointEigenSolver<Mat6> eig(q.section_at(g.node(i)).stiffness);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
  EXPECT_EQ(p.section_at(peak).stiffness, make_parameters(ExperimentConfig::paper())
                                              .section_at(peak)
                                              .stiffness);
  EXPECT_THROW(perturb_params(p, 1.0), ConfigError);
}

TEST(PerturbRouting, ScalingAndDerivative) {
  const TendonRouting r = paper_routings()[0];
  EXPECT_EQ(perturb_routing(r, 0.0).offset(0.2), r.offset(0.2));
  const double peak = kPi / 40.0;
  EXPECT_LT(max_abs(perturb_routing(r, 0.1).offset(peak) - 1.1 * r.offset(peak)), 1e-16);
  const TendonRouting p = perturb_routing(paper_routings()[1], 0.1);
  double previous = 0.0;
  for (double h : {4e-3, 2e-3, 1e-3}) {
    const double s = 0.33;
    const double err = max_abs((p.offset(s + h) - p.offset(s - h)) / (2 * h) - p.derivative(s));
    if (previous > 0.0) {
      EXPECT_NEAR(previous / err, 4.0, 0.2);
    }
    previous = err;
  }
  EXPECT_THROW(perturb_routing(r, -0.1), ConfigError);
}

TEST(Relaxation, HeldEquilibriumSettles) {
  ExperimentConfig c = ExperimentConfig::soft();
  c.nodes = 21;
  c.gravity_m_s2.setZero();
  c.tip_force_n.setZero();
  const SimulationState s = relax_equilibrium(c, hold_tensions(1));
  const RodModel model(make_parameters(c), make_actuation(c), make_grid(c));
  EXPECT_EQ(s.time, 0.0);
  EXPECT_EQ(kinetic_energy(s, model), 0.0);
  double bend = 0.0;
  for (const Twist& xi : s.strain) bend = std::max(bend, angular(xi).norm());
  EXPECT_GT(bend, 1.0);
  c.relax_max_time_s = 0.01;
  EXPECT_THROW(relax_equilibrium(c, hold_tensions(1)), ConfigError);
}

TEST(Study, CellsAreIndependentOfWorkerCount) {
  ExperimentConfig c = quick(0.01);
  c.initial_configuration = 0;
  const auto a = run_study(c, StudyKind::kNoise, {0.0, 0.2}, {1, 2}, 1);
  const auto b = run_study(c, StudyKind::kNoise, {0.0, 0.2}, {1, 2}, 3);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(study_to_string(a, Format::kCsv), study_to_string(b, Format::kCsv));
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].errors, b[k].errors);
  EXPECT_LT(a[0].final_error, a[2].final_error);
}

TEST(GainBound, PositiveAndScalesWithDt) {
  const ExperimentConfig c = ExperimentConfig::soft();
  const RodModel model(make_parameters(c), make_actuation(c), make_grid(c));
  const double b = gain_stability_bound(model, 1e-5);
  EXPECT_GT(b, 0.0);
  EXPECT_NEAR(gain_stability_bound(model, 2e-5), 0.5 * b, 1e-12 * b);
}

}  // namespace
}  // namespace cosserat
