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


#include "cosserat/observer.hpp"

#include <algorithm>
#include <cmath>

namespace cosserat {

ObserverGain::ObserverGain(const Mat6& gamma) : gamma_(gamma) {
  const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  if (!gamma.allFinite() || (gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigError("observer gain must be symmetric");
  }
  if (gamma.llt().info() != Eigen::Success) {
    throw ConfigError("observer gain must be positive definite");
  }
}

ObserverGain ObserverGain::open_loop() { return ObserverGain(); }

double ObserverGain::max_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat6> eig(gamma_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

void MeasurementLog::append(double t, const Twist& tip_velocity, const Mat3& tip_rotation) {
  if (!samples_.empty() && !(t > samples_.back().time)) {
    throw ConfigError("measurement times must be strictly increasing");
  }
  samples_.push_back({t, tip_velocity, tip_rotation});
}

double MeasurementLog::start_time() const {
  if (samples_.empty()) throw RangeError("measurement log is empty");
  return samples_.front().time;
}

double MeasurementLog::end_time() const {
  if (samples_.empty()) throw RangeError("measurement log is empty");
  return samples_.back().time;
}

std::size_t MeasurementLog::bracket(double t) const {
  const double t0 = start_time();
  const double t1 = end_time();
  const double slack = 1e-9 * std::max({1.0, std::abs(t0), std::abs(t1)});
  if (t < t0 - slack || t > t1 + slack) {
    throw RangeError("time " + std::to_string(t) + " outside measurement log span [" +
                     std::to_string(t0) + ", " + std::to_string(t1) + "]");
  }
  // Index of the first sample with time > t, clamped to [1, size-1].
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const Sample& s) { return v < s.time; });
  std::size_t hi = static_cast<std::size_t>(it - samples_.begin());
  return std::clamp<std::size_t>(hi, 1, std::max<std::size_t>(1, samples_.size() - 1));
}

Measurement MeasurementLog::interpolate(double t) const {
  if (samples_.size() == 1) {
    bracket(t);
    return {t, samples_[0].tip_velocity, samples_[0].tip_rotation};
  }
  const std::size_t hi = bracket(t);
  const Sample& a = samples_[hi - 1];
  const Sample& b = samples_[hi];
  const double w = std::clamp((t - a.time) / (b.time - a.time), 0.0, 1.0);
  Measurement m;
  m.time = t;
  if (w == 0.0) {
    m.tip_velocity = a.tip_velocity;
  } else if (w == 1.0) {
    m.tip_velocity = b.tip_velocity;
  } else {
    m.tip_velocity = (1.0 - w) * a.tip_velocity + w * b.tip_velocity;
  }
  m.tip_rotation = w <= 0.5 ? a.tip_rotation : b.tip_rotation;
  return m;
}

void MeasurementLog::require_coverage(double t, double max_gap) const {
  const std::size_t hi = bracket(t);
  if (samples_.size() < 2) return;
  const double gap = samples_[hi].time - samples_[hi - 1].time;
  if (gap > max_gap) {
    throw MissingMeasurementError("measurement gap of " + std::to_string(gap) + " s near t=" +
                                  std::to_string(t) + " exceeds " + std::to_string(max_gap) +
                                  " s");
  }
}

Twist injection_wrench(const Twist& estimated_tip_velocity, const Measurement& measurement,
                       const ObserverGain& gain) {
  return -gain.matrix() * (estimated_tip_velocity - measurement.tip_velocity);
}

SimulationState init_straight_estimate(const RodModel& model) {
  SimulationState state;
  const Grid& grid = model.grid();
  state.strain.resize(grid.nodes());
  for (int i = 0; i < grid.nodes(); ++i) state.strain[i] = model.section(i).reference_strain;
  state.velocity.assign(grid.nodes(), Twist::Zero());
  state.poses = reconstruct_poses(state.strain, grid.spacing(), model.params().base_pose);
  return state;
}

SimulationState observer_step(const SimulationState& estimate, const RodModel& model,
                              const MeasurementLog& log, const ObserverGain& gain,
                              const IntegratorConfig& config, double dt,
                              const ObserverOptions& options) {
  const double nominal = log.metadata.dt > 0.0 ? log.metadata.dt : dt;
  const double max_gap = options.max_gap_factor * std::max(nominal, dt);
  log.require_coverage(estimate.time, max_gap);
  log.require_coverage(estimate.time + dt, max_gap);

  TipInjection injection;
  injection.gain = gain.matrix();
  injection.measured_velocity = [&log](double t) { return log.interpolate(t).tip_velocity; };
  injection.measured_rotation = [&log](double t) { return *log.interpolate(t).tip_rotation; };
  return step(estimate, model, dt, config, &injection);
}

BoundaryObserver::BoundaryObserver(RodModel model, ObserverGain gain, IntegratorConfig config,
                                   SimulationState initial, ObserverOptions options)
    : model_(std::move(model)),
      gain_(std::move(gain)),
      config_(config),
      estimate_(std::move(initial)),
      options_(options) {
  if (estimate_.size() != model_.grid().nodes()) {
    throw ConfigError("initial estimate does not match the observer grid");
  }
}

void BoundaryObserver::step(const MeasurementLog& log, double dt) {
  estimate_ = observer_step(estimate_, model_, log, gain_, config_, dt, options_);
}

}  // namespace cosserat
