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


// Boundary observer: a copy of the discretized plant whose only coupling to
// the measured system is the virtual tip wrench -Gamma (eta_hat - eta)(l, t).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosserat/discretize.hpp"
#include "cosserat/errors.hpp"

namespace cosserat {

class MissingMeasurementError : public RangeError {
 public:
  using RangeError::RangeError;
};

class ObserverGain {
 public:
  // Throws ConfigError unless gamma is symmetric positive definite.
  explicit ObserverGain(const Mat6& gamma);

  static ObserverGain scalar(double gamma) { return ObserverGain(gamma * Mat6::Identity()); }
  // Gamma = 0: open-loop model prediction, for comparison runs only.
  static ObserverGain open_loop();

  const Mat6& matrix() const { return gamma_; }
  double max_eigenvalue() const;

 private:
  ObserverGain() = default;
  Mat6 gamma_ = Mat6::Zero();
};

struct Measurement {
  double time = 0.0;
  Twist tip_velocity = Twist::Zero();
  std::optional<Mat3> tip_rotation;
};

struct LogMetadata {
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::string noise = "none";
};

// Time-ordered tip samples recorded from a truth run.
class MeasurementLog {
 public:
  struct Sample {
    double time;
    Twist tip_velocity;
    Mat3 tip_rotation;
  };

  LogMetadata metadata;

  // Throws ConfigError unless t is strictly greater than the last sample.
  void append(double t, const Twist& tip_velocity, const Mat3& tip_rotation);

  const std::vector<Sample>& samples() const { return samples_; }
  std::vector<Sample>& mutable_samples() { return samples_; }
  bool empty() const { return samples_.empty(); }
  double start_time() const;
  double end_time() const;

  // Linear interpolation of velocity, nearest-sample rotation. Throws
  // RangeError outside [start_time, end_time] (with a 1e-9 relative slack).
  Measurement interpolate(double t) const;

  // Throws MissingMeasurementError when the samples bracketing t are further
  // apart than max_gap.
  void require_coverage(double t, double max_gap) const;

 private:
  std::size_t bracket(double t) const;

  std::vector<Sample> samples_;
};

// -Gamma (eta_hat_tip - eta_tip).
Twist injection_wrench(const Twist& estimated_tip_velocity, const Measurement& measurement,
                       const ObserverGain& gain);

// xi_hat = xi_o, eta_hat = 0, poses from the base.
SimulationState init_straight_estimate(const RodModel& model);

struct ObserverOptions {
  // Largest tolerated spacing between log samples, as a multiple of the
  // log's nominal dt (falls back to the observer dt when the log has none).
  double max_gap_factor = 1.5;
};

// Advances the estimate by dt against the log.
SimulationState observer_step(const SimulationState& estimate, const RodModel& model,
                              const MeasurementLog& log, const ObserverGain& gain,
                              const IntegratorConfig& config, double dt,
                              const ObserverOptions& options = {});

class BoundaryObserver {
 public:
  BoundaryObserver(RodModel model, ObserverGain gain, IntegratorConfig config,
                   SimulationState initial, ObserverOptions options = {});

  const SimulationState& estimate() const { return estimate_; }
  const RodModel& model() const { return model_; }
  const ObserverGain& gain() const { return gain_; }

  void step(const MeasurementLog& log, double dt);

 private:
  RodModel model_;
  ObserverGain gain_;
  IntegratorConfig config_;
  SimulationState estimate_;
  ObserverOptions options_;
};

}  // namespace cosserat
