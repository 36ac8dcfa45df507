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


// Estimation error norms and reported output quantities.

#pragma once

#include <optional>
#include <span>

#include "cosserat/discretize.hpp"

namespace cosserat {

// L-infinity norms are the maximum over nodes of the Euclidean norm of the
// per-node block difference. Rotation error is max_i ||R_hat_i - R_i||_F.
struct ErrorRecord {
  double time = 0.0;
  double linf_position = 0.0;
  double linf_rotation = 0.0;
  double linf_rotation_angle = 0.0;  // geodesic, rad
  double linf_linear_velocity = 0.0;
  double linf_angular_velocity = 0.0;
  double linf_angular_strain = 0.0;
  double linf_linear_strain = 0.0;
  double linf_state = 0.0;  // max_i ||y~_i||, y~ = [phi~; eta~]
  double l2_state = 0.0;  // of y~ = [phi~; eta~]
  double h1_state = 0.0;
  double error_energy = 0.0;

  double stacked_linf() const { return linf_state; }

  bool operator==(const ErrorRecord&) const = default;
};

// Throws ConfigError when the states do not live on the model grid.
ErrorRecord state_error(const SimulationState& truth, const SimulationState& estimate,
                        const RodModel& model);

// (integral |y~|^2 + |d/ds y~|^2 ds)^(1/2), y~ = [K (xi_hat - xi); eta_hat - eta].
double h1_error(const SimulationState& truth, const SimulationState& estimate,
                const RodModel& model);

double l2_error(const SimulationState& truth, const SimulationState& estimate,
                const RodModel& model);

// integral eta~^T J eta~ + phi~^T K^-1 phi~ ds with phi~ = K (xi_hat - xi).
double error_energy(const SimulationState& truth, const SimulationState& estimate,
                    const RodModel& model);

// First record time after which stacked_linf stays <= fraction * initial for
// the rest of the sequence; nullopt when that never happens.
std::optional<double> convergence_time(std::span<const ErrorRecord> records,
                                       double threshold_fraction);

// Mean stacked_linf over records with time >= end - window.
double steady_state_error(std::span<const ErrorRecord> records, double window);

// Intrinsic Z-Y-X angles [yaw, pitch, roll] with R = Rz(yaw) Ry(pitch) Rx(roll).
// At pitch = +-pi/2 roll is set to zero and folded into yaw.
Vec3 euler_angles(const Mat3& r);
Mat3 rotation_from_euler(const Vec3& yaw_pitch_roll);

}  // namespace cosserat
