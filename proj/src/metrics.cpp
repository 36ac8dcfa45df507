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


#include "cosserat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cosserat/errors.hpp"

namespace cosserat {

namespace {

void check_compatible(const SimulationState& a, const SimulationState& b, const RodModel& model) {
  const int n = model.grid().nodes();
  if (a.size() != n || b.size() != n || static_cast<int>(a.poses.size()) != n ||
      static_cast<int>(b.poses.size()) != n) {
    throw ConfigError("state_error: states do not match the grid");
  }
}

using Stacked = Eigen::Matrix<double, 12, 1>;

std::vector<Stacked> stacked_error(const SimulationState& truth, const SimulationState& est,
                                   const RodModel& model) {
  std::vector<Stacked> y(truth.size());
  for (int i = 0; i < truth.size(); ++i) {
    y[i] << model.section(i).stiffness * (est.strain[i] - truth.strain[i]),
        est.velocity[i] - truth.velocity[i];
  }
  return y;
}

double rotation_angle(const Mat3& a, const Mat3& b) {
  const double c = 0.5 * ((a.transpose() * b).trace() - 1.0);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

ErrorRecord state_error(const SimulationState& truth, const SimulationState& estimate,
                        const RodModel& model) {
  check_compatible(truth, estimate, model);
  ErrorRecord r;
  r.time = truth.time;
  for (int i = 0; i < truth.size(); ++i) {
    const Twist dxi = estimate.strain[i] - truth.strain[i];
    const Twist deta = estimate.velocity[i] - truth.velocity[i];
    const Pose& gt = truth.poses[i];
    const Pose& ge = estimate.poses[i];
    r.linf_position = std::max(r.linf_position, (ge.position - gt.position).norm());
    r.linf_rotation = std::max(r.linf_rotation, (ge.rotation - gt.rotation).norm());
    r.linf_rotation_angle =
        std::max(r.linf_rotation_angle, rotation_angle(ge.rotation, gt.rotation));
    r.linf_angular_velocity = std::max(r.linf_angular_velocity, angular(deta).norm());
    r.linf_linear_velocity = std::max(r.linf_linear_velocity, linear(deta).norm());
    r.linf_angular_strain = std::max(r.linf_angular_strain, angular(dxi).norm());
    r.linf_linear_strain = std::max(r.linf_linear_strain, linear(dxi).norm());
  }
  for (const Stacked& y : stacked_error(truth, estimate, model)) {
    r.linf_state = std::max(r.linf_state, y.norm());
  }
  r.l2_state = l2_error(truth, estimate, model);
  r.h1_state = h1_error(truth, estimate, model);
  r.error_energy = error_energy(truth, estimate, model);
  return r;
}

double l2_error(const SimulationState& truth, const SimulationState& estimate,
                const RodModel& model) {
  check_compatible(truth, estimate, model);
  const std::vector<Stacked> y = stacked_error(truth, estimate, model);
  double sum = 0.0;
  for (int i = 0; i < truth.size(); ++i) sum += model.grid().weight(i) * y[i].squaredNorm();
  return std::sqrt(sum);
}

double h1_error(const SimulationState& truth, const SimulationState& estimate,
                const RodModel& model) {
  check_compatible(truth, estimate, model);
  const std::vector<Stacked> y = stacked_error(truth, estimate, model);
  const int n = truth.size();
  std::vector<Twist> upper(n), lower(n);
  for (int i = 0; i < n; ++i) {
    upper[i] = y[i].head<6>();
    lower[i] = y[i].tail<6>();
  }
  const double h = model.grid().spacing();
  const std::vector<Twist> d_upper = spatial_derivative(upper, h);
  const std::vector<Twist> d_lower = spatial_derivative(lower, h);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += model.grid().weight(i) *
           (y[i].squaredNorm() + d_upper[i].squaredNorm() + d_lower[i].squaredNorm());
  }
  return std::sqrt(sum);
}

double error_energy(const SimulationState& truth, const SimulationState& estimate,
                    const RodModel& model) {
  check_compatible(truth, estimate, model);
  double sum = 0.0;
  for (int i = 0; i < truth.size(); ++i) {
    const SectionProperties& sec = model.section(i);
    const Twist dxi = estimate.strain[i] - truth.strain[i];
    const Twist deta = estimate.velocity[i] - truth.velocity[i];
    sum += model.grid().weight(i) * (deta.dot(sec.inertia * deta) + dxi.dot(sec.stiffness * dxi));
  }
  return sum;
}

std::optional<double> convergence_time(std::span<const ErrorRecord> records,
                                       double threshold_fraction) {
  if (records.empty()) return std::nullopt;
  const double limit = threshold_fraction * records.front().stacked_linf();
  std::size_t first_ok = 0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (!(records[k].stacked_linf() <= limit)) first_ok = k + 1;
  }
  if (first_ok >= records.size()) return std::nullopt;
  return records[first_ok].time;
}

double steady_state_error(std::span<const ErrorRecord> records, double window) {
  if (records.empty()) return 0.0;
  const double start = records.back().time - window;
  double sum = 0.0;
  int count = 0;
  for (const ErrorRecord& r : records) {
    if (r.time >= start - 1e-12) {
      sum += r.stacked_linf();
      ++count;
    }
  }
  return sum / count;
}

Vec3 euler_angles(const Mat3& r) {
  const double sp = std::clamp(-r(2, 0), -1.0, 1.0);
  if (std::abs(sp) > 1.0 - 1e-12) {
    // Gimbal lock: only yaw -/+ roll is observable.
    const double pitch = std::copysign(M_PI / 2.0, sp);
    return {std::atan2(-r(0, 1), r(1, 1)), pitch, 0.0};
  }
  return {std::atan2(r(1, 0), r(0, 0)), std::asin(sp), std::atan2(r(2, 1), r(2, 2))};
}

Mat3 rotation_from_euler(const Vec3& ypr) {
  return (Eigen::AngleAxisd(ypr[0], Vec3::UnitZ()) * Eigen::AngleAxisd(ypr[1], Vec3::UnitY()) *
          Eigen::AngleAxisd(ypr[2], Vec3::UnitX()))
      .toRotationMatrix();
}

}  // namespace cosserat
