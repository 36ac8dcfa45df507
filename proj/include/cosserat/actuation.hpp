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


// Tendon actuation: routing geometry and tension signals mapped to the
// internal actuation wrench phi_loc, plus the gravity load field.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "cosserat/rod.hpp"
#include "cosserat/se3.hpp"

namespace cosserat {

// Position D(s) of a tendon in the cross-section frame and its arc-length
// derivative D'(s).
class TendonRouting {
 public:
  using Curve = std::function<Vec3(double)>;

  TendonRouting(Curve offset, Curve derivative);

  // D(s) = offset, D'(s) = 0.
  static TendonRouting parallel(const Vec3& offset);
  // D(s) = [0, a sin(k s), a cos(k s)].
  static TendonRouting helical(double amplitude, double wavenumber);
  // Piecewise-linear through (s_i, D_i) on an evenly spaced grid; D' from
  // central differences with one-sided second-order ends, using the sample
  // spacing as the step.
  static TendonRouting sampled(double length, std::vector<Vec3> offsets);

  // D(s) (1 + amplitude sin(frequency s)), derivative by the product rule.
  TendonRouting scaled(double amplitude, double frequency = 20.0) const;

  Vec3 offset(double s) const { return offset_(s); }
  Vec3 derivative(double s) const { return derivative_(s); }

 private:
  Curve offset_;
  Curve derivative_;
};

// Tendon tensions in N, one per routing, all <= 0.
using TensionSchedule = std::function<std::vector<double>(double)>;

struct Actuation {
  std::vector<TendonRouting> routings;
  TensionSchedule schedule;

  // Tensions at time t. Throws ConfigError on a count mismatch or a positive
  // tension. Empty schedule means all tendons slack.
  std::vector<double> tensions_at(double t) const;
};

// T = q_o + u_o^ D + D'. Throws DegenerateInputError on a vanishing tangent.
Vec3 tendon_tangent(const TendonRouting& routing, double s, const Twist& reference_strain);

// Unit-tension wrench column [D^ T; T] / |T| of one tendon.
Twist tendon_unit_wrench(const TendonRouting& routing, double s, const Twist& reference_strain);

// phi_loc(s) = sum_i [D_i^ T_i; T_i] tau_i / |T_i|.
Twist tendon_wrench(std::span<const TendonRouting> routings, std::span<const double> tensions,
                    double s, const Twist& reference_strain);

// tau_1 = -[40 sin t]_+, tau_2 = [100 sin t]_-  (N).
std::array<double, 2> paper_tension_schedule(double t);

// The two routings of the reference experiment: a parallel tendon at
// [0, -0.01, 0.01] and a helical tendon [0, 0.15 sin(4 pi s), 0.15 cos(4 pi s)].
std::vector<TendonRouting> paper_routings();

TensionSchedule paper_schedule();
TensionSchedule constant_schedule(std::vector<double> tensions);

// Global-frame gravity wrench density [0; rho A(s) g].
Twist gravity_field(const RodParameters& params, double s);

}  // namespace cosserat
