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


// Per-section Cosserat rod physics: constitutive laws, wrench assembly and the
// pointwise right-hand sides of the strain and velocity evolution equations.

#pragma once

#include <functional>
#include <optional>

#include "cosserat/se3.hpp"

namespace cosserat {

struct SectionProperties {
  Mat6 inertia = Mat6::Identity();    // J = diag(J1, J2)
  Mat6 stiffness = Mat6::Identity();  // K = diag(K1, K2)
  std::optional<Mat6> damping;        // D, viscoelastic option
  Twist reference_strain = make_twist(Vec3::Zero(), Vec3::UnitX());

  // Throws ConfigError if J or K is not SPD or D is not symmetric PSD.
  void validate() const;
};

// Homogeneous circular backbone. The x-axis is the longitudinal direction.
struct RodMaterial {
  double length_m = 0.5;
  double radius_m = 1e-3;
  double density_kg_m3 = 1.6e4;
  double youngs_modulus_pa = 207e9;
  double shear_modulus_pa = 79.6e9;
  // Multipliers on the axial/shear stiffness block K2 and the rotary inertia
  // block J1. Both are 1 for the physical rod; the "soft" preset lowers the
  // fastest wave speeds without changing bending statics.
  double axial_shear_stiffness_scale = 1.0;
  double rotary_inertia_scale = 1.0;
  // Kelvin-Voigt damping D = ratio * K when positive.
  double damping_ratio_s = 0.0;

  double area() const;
  double linear_density() const;
  SectionProperties section() const;
};

struct RodParameters {
  double length = 0.5;
  std::function<SectionProperties(double)> section_at;
  std::function<double(double)> linear_density;  // rho*A(s), kg/m
  Vec3 gravity = Vec3::Zero();                   // global frame, m/s^2
  Twist tip_load_global = Twist::Zero();         // psi_glb^+
  Twist tip_load_local = Twist::Zero();          // psi_loc^+
  std::function<Twist(double)> base_velocity;    // eta_-(t); empty means fixed
  Pose base_pose;

  Twist base_velocity_at(double t) const {
    return base_velocity ? base_velocity(t) : Twist::Zero();
  }

  // Checks length and the section invariants at `samples` evenly spaced s.
  void validate(int samples = 21) const;
};

// Uniform rod built from a material description. Gravity and tip load are
// left to the caller.
RodParameters make_uniform_rod(const RodMaterial& material);

// phi = K (xi - xi_o).
Twist constitutive(const Twist& xi, const SectionProperties& props);

// phi = K (xi - xi_o) + D xi_rate. Throws ConfigError without damping.
Twist constitutive_damped(const Twist& xi, const Twist& xi_rate,
                          const SectionProperties& props);

// Compatibility: d/dt xi = d/ds eta + ad_xi eta.
Twist strain_rate(const Twist& xi, const Twist& eta, const Twist& eta_ds);

// J d/dt eta. `wrench` is the total internal wrench phi + phi_loc.
Twist momentum_rate(const Twist& xi, const Twist& eta, const Twist& wrench,
                    const Twist& wrench_ds, const Twist& external, const Mat6& inertia);

Twist velocity_rate(const Twist& xi, const Twist& eta, const Twist& wrench,
                    const Twist& wrench_ds, const Twist& external,
                    const SectionProperties& props);

// Psi = psi_loc + T_R^T psi_glb.
Twist distributed_wrench(const Twist& local, const Twist& global, const Mat3& rotation);

// Psi_+ = psi_loc^+ + T_R(l)^T psi_glb^+.
Twist tip_wrench(const Twist& local, const Twist& global, const Mat3& tip_rotation);

}  // namespace cosserat
