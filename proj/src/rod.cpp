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


#include "cosserat/rod.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cosserat/errors.hpp"

namespace cosserat {

namespace {

bool is_symmetric(const Mat6& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

void SectionProperties::validate() const {
  if (!is_symmetric(inertia) || inertia.llt().info() != Eigen::Success) {
    throw ConfigError("section inertia J must be symmetric positive definite");
  }
  if (!is_symmetric(stiffness) || stiffness.llt().info() != Eigen::Success) {
    throw ConfigError("section stiffness K must be symmetric positive definite");
  }
  if (damping) {
    if (!is_symmetric(*damping)) throw ConfigError("damping D must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat6> eig(*damping);
    const double scale = std::max(1.0, damping->cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
      throw ConfigError("damping D must be positive semidefinite");
    }
  }
  if (!reference_strain.allFinite()) throw ConfigError("reference strain must be finite");
}

double RodMaterial::area() const { return std::numbers::pi * radius_m * radius_m; }

double RodMaterial::linear_density() const { return density_kg_m3 * area(); }

SectionProperties RodMaterial::section() const {
  const double a = area();
  const double i = std::numbers::pi * std::pow(radius_m, 4) / 4.0;
  const double e = youngs_modulus_pa;
  const double g = shear_modulus_pa;
  const double rho = density_kg_m3;

  SectionProperties p;
  Twist j, k;
  j << 2.0 * rho * i * rotary_inertia_scale, rho * i * rotary_inertia_scale,
      rho * i * rotary_inertia_scale, rho * a, rho * a, rho * a;
  k << 2.0 * g * i, e * i, e * i, e * a * axial_shear_stiffness_scale,
      g * a * axial_shear_stiffness_scale, g * a * axial_shear_stiffness_scale;
  p.inertia = j.asDiagonal();
  p.stiffness = k.asDiagonal();
  if (damping_ratio_s > 0.0) p.damping = damping_ratio_s * p.stiffness;
  return p;
}

void RodParameters::validate(int samples) const {
  if (!(length > 0.0)) throw ConfigError("rod length must be positive");
  if (!section_at) throw ConfigError("rod has no section properties");
  if (!linear_density) throw ConfigError("rod has no linear density");
  if (!is_rotation(base_pose.rotation)) throw ConfigError("base pose rotation is invalid");
  for (int k = 0; k < samples; ++k) {
    const double s = length * k / std::max(1, samples - 1);
    try {
      section_at(s).validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " at s=" + std::to_string(s));
    }
    if (!(linear_density(s) >= 0.0)) throw ConfigError("linear density must be >= 0");
  }
}

RodParameters make_uniform_rod(const RodMaterial& material) {
  RodParameters params;
  params.length = material.length_m;
  const SectionProperties section = material.section();
  params.section_at = [section](double) { return section; };
  const double rho_a = material.linear_density();
  params.linear_density = [rho_a](double) { return rho_a; };
  return params;
}

Twist constitutive(const Twist& xi, const SectionProperties& props) {
  return props.stiffness * (xi - props.reference_strain);
}

Twist constitutive_damped(const Twist& xi, const Twist& xi_rate,
                          const SectionProperties& props) {
  if (!props.damping) {
    throw ConfigError("constitutive_damped requires a damping matrix");
  }
  return constitutive(xi, props) + *props.damping * xi_rate;
}

Twist strain_rate(const Twist& xi, const Twist& eta, const Twist& eta_ds) {
  return eta_ds + adjoint_apply(xi, eta);
}

Twist momentum_rate(const Twist& xi, const Twist& eta, const Twist& wrench,
                    const Twist& wrench_ds, const Twist& external, const Mat6& inertia) {
  return wrench_ds - adjoint_transpose_apply(xi, wrench) +
         adjoint_transpose_apply(eta, inertia * eta) + external;
}

Twist velocity_rate(const Twist& xi, const Twist& eta, const Twist& wrench,
                    const Twist& wrench_ds, const Twist& external,
                    const SectionProperties& props) {
  return props.inertia.ldlt().solve(
      momentum_rate(xi, eta, wrench, wrench_ds, external, props.inertia));
}

Twist distributed_wrench(const Twist& local, const Twist& global, const Mat3& rotation) {
  return local + make_twist(rotation.transpose() * angular(global),
                            rotation.transpose() * linear(global));
}

Twist tip_wrench(const Twist& local, const Twist& global, const Mat3& tip_rotation) {
  return distributed_wrench(local, global, tip_rotation);
}

}  // namespace cosserat
