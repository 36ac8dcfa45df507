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

#include <gtest/gtest.h>

#include "cosserat/errors.hpp"
#include "cosserat/rod.hpp"
#include "test_util.hpp"

namespace cosserat {
namespace {

using testing::max_abs;
using testing::random_rotation;
using testing::random_twist;
using testing::random_vec3;

constexpr double kPi = std::numbers::pi;

SectionProperties table1_section() { return RodMaterial{}.section(); }

TEST(Material, Table1SectionFormulas) {
  const RodMaterial m;
  const SectionProperties p = m.section();
  const double r = 1e-3, rho = 1.6e4, e = 207e9, g = 79.6e9;
  const double i = kPi * std::pow(r, 4) / 4.0, a = kPi * r * r;
  EXPECT_DOUBLE_EQ(p.inertia(0, 0), 2 * rho * i);
  EXPECT_DOUBLE_EQ(p.inertia(1, 1), rho * i);
  EXPECT_DOUBLE_EQ(p.inertia(5, 5), rho * a);
  EXPECT_DOUBLE_EQ(p.stiffness(0, 0), 2 * g * i);
  EXPECT_DOUBLE_EQ(p.stiffness(2, 2), e * i);
  EXPECT_DOUBLE_EQ(p.stiffness(3, 3), e * a);
  EXPECT_DOUBLE_EQ(p.stiffness(4, 4), g * a);
  EXPECT_EQ(p.reference_strain, make_twist(Vec3::Zero(), Vec3::UnitX()));
  EXPECT_NO_THROW(p.validate());
}

TEST(Material, SoftScalesOnlyTheirBlocks) {
  RodMaterial m;
  m.axial_shear_stiffness_scale = 0.01;
  m.rotary_inertia_scale = 100.0;
  const SectionProperties p = m.section(), q = table1_section();
  EXPECT_DOUBLE_EQ(p.stiffness(1, 1), q.stiffness(1, 1));
  EXPECT_DOUBLE_EQ(p.stiffness(3, 3), 0.01 * q.stiffness(3, 3));
  EXPECT_DOUBLE_EQ(p.inertia(0, 0), 100 * q.inertia(0, 0));
  EXPECT_DOUBLE_EQ(p.inertia(3, 3), q.inertia(3, 3));
}

TEST(Section, ValidateRejectsNonSpd) {
  SectionProperties p;
  p.stiffness(2, 2) = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  SectionProperties q;
  q.inertia(0, 1) = 0.5;
  EXPECT_THROW(q.validate(), ConfigError);
  SectionProperties d;
  d.damping = -Mat6::Identity();
  EXPECT_THROW(d.validate(), ConfigError);
}

TEST(Constitutive, ReferenceStrainGivesZero) {
  const SectionProperties p = table1_section();
  EXPECT_EQ(constitutive(p.reference_strain, p), Twist::Zero());
}

TEST(Constitutive, AxialStretchForce) {
  const SectionProperties p = table1_section();
  Twist xi = p.reference_strain;
  xi[3] = 1.01;
  const Twist phi = constitutive(xi, p);
  EXPECT_NEAR(phi[3], 0.01 * 207e9 * kPi * 1e-6, 1e-6);
  EXPECT_NEAR(phi[3], 6.503e3, 1.0);
}

TEST(Constitutive, AffineIdentity) {
  std::mt19937_64 rng(11);
  const SectionProperties p = table1_section();
  for (int k = 0; k < 100; ++k) {
    const Twist a = random_twist(rng), b = random_twist(rng);
    const Twist lhs = constitutive(a, p) + constitutive(b, p) - constitutive(p.reference_strain, p);
    const Twist rhs = constitutive(a + b - p.reference_strain, p);
    EXPECT_LT(max_abs(lhs - rhs), 1e-9 * max_abs(rhs));
  }
}

TEST(ConstitutiveDamped, ZeroRateAndUnitRate) {
  SectionProperties p = table1_section();
  p.damping = 3.0 * Mat6::Identity();
  std::mt19937_64 rng(12);
  const Twist xi = random_twist(rng);
  EXPECT_EQ(constitutive_damped(xi, Twist::Zero(), p), constitutive(xi, p));
  Twist e4 = Twist::Zero();
  e4[3] = 1.0;
  EXPECT_EQ(constitutive_damped(p.reference_strain, e4, p), 3.0 * e4);
  SectionProperties undamped = table1_section();
  EXPECT_THROW(constitutive_damped(xi, e4, undamped), ConfigError);
}

TEST(StrainRate, StaticRodAndHandEvaluatedBracket) {
  const Twist xi = make_twist(Vec3::Zero(), Vec3::UnitX());
  EXPECT_EQ(strain_rate(xi, Twist::Zero(), Twist::Zero()), Twist::Zero());
  const Twist eta = make_twist(Vec3::UnitZ(), Vec3::Zero());
  Twist expected = Twist::Zero();
  expected[4] = -1.0;
  EXPECT_LT(max_abs(strain_rate(xi, eta, Twist::Zero()) - expected), 1e-15);
}

TEST(VelocityRate, StaticBalance) {
  // At rest the rate is J^-1 (phi' - ad_xi^T phi + psi), so a constant wrench
  // is balanced by psi = ad_xi^T phi.
  std::mt19937_64 rng(13);
  const SectionProperties p = table1_section();
  const Twist xi = random_twist(rng);
  const Twist phi = random_twist(rng);
  const Twist psi = adjoint(xi).transpose() * phi;
  const Twist rate = velocity_rate(xi, Twist::Zero(), phi, Twist::Zero(), psi, p);
  EXPECT_LT(max_abs(rate), 1e-12);
}

TEST(VelocityRate, StraightRodAtRest) {
  const SectionProperties p = table1_section();
  const Twist rate = velocity_rate(p.reference_strain, Twist::Zero(), Twist::Zero(),
                                   Twist::Zero(), Twist::Zero(), p);
  EXPECT_EQ(rate, Twist::Zero());
}

TEST(VelocityRate, FreeSectionFollowsEulerEquation) {
  std::mt19937_64 rng(14);
  SectionProperties p;
  Twist diag;
  diag << 1.0, 2.0, 3.5, 1.0, 1.0, 1.0;
  p.inertia = diag.asDiagonal();
  for (int k = 0; k < 50; ++k) {
    const Vec3 w = random_vec3(rng);
    const Twist eta = make_twist(w, Vec3::Zero());
    const Twist rate = velocity_rate(random_twist(rng), eta, Twist::Zero(), Twist::Zero(),
                                     Twist::Zero(), p);
    const Mat3 j1 = p.inertia.topLeftCorner<3, 3>();
    const Vec3 euler = j1.inverse() * (j1 * w).cross(w);
    EXPECT_LT(max_abs(angular(rate) - euler), 1e-14);
    EXPECT_LT(max_abs(linear(rate)), 1e-14);
  }
}

TEST(DistributedWrench, FrameCases) {
  std::mt19937_64 rng(15);
  const Twist loc = random_twist(rng), glb = random_twist(rng);
  EXPECT_LT(max_abs(distributed_wrench(loc, glb, Mat3::Identity()) - (loc + glb)), 1e-15);
  EXPECT_EQ(distributed_wrench(loc, Twist::Zero(), random_rotation(rng)), loc);

  const double w = 1.6e4 * kPi * 1e-6 * 9.81;
  const Twist gravity = make_twist(Vec3::Zero(), Vec3(0, 0, -w));
  const Mat3 flip = exp_so3(Vec3(kPi, 0, 0));
  const Twist local = distributed_wrench(Twist::Zero(), gravity, flip);
  EXPECT_NEAR(local[5], w, 1e-15);
}

TEST(TipWrench, OneNewtonDown) {
  const Twist load = make_twist(Vec3::Zero(), Vec3(0, 0, -1));
  const Twist w = tip_wrench(Twist::Zero(), load, Mat3::Identity());
  EXPECT_EQ(linear(w), Vec3(0, 0, -1));
  EXPECT_EQ(tip_wrench(Twist::Zero(), Twist::Zero(), Mat3::Identity()), Twist::Zero());
  std::mt19937_64 rng(16);
  for (int k = 0; k < 100; ++k) {
    EXPECT_NEAR(linear(tip_wrench(Twist::Zero(), load, random_rotation(rng))).norm(), 1.0,
                1e-14);
  }
}

TEST(RodParameters, ValidateChecksSamples) {
  RodParameters p = make_uniform_rod(RodMaterial{});
  EXPECT_NO_THROW(p.validate());
  p.section_at = [](double s) {
    SectionProperties q;
    if (s > 0.4) q.stiffness(0, 0) = -1.0;
    return q;
  };
  EXPECT_THROW(p.validate(), ConfigError);
  RodParameters bad = make_uniform_rod(RodMaterial{});
  bad.length = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

}  // namespace
}  // namespace cosserat
