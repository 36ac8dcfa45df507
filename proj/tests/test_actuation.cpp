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

#include "cosserat/actuation.hpp"
#include "cosserat/errors.hpp"
#include "test_util.hpp"

namespace cosserat {
namespace {

using testing::max_abs;

constexpr double kPi = std::numbers::pi;
const Twist kStraight = make_twist(Vec3::Zero(), Vec3::UnitX());

TEST(TendonTangent, ParallelAndHelical) {
  const auto routes = paper_routings();
  EXPECT_LT(max_abs(tendon_tangent(routes[0], 0.3, kStraight) - Vec3::UnitX()), 1e-15);
  EXPECT_LT(max_abs(tendon_tangent(routes[1], 0.0, kStraight) - Vec3(1, 0.6 * kPi, 0)), 1e-14);
  const auto offset = TendonRouting::parallel(Vec3(0, 0.2, -0.1));
  for (double s : {0.0, 0.1, 0.5}) {
    EXPECT_EQ(tendon_tangent(offset, s, kStraight), Vec3::UnitX());
  }
}

TEST(TendonTangent, VanishingTangentThrows) {
  const auto r = TendonRouting::parallel(Vec3::Zero());
  EXPECT_THROW(tendon_tangent(r, 0.1, Twist::Zero()), DegenerateInputError);
}

TEST(TendonWrench, ZeroTensionAndParallelPull) {
  const auto routes = paper_routings();
  const std::vector<double> zero = {0.0, 0.0};
  EXPECT_EQ(tendon_wrench(routes, zero, 0.2, kStraight), Twist::Zero());

  const std::vector<TendonRouting> one = {routes[0]};
  const std::vector<double> tau = {-40.0};
  const Twist w = tendon_wrench(one, tau, 0.37, kStraight);
  EXPECT_LT(max_abs(linear(w) - Vec3(-40, 0, 0)), 1e-12);
  EXPECT_LT(max_abs(angular(w) - Vec3(0, -0.4, -0.4)), 1e-12);
}

TEST(TendonWrench, LinearInTension) {
  const auto routes = paper_routings();
  const std::vector<double> a = {-3.0, -7.0}, b = {-6.0, -14.0};
  for (double s : {0.0, 0.13, 0.5}) {
    EXPECT_LT(max_abs(tendon_wrench(routes, b, s, kStraight) -
                      2.0 * tendon_wrench(routes, a, s, kStraight)),
              1e-12);
  }
  const std::vector<double> wrong = {-1.0};
  EXPECT_THROW(tendon_wrench(routes, wrong, 0.1, kStraight), ConfigError);
}

TEST(PaperSchedule, KeyTimes) {
  auto at = [](double t) { return paper_tension_schedule(t); };
  EXPECT_NEAR(at(kPi / 2)[0], -40.0, 1e-12);
  EXPECT_NEAR(at(kPi / 2)[1], 0.0, 1e-12);
  EXPECT_NEAR(at(3 * kPi / 2)[0], 0.0, 1e-12);
  EXPECT_NEAR(at(3 * kPi / 2)[1], -100.0, 1e-12);
  EXPECT_EQ(at(0.0)[0], 0.0);
  EXPECT_EQ(at(0.0)[1], 0.0);
}

TEST(Actuation, TensionChecks) {
  Actuation a;
  a.routings = paper_routings();
  EXPECT_EQ(a.tensions_at(1.0), std::vector<double>(2, 0.0));
  a.schedule = constant_schedule({-1.0, 2.0});
  EXPECT_THROW(a.tensions_at(0.0), ConfigError);
  a.schedule = constant_schedule({-1.0});
  EXPECT_THROW(a.tensions_at(0.0), ConfigError);
  a.schedule = paper_schedule();
  EXPECT_EQ(a.tensions_at(kPi / 2)[0], -40.0);
}

TEST(GravityField, ValuesAndLinearity) {
  RodParameters p = make_uniform_rod(RodMaterial{});
  p.gravity = Vec3(0, 0, -9.81);
  const Twist g = gravity_field(p, 0.2);
  EXPECT_NEAR(g[5], -0.4931, 1e-4);
  EXPECT_NEAR(g[5], -1.6e4 * kPi * 1e-6 * 9.81, 1e-15);
  EXPECT_EQ(angular(g), Vec3::Zero());
  RodMaterial heavy;
  heavy.density_kg_m3 *= 2.0;
  RodParameters q = make_uniform_rod(heavy);
  q.gravity = p.gravity;
  EXPECT_NEAR(gravity_field(q, 0.2)[5], 2.0 * g[5], 1e-15);
  p.gravity.setZero();
  EXPECT_EQ(gravity_field(p, 0.2), Twist::Zero());
}

TEST(Routing, ScaledOffsetsAndProductRule) {
  const auto base = paper_routings()[1];
  const double s_peak = kPi / 40.0;  // sin(20 s) = 1
  EXPECT_LT(max_abs(base.scaled(0.0).offset(0.3) - base.offset(0.3)), 1e-16);
  EXPECT_LT(max_abs(base.scaled(0.1).offset(s_peak) - 1.1 * base.offset(s_peak)), 1e-15);

  // Central differences of the scaled offset against the analytic derivative.
  const TendonRouting r = base.scaled(0.1);
  double previous = 0.0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const double s = 0.21;
    const Vec3 fd = (r.offset(s + h) - r.offset(s - h)) / (2 * h);
    const double err = max_abs(fd - r.derivative(s));
    if (previous > 0.0) {
      EXPECT_NEAR(previous / err, 4.0, 0.1);
    }
    previous = err;
  }
}

TEST(Routing, SampledReproducesLinearData) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 11; ++i) pts.push_back(Vec3(0, 0.01 * i, -0.02 * i));
  const TendonRouting r = TendonRouting::sampled(0.5, pts);
  EXPECT_LT(max_abs(r.offset(0.125) - Vec3(0, 0.025, -0.05)), 1e-15);
  EXPECT_LT(max_abs(r.derivative(0.33) - Vec3(0, 0.2, -0.4)), 1e-13);
  EXPECT_THROW(TendonRouting::sampled(0.5, {Vec3::Zero(), Vec3::Zero()}), ConfigError);
}

}  // namespace
}  // namespace cosserat
