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


#include "cosserat/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "cosserat/errors.hpp"

namespace cosserat {

TendonRouting::TendonRouting(Curve offset, Curve derivative)
    : offset_(std::move(offset)), derivative_(std::move(derivative)) {
  if (!offset_ || !derivative_) throw ConfigError("tendon routing needs D and D'");
}

TendonRouting TendonRouting::parallel(const Vec3& offset) {
  return {[offset](double) { return offset; }, [](double) { return Vec3::Zero().eval(); }};
}

TendonRouting TendonRouting::helical(double amplitude, double wavenumber) {
  return {[=](double s) {
            return Vec3(0.0, amplitude * std::sin(wavenumber * s),
                        amplitude * std::cos(wavenumber * s));
          },
          [=](double s) {
            return Vec3(0.0, amplitude * wavenumber * std::cos(wavenumber * s),
                        -amplitude * wavenumber * std::sin(wavenumber * s));
          }};
}

TendonRouting TendonRouting::sampled(double length, std::vector<Vec3> offsets) {
  const int n = static_cast<int>(offsets.size());
  if (n < 3) throw ConfigError("sampled routing needs at least 3 samples");
  if (!(length > 0.0)) throw ConfigError("sampled routing needs a positive length");
  const double h = length / (n - 1);
  std::vector<Vec3> slopes(n);
  slopes[0] = (-3.0 * offsets[0] + 4.0 * offsets[1] - offsets[2]) / (2.0 * h);
  slopes[n - 1] = (3.0 * offsets[n - 1] - 4.0 * offsets[n - 2] + offsets[n - 3]) / (2.0 * h);
  for (int i = 1; i < n - 1; ++i) slopes[i] = (offsets[i + 1] - offsets[i - 1]) / (2.0 * h);

  auto values = std::make_shared<const std::vector<Vec3>>(std::move(offsets));
  auto derivs = std::make_shared<const std::vector<Vec3>>(std::move(slopes));
  auto lerp = [h, n](const std::vector<Vec3>& v, double s) {
    const double x = std::clamp(s / h, 0.0, static_cast<double>(n - 1));
    const int i = std::min(static_cast<int>(x), n - 2);
    const double w = x - i;
    return ((1.0 - w) * v[i] + w * v[i + 1]).eval();
  };
  return {[values, lerp](double s) { return lerp(*values, s); },
          [derivs, lerp](double s) { return lerp(*derivs, s); }};
}

TendonRouting TendonRouting::scaled(double amplitude, double frequency) const {
  Curve d = offset_;
  Curve dd = derivative_;
  return {[=](double s) { return ((1.0 + amplitude * std::sin(frequency * s)) * d(s)).eval(); },
          [=](double s) {
            return ((1.0 + amplitude * std::sin(frequency * s)) * dd(s) +
                    amplitude * frequency * std::cos(frequency * s) * d(s))
                .eval();
          }};
}

std::vector<double> Actuation::tensions_at(double t) const {
  if (!schedule) return std::vector<double>(routings.size(), 0.0);
  std::vector<double> tau = schedule(t);
  if (tau.size() != routings.size()) {
    throw ConfigError("tension schedule yields " + std::to_string(tau.size()) +
                      " values for " + std::to_string(routings.size()) + " tendons");
  }
  for (double v : tau) {
    if (!(v <= 0.0)) throw ConfigError("tendon tension must be <= 0, got " + std::to_string(v));
  }
  return tau;
}

Vec3 tendon_tangent(const TendonRouting& routing, double s, const Twist& reference_strain) {
  const Vec3 d = routing.offset(s);
  const Vec3 tangent =
      linear(reference_strain) + angular(reference_strain).cross(d) + routing.derivative(s);
  if (!(tangent.norm() > 1e-12)) {
    throw DegenerateInputError("tendon tangent vanishes at s=" + std::to_string(s));
  }
  return tangent;
}

Twist tendon_unit_wrench(const TendonRouting& routing, double s, const Twist& reference_strain) {
  const Vec3 tangent = tendon_tangent(routing, s, reference_strain);
  const Vec3 d = routing.offset(s);
  return make_twist(d.cross(tangent), tangent) / tangent.norm();
}

Twist tendon_wrench(std::span<const TendonRouting> routings, std::span<const double> tensions,
                    double s, const Twist& reference_strain) {
  if (routings.size() != tensions.size()) {
    throw ConfigError("tendon_wrench: routing/tension count mismatch");
  }
  Twist phi = Twist::Zero();
  for (std::size_t i = 0; i < routings.size(); ++i) {
    phi += tensions[i] * tendon_unit_wrench(routings[i], s, reference_strain);
  }
  return phi;
}

std::array<double, 2> paper_tension_schedule(double t) {
  const double s = std::sin(t);
  return {-std::max(40.0 * s, 0.0), std::min(100.0 * s, 0.0)};
}

std::vector<TendonRouting> paper_routings() {
  return {TendonRouting::parallel(Vec3(0.0, -0.01, 0.01)),
          TendonRouting::helical(0.15, 4.0 * std::numbers::pi)};
}

TensionSchedule paper_schedule() {
  return [](double t) {
    const auto tau = paper_tension_schedule(t);
    return std::vector<double>(tau.begin(), tau.end());
  };
}

TensionSchedule constant_schedule(std::vector<double> tensions) {
  return [tensions = std::move(tensions)](double) { return tensions; };
}

Twist gravity_field(const RodParameters& params, double s) {
  return make_twist(Vec3::Zero(), params.linear_density(s) * params.gravity);
}

}  // namespace cosserat
