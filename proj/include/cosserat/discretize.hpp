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


// Method-of-lines discretization of the rod PDE on a collocated grid:
// spatial derivative operators, boundary handling, RK4 time stepping, pose
// reconstruction and the energy functional.
//
// Tip wrench condition (default kPenalty): the tip momentum equation gets the
// penalty (2/h) (Psi_+ - Phi_N). With the summation-by-parts derivative and
// trapezoidal weights the discrete energy then changes only by the work of
// the tip wrench.
//
// A measurement gain enters each step as a frozen wrench -Gamma e0,
// e0 = eta_N - m at the step start. After the RK4 update the tip velocity is
// corrected so that the error relaxes with the exact propagator of
// (h/2) J de/dt = -Gamma e over the step, which keeps the update stable for
// any Gamma and leaves a matched estimate on the measurement.
//
// kStrong overwrites the tip strain so that the constitutive law reproduces
// the target wrench, with second-order one-sided stencils. It is explicit in
// the gain and is only stable while Gamma dt / (h J) stays small.
//
// Optional velocity hyperviscosity: the collocated central stencil does not
// see the node-to-node alternating mode, so nothing removes it once boundary
// transients excite it. The term
//   d eta_i/dt -= sigma (c/h) (h/w_i) J_i^-1 Jbar (D4^T D4 eta)_i,
// with D4 the undivided second difference and Jbar the grid mean of J, adds
// -2 sigma (c/h) h |D4 eta|^2_Jbar to the energy rate. It vanishes at rest and
// on smooth fields to O(h^3).

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cosserat/actuation.hpp"
#include "cosserat/rod.hpp"
#include "cosserat/se3.hpp"

namespace cosserat {

class Grid {
 public:
  // Throws ConfigError when nodes < 5 or length <= 0.
  Grid(double length, int nodes);

  int nodes() const { return nodes_; }
  double length() const { return length_; }
  double spacing() const { return length_ / (nodes_ - 1); }
  double node(int i) const { return i * spacing(); }
  // Trapezoidal quadrature weight of node i.
  double weight(int i) const {
    return (i == 0 || i == nodes_ - 1) ? 0.5 * spacing() : spacing();
  }

  bool operator==(const Grid&) const = default;

 private:
  double length_;
  int nodes_;
};

struct SimulationState {
  double time = 0.0;
  long step_count = 0;
  std::vector<Twist> strain;    // xi_i
  std::vector<Twist> velocity;  // eta_i
  std::vector<Pose> poses;      // g_i, reconstructed from strain

  int size() const { return static_cast<int>(strain.size()); }
};

enum class DerivativeScheme {
  kSecondOrder,        // central interior, second-order one-sided ends
  kSummationByParts,   // central interior, first-order ends (diagonal-norm SBP)
};

enum class TipCondition { kPenalty, kStrong };

struct IntegratorConfig {
  double dt = 0.0;  // <= 0 selects stable_dt
  double cfl_safety = 0.5;
  double end_time = 2.0;
  int reorthonormalize_every = 100;
  TipCondition tip = TipCondition::kPenalty;
  double dissipation = 0.0;  // sigma of the velocity hyperviscosity, >= 0
};

std::vector<Twist> spatial_derivative(std::span<const Twist> field, double spacing,
                                      DerivativeScheme scheme = DerivativeScheme::kSecondOrder);

// Fastest characteristic speed max_s sqrt(eig(K J^-1)). Throws ConfigError
// when J or K is not SPD at a grid node.
double max_wave_speed(const RodParameters& params, const Grid& grid);

// cfl_safety * h / c_max.
double cfl_dt(const RodParameters& params, const Grid& grid, double cfl_safety = 0.5);

// Highest frequency of the zero-wavenumber shear/rotation coupling,
// max_s sqrt(eig(J^-1 ad_xio^T K ad_xio)).
double coupling_frequency(const RodParameters& params, const Grid& grid);

// min(cfl_dt, cfl_safety * 2 / coupling_frequency).
double stable_dt(const RodParameters& params, const Grid& grid, double cfl_safety = 0.5);

// Discretized plant: per-node coefficients and inputs sampled on a grid.
class RodModel {
 public:
  RodModel(RodParameters params, Actuation actuation, Grid grid);

  const Grid& grid() const { return grid_; }
  const RodParameters& params() const { return params_; }
  const Actuation& actuation() const { return actuation_; }

  const SectionProperties& section(int i) const { return nodes_[i].section; }
  const Mat6& inertia_inverse(int i) const { return nodes_[i].inertia_inv; }
  const Mat6& stiffness_inverse(int i) const { return nodes_[i].stiffness_inv; }

  bool has_gravity() const { return has_gravity_; }
  bool has_global_tip_load() const { return has_global_tip_load_; }
  double wave_speed() const { return wave_speed_; }
  // J_i^-1 Jbar, Jbar the grid mean of J.
  const Mat6& inertia_mix(int i) const { return nodes_[i].inertia_mix; }

  // phi_loc at every node for time t.
  std::vector<Twist> actuation_wrench(double t) const;
  // Global-frame gravity wrench density at node i.
  Twist gravity(int i) const { return make_twist(Vec3::Zero(), nodes_[i].weight_density); }

 private:
  struct Node {
    SectionProperties section;
    Mat6 inertia_inv;
    Mat6 stiffness_inv;
    Mat6 inertia_mix;
    Vec3 weight_density;
    std::vector<Twist> tendon_columns;
  };

  RodParameters params_;
  Actuation actuation_;
  Grid grid_;
  std::vector<Node> nodes_;
  bool has_gravity_ = false;
  bool has_global_tip_load_ = false;
  double wave_speed_ = 0.0;
};

// Boundary measurement feedback: a virtual tip wrench -gain (eta_N - m(t)).
struct TipInjection {
  Mat6 gain = Mat6::Zero();
  std::function<Twist(double)> measured_velocity;
  // When set and the model has a global tip load, Psi_+ is evaluated with
  // this rotation at the step start, advanced within the step by the
  // estimate's own tip rotation increment.
  std::function<Mat3(double)> measured_rotation;
};

// Tip boundary inputs at one time instant.
struct TipInputs {
  Twist correction = Twist::Zero();   // added to Psi_+, e.g. -Gamma (eta_N - m)
  std::optional<Mat3> rotation;       // overrides R(l) in Psi_+
};

SimulationState make_state(const Grid& grid, const Twist& strain, const Pose& base_pose);

// g_{i+1} = g_i exp(h (xi_i + xi_{i+1}) / 2).
std::vector<Pose> reconstruct_poses(std::span<const Twist> strain, double spacing,
                                    const Pose& base_pose);

// Target total tip wrench Psi_+ + correction for the current state.
Twist tip_target(const SimulationState& state, const RodModel& model, const TipInputs& tip);

// Sets eta_0 = eta_-(t). With kStrong also sets xi_N so that
// K (xi_N - xi_o) + phi_loc(l) = Psi_+ + correction. Returns the target.
Twist apply_boundary_conditions(SimulationState& state, const RodModel& model,
                                const Twist& tip_actuation, const TipInputs& tip,
                                TipCondition condition);

struct StateRates {
  std::vector<Twist> strain;
  std::vector<Twist> velocity;
};

// Semi-discrete right-hand side. Boundary conditions must already be applied.
StateRates rhs(const SimulationState& state, const RodModel& model, const TipInputs& tip,
               TipCondition condition, double dissipation = 0.0);

// One RK4 step of size dt. Throws DivergenceError on non-finite values.
SimulationState step(const SimulationState& state, const RodModel& model, double dt,
                     const IntegratorConfig& config, const TipInjection* injection = nullptr);

// Integral of eta^T J eta + phi^T K^-1 phi, phi = K (xi - xi_o), trapezoidal.
double total_energy(const SimulationState& state, const RodModel& model);

// 1/2 integral of eta^T J eta.
double kinetic_energy(const SimulationState& state, const RodModel& model);

}  // namespace cosserat
