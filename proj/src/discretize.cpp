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


#include "cosserat/discretize.hpp"

#include <cmath>
#include <string>

#include "cosserat/errors.hpp"

namespace cosserat {

Grid::Grid(double length, int nodes) : length_(length), nodes_(nodes) {
  if (nodes < 5) throw ConfigError("grid needs at least 5 nodes, got " + std::to_string(nodes));
  if (!(length > 0.0)) throw ConfigError("grid length must be positive");
}

std::vector<Twist> spatial_derivative(std::span<const Twist> field, double spacing,
                                      DerivativeScheme scheme) {
  const int n = static_cast<int>(field.size());
  std::vector<Twist> out(n);
  if (n < 3) throw ConfigError("spatial_derivative needs at least 3 samples");
  const double inv2h = 0.5 / spacing;
  for (int i = 1; i < n - 1; ++i) out[i] = (field[i + 1] - field[i - 1]) * inv2h;
  if (scheme == DerivativeScheme::kSecondOrder) {
    out[0] = (-3.0 * field[0] + 4.0 * field[1] - field[2]) * inv2h;
    out[n - 1] = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) * inv2h;
  } else {
    out[0] = (field[1] - field[0]) / spacing;
    out[n - 1] = (field[n - 1] - field[n - 2]) / spacing;
  }
  return out;
}

double max_wave_speed(const RodParameters& params, const Grid& grid) {
  double c_max = 0.0;
  for (int i = 0; i < grid.nodes(); ++i) {
    const SectionProperties p = params.section_at(grid.node(i));
    p.validate();
    // eig(K J^-1) = eig(L^-1 K L^-T) with J = L L^T.
    const Eigen::LLT<Mat6> llt(p.inertia);
    const Mat6 l_inv = llt.matrixL().solve(Mat6::Identity());
    const Mat6 s = l_inv * p.stiffness * l_inv.transpose();
    Eigen::SelfAdjointEigenSolver<Mat6> eig(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
    c_max = std::max(c_max, std::sqrt(eig.eigenvalues().maxCoeff()));
  }
  return c_max;
}

double cfl_dt(const RodParameters& params, const Grid& grid, double cfl_safety) {
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw ConfigError("cfl_safety must lie in (0, 1]");
  }
  return cfl_safety * grid.spacing() / max_wave_speed(params, grid);
}

double coupling_frequency(const RodParameters& params, const Grid& grid) {
  double w_max = 0.0;
  for (int i = 0; i < grid.nodes(); ++i) {
    const SectionProperties p = params.section_at(grid.node(i));
    const Mat6 ad = adjoint(p.reference_strain);
    const Mat6 k = ad.transpose() * p.stiffness * ad;
    const Eigen::LLT<Mat6> llt(p.inertia);
    const Mat6 l_inv = llt.matrixL().solve(Mat6::Identity());
    const Mat6 s = l_inv * k * l_inv.transpose();
    Eigen::SelfAdjointEigenSolver<Mat6> eig(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
    w_max = std::max(w_max, std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff())));
  }
  return w_max;
}

double stable_dt(const RodParameters& params, const Grid& grid, double cfl_safety) {
  const double dt = cfl_dt(params, grid, cfl_safety);
  const double w = coupling_frequency(params, grid);
  return w > 0.0 ? std::min(dt, cfl_safety * 2.0 / w) : dt;
}

RodModel::RodModel(RodParameters params, Actuation actuation, Grid grid)
    : params_(std::move(params)), actuation_(std::move(actuation)), grid_(grid) {
  params_.validate();
  if (std::abs(grid_.length() - params_.length) > 1e-12 * params_.length) {
    throw ConfigError("grid length does not match rod length");
  }
  nodes_.reserve(grid_.nodes());
  for (int i = 0; i < grid_.nodes(); ++i) {
    const double s = grid_.node(i);
    Node node;
    node.section = params_.section_at(s);
    node.section.validate();
    node.inertia_inv = node.section.inertia.inverse();
    node.stiffness_inv = node.section.stiffness.inverse();
    node.weight_density = params_.linear_density(s) * params_.gravity;
    for (const auto& routing : actuation_.routings) {
      node.tendon_columns.push_back(
          tendon_unit_wrench(routing, s, node.section.reference_strain));
    }
    nodes_.push_back(std::move(node));
  }
  Mat6 mean = Mat6::Zero();
  for (int i = 0; i < grid_.nodes(); ++i) mean += grid_.weight(i) * nodes_[i].section.inertia;
  mean /= grid_.length();
  for (Node& node : nodes_) node.inertia_mix = node.inertia_inv * mean;
  wave_speed_ = max_wave_speed(params_, grid_);
  has_gravity_ = params_.gravity.squaredNorm() > 0.0;
  has_global_tip_load_ = params_.tip_load_global.squaredNorm() > 0.0;
}

std::vector<Twist> RodModel::actuation_wrench(double t) const {
  std::vector<Twist> phi(nodes_.size(), Twist::Zero());
  if (actuation_.routings.empty()) return phi;
  const std::vector<double> tau = actuation_.tensions_at(t);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t k = 0; k < tau.size(); ++k) phi[i] += tau[k] * nodes_[i].tendon_columns[k];
  }
  return phi;
}

SimulationState make_state(const Grid& grid, const Twist& strain, const Pose& base_pose) {
  SimulationState state;
  state.strain.assign(grid.nodes(), strain);
  state.velocity.assign(grid.nodes(), Twist::Zero());
  state.poses = reconstruct_poses(state.strain, grid.spacing(), base_pose);
  return state;
}

std::vector<Pose> reconstruct_poses(std::span<const Twist> strain, double spacing,
                                    const Pose& base_pose) {
  std::vector<Pose> poses(strain.size());
  if (strain.empty()) return poses;
  poses[0] = base_pose;
  for (std::size_t i = 0; i + 1 < strain.size(); ++i) {
    const Twist mid = 0.5 * (strain[i] + strain[i + 1]);
    poses[i + 1] = poses[i] * exp_se3(mid, spacing);
  }
  return poses;
}

Twist tip_target(const SimulationState& state, const RodModel& model, const TipInputs& tip) {
  const RodParameters& p = model.params();
  Twist target = p.tip_load_local + tip.correction;
  if (model.has_global_tip_load()) {
    const Mat3& r = tip.rotation ? *tip.rotation : state.poses.back().rotation;
    target += tip_wrench(Twist::Zero(), p.tip_load_global, r);
  }
  return target;
}

Twist apply_boundary_conditions(SimulationState& state, const RodModel& model,
                                const Twist& tip_actuation, const TipInputs& tip,
                                TipCondition condition) {
  state.velocity.front() = model.params().base_velocity_at(state.time);
  const Twist target = tip_target(state, model, tip);
  if (condition == TipCondition::kStrong) {
    const int n = state.size() - 1;
    const SectionProperties& sec = model.section(n);
    state.strain[n] = sec.reference_strain + model.stiffness_inverse(n) * (target - tip_actuation);
  }
  return target;
}

StateRates rhs(const SimulationState& state, const RodModel& model, const TipInputs& tip,
               TipCondition condition, double dissipation) {
  if (dissipation < 0.0) throw ConfigError("dissipation must be non-negative");
  const int n = state.size();
  const double h = model.grid().spacing();
  const auto scheme = condition == TipCondition::kPenalty ? DerivativeScheme::kSummationByParts
                                                          : DerivativeScheme::kSecondOrder;
  const std::vector<Twist> phi_loc = model.actuation_wrench(state.time);

  StateRates rates;
  const std::vector<Twist> eta_ds = spatial_derivative(state.velocity, h, scheme);
  rates.strain.resize(n);
  for (int i = 0; i < n; ++i) {
    rates.strain[i] = strain_rate(state.strain[i], state.velocity[i], eta_ds[i]);
  }

  std::vector<Twist> wrench(n);
  for (int i = 0; i < n; ++i) {
    const SectionProperties& sec = model.section(i);
    wrench[i] = sec.damping ? constitutive_damped(state.strain[i], rates.strain[i], sec)
                            : constitutive(state.strain[i], sec);
    wrench[i] += phi_loc[i];
  }
  const std::vector<Twist> wrench_ds = spatial_derivative(wrench, h, scheme);

  rates.velocity.resize(n);
  rates.velocity[0].setZero();
  for (int i = 1; i < n; ++i) {
    const SectionProperties& sec = model.section(i);
    Twist external = Twist::Zero();
    if (model.has_gravity()) {
      external = distributed_wrench(Twist::Zero(), model.gravity(i), state.poses[i].rotation);
    }
    Twist momentum = momentum_rate(state.strain[i], state.velocity[i], wrench[i], wrench_ds[i],
                                   external, sec.inertia);
    if (i == n - 1 && condition == TipCondition::kPenalty) {
      momentum += (2.0 / h) * (tip_target(state, model, tip) - wrench[i]);
    }
    rates.velocity[i] = model.inertia_inverse(i) * momentum;
  }
  if (dissipation > 0.0) {
    std::vector<Twist> d2(n, Twist::Zero());
    for (int k = 1; k + 1 < n; ++k) {
      d2[k] = state.velocity[k - 1] - 2.0 * state.velocity[k] + state.velocity[k + 1];
    }
    const double scale = dissipation * model.wave_speed() / h;
    for (int i = 1; i < n; ++i) {
      Twist d4 = d2[i - 1] - 2.0 * d2[i];
      if (i + 1 < n) d4 += d2[i + 1];
      const double inv_weight = h / model.grid().weight(i);
      rates.velocity[i] -= scale * inv_weight * (model.inertia_mix(i) * d4);
    }
  }
  if (condition == TipCondition::kStrong) rates.strain[n - 1].setZero();
  return rates;
}

namespace {

void axpy_state(SimulationState& out, const SimulationState& base, const StateRates& k,
                double a) {
  for (int i = 0; i < base.size(); ++i) {
    out.strain[i] = base.strain[i] + a * k.strain[i];
    out.velocity[i] = base.velocity[i] + a * k.velocity[i];
  }
}

void check_finite(const SimulationState& s) {
  for (int i = 0; i < s.size(); ++i) {
    if (!s.strain[i].allFinite() || !s.velocity[i].allFinite()) {
      throw DivergenceError("non-finite state at step " + std::to_string(s.step_count) +
                                ", node " + std::to_string(i) +
                                ", t=" + std::to_string(s.time),
                            s.step_count, i);
    }
  }
}

// For e' = f - A e with A = (2/h) J^-1 Gamma and f constant over dt:
// e(dt) = decay e(0) + forcing (f dt), decay = exp(-A dt),
// forcing = (A dt)^-1 (I - exp(-A dt)).
struct TipPropagators {
  Mat6 rate;
  Mat6 decay;
  Mat6 forcing;
};

TipPropagators tip_propagators(const Mat6& gain, const Mat6& inertia, double h, double dt) {
  const Mat6 mass = 0.5 * h * inertia;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> eig(gain, mass);
  const Mat6& v = eig.eigenvectors();  // v^T mass v = I
  Twist decay, forcing;
  for (int k = 0; k < 6; ++k) {
    const double x = std::max(0.0, eig.eigenvalues()[k]) * dt;
    decay[k] = std::exp(-x);
    forcing[k] = x < 1e-8 ? 1.0 - 0.5 * x : -std::expm1(-x) / x;
  }
  const Mat6 back = v.transpose() * mass;
  return {mass.inverse() * gain, v * decay.asDiagonal() * back, v * forcing.asDiagonal() * back};
}

}  // namespace

SimulationState step(const SimulationState& state, const RodModel& model, double dt,
                     const IntegratorConfig& config, const TipInjection* injection) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const int n = state.size();
  if (n != model.grid().nodes()) throw ConfigError("state size does not match the grid");
  const double h = model.grid().spacing();
  const Pose& base = model.params().base_pose;
  const bool need_poses = model.has_gravity() || model.has_global_tip_load();
  const double t0 = state.time;

  const bool has_gain = injection && injection->gain.squaredNorm() > 0.0;
  const Mat6 gain = has_gain ? injection->gain : Mat6::Zero();
  if (has_gain && !injection->measured_velocity) {
    throw ConfigError("tip injection has a gain but no measured velocity");
  }

  // Measured tip rotation, carried through the stages by the estimate's own
  // tip rotation increment.
  std::optional<Mat3> rotation_offset;
  if (injection && injection->measured_rotation && model.has_global_tip_load()) {
    rotation_offset = injection->measured_rotation(t0) * state.poses.back().rotation.transpose();
  }

  // Penalty mode: the gain wrench is frozen at its step-start value during
  // the stages and its contribution is replaced afterwards by the exact
  // solution of the tip relaxation.
  const bool split_gain = has_gain && config.tip == TipCondition::kPenalty;
  const Twist m0 = has_gain ? injection->measured_velocity(t0) : Twist::Zero();
  const Twist e0 = state.velocity.back() - m0;
  const Twist frozen = split_gain ? Twist(-gain * e0) : Twist::Zero();

  auto evaluate = [&](SimulationState& s, double t) {
    s.time = t;
    if (need_poses) s.poses = reconstruct_poses(s.strain, h, base);
    TipInputs tip;
    if (rotation_offset) tip.rotation = *rotation_offset * s.poses.back().rotation;
    if (split_gain) {
      tip.correction = frozen;
    } else if (has_gain) {
      tip.correction = -gain * (s.velocity.back() - injection->measured_velocity(t));
    }
    const std::vector<Twist> phi_loc = model.actuation_wrench(t);
    apply_boundary_conditions(s, model, phi_loc.back(), tip, config.tip);
    return rhs(s, model, tip, config.tip, config.dissipation);
  };

  SimulationState y0 = state;
  SimulationState stage = state;
  const StateRates k1 = evaluate(y0, t0);
  axpy_state(stage, y0, k1, 0.5 * dt);
  const StateRates k2 = evaluate(stage, t0 + 0.5 * dt);
  axpy_state(stage, y0, k2, 0.5 * dt);
  const StateRates k3 = evaluate(stage, t0 + 0.5 * dt);
  axpy_state(stage, y0, k3, dt);
  const StateRates k4 = evaluate(stage, t0 + dt);

  SimulationState next = y0;
  for (int i = 0; i < n; ++i) {
    next.strain[i] += dt / 6.0 * (k1.strain[i] + 2.0 * k2.strain[i] + 2.0 * k3.strain[i] + k4.strain[i]);
    next.velocity[i] +=
        dt / 6.0 * (k1.velocity[i] + 2.0 * k2.velocity[i] + 2.0 * k3.velocity[i] + k4.velocity[i]);
  }
  next.time = t0 + dt;
  next.step_count = state.step_count + 1;

  if (split_gain) {
    const Twist m1 = injection->measured_velocity(next.time);
    const TipPropagators p = tip_propagators(gain, model.section(n - 1).inertia, h, dt);
    const Twist drift = next.velocity.back() - state.velocity.back() + dt * p.rate * e0 - (m1 - m0);
    next.velocity.back() = m1 + p.decay * e0 + p.forcing * drift;
  }

  next.poses = reconstruct_poses(next.strain, h, base);
  TipInputs tip;
  if (rotation_offset) tip.rotation = *rotation_offset * next.poses.back().rotation;
  if (has_gain && config.tip == TipCondition::kStrong) {
    tip.correction = -gain * (next.velocity.back() - injection->measured_velocity(next.time));
  }
  apply_boundary_conditions(next, model, model.actuation_wrench(next.time).back(), tip,
                            config.tip);
  if (config.tip == TipCondition::kStrong) {
    next.poses = reconstruct_poses(next.strain, h, base);
  }
  if (config.reorthonormalize_every > 0 && next.step_count % config.reorthonormalize_every == 0) {
    for (Pose& g : next.poses) g.rotation = orthonormalize(g.rotation);
  }
  check_finite(next);
  return next;
}

double total_energy(const SimulationState& state, const RodModel& model) {
  const Grid& grid = model.grid();
  double energy = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const SectionProperties& sec = model.section(i);
    const Twist& eta = state.velocity[i];
    const Twist dev = state.strain[i] - sec.reference_strain;
    energy += grid.weight(i) * (eta.dot(sec.inertia * eta) + dev.dot(sec.stiffness * dev));
  }
  return energy;
}

double kinetic_energy(const SimulationState& state, const RodModel& model) {
  const Grid& grid = model.grid();
  double energy = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const Twist& eta = state.velocity[i];
    energy += grid.weight(i) * eta.dot(model.section(i).inertia * eta);
  }
  return 0.5 * energy;
}

}  // namespace cosserat
