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


// SO(3)/SE(3) primitives. Twists and wrenches are stored angular/moment first:
// velocity [w; v], strain [u; q], wrench [m; n].

#pragma once

#include <Eigen/Dense>

namespace cosserat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Twist = Eigen::Matrix<double, 6, 1>;

inline auto angular(Twist& t) { return t.head<3>(); }
inline auto angular(const Twist& t) { return t.head<3>(); }
inline auto linear(Twist& t) { return t.tail<3>(); }
inline auto linear(const Twist& t) { return t.tail<3>(); }

inline Twist make_twist(const Vec3& angular_part, const Vec3& linear_part) {
  Twist t;
  t << angular_part, linear_part;
  return t;
}

// Rigid transform g = [R p; 0 1].
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 position = Vec3::Zero();

  static Pose identity() { return {}; }

  Pose operator*(const Pose& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.position + position};
  }

  Mat4 matrix() const;
};

// Tolerance used for the R^T R = I and det R = 1 checks.
inline constexpr double kRotationTolerance = 1e-9;

bool is_rotation(const Mat3& r, double tol = kRotationTolerance);

Mat3 hat3(const Vec3& v);
Mat4 hat6(const Twist& t);

// Throw StructuralError when the input deviates from the so(3)/se(3)
// pattern by more than tol.
Vec3 vee3(const Mat3& m, double tol = 1e-12);
Twist vee6(const Mat4& m, double tol = 1e-12);

// ad_t = [[w^, 0], [v^, w^]].
Mat6 adjoint(const Twist& t);

// ad_a * b without forming the 6x6 matrix.
Twist adjoint_apply(const Twist& a, const Twist& b);
// ad_a^T * b without forming the 6x6 matrix.
Twist adjoint_transpose_apply(const Twist& a, const Twist& b);

// diag(R, R): maps a moment/force pair from the frame R to the global frame.
Mat6 t_transform(const Mat3& r);

Mat3 exp_so3(const Vec3& u);

// exp((h t)^) using the closed-form left Jacobian for the translation.
Pose exp_se3(const Twist& t, double h);

// Nearest rotation in the Frobenius sense (polar factor). Throws
// DegenerateInputError when det(m) <= 0.
Mat3 orthonormalize(const Mat3& m);

}  // namespace cosserat
