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


#include "cosserat/se3.hpp"

#include <cmath>

#include "cosserat/errors.hpp"

namespace cosserat {

namespace {

// Below this angle the trigonometric coefficients switch to Taylor series.
constexpr double kSmallAngle = 1e-6;

}  // namespace

Mat4 Pose::matrix() const {
  Mat4 g = Mat4::Identity();
  g.topLeftCorner<3, 3>() = rotation;
  g.topRightCorner<3, 1>() = position;
  return g;
}

bool is_rotation(const Mat3& r, double tol) {
  if (!r.allFinite()) return false;
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 hat3(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat4 hat6(const Twist& t) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat3(angular(t));
  m.topRightCorner<3, 1>() = linear(t);
  return m;
}

Vec3 vee3(const Mat3& m, double tol) {
  const double skew_defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (!(skew_defect <= tol)) {
    throw StructuralError("vee3: matrix is not skew-symmetric (defect " +
                          std::to_string(skew_defect) + ")");
  }
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
          0.5 * (m(1, 0) - m(0, 1))};
}

Twist vee6(const Mat4& m, double tol) {
  const double bottom = m.bottomRows<1>().cwiseAbs().maxCoeff();
  if (!(bottom <= tol)) {
    throw StructuralError("vee6: bottom row of an se(3) element must vanish");
  }
  return make_twist(vee3(m.topLeftCorner<3, 3>(), tol), m.topRightCorner<3, 1>());
}

Mat6 adjoint(const Twist& t) {
  Mat6 ad = Mat6::Zero();
  const Mat3 w = hat3(angular(t));
  ad.topLeftCorner<3, 3>() = w;
  ad.bottomRightCorner<3, 3>() = w;
  ad.bottomLeftCorner<3, 3>() = hat3(linear(t));
  return ad;
}

Twist adjoint_apply(const Twist& a, const Twist& b) {
  const Vec3 wa = angular(a), va = linear(a);
  const Vec3 wb = angular(b), vb = linear(b);
  return make_twist(wa.cross(wb), va.cross(wb) + wa.cross(vb));
}

Twist adjoint_transpose_apply(const Twist& a, const Twist& b) {
  // [w^T v^T; 0 w^T] b with w^T = -w^.
  const Vec3 wa = angular(a), va = linear(a);
  const Vec3 mb = angular(b), nb = linear(b);
  return make_twist(-wa.cross(mb) - va.cross(nb), -wa.cross(nb));
}

Mat6 t_transform(const Mat3& r) {
  Mat6 t = Mat6::Zero();
  t.topLeftCorner<3, 3>() = r;
  t.bottomRightCorner<3, 3>() = r;
  return t;
}

Mat3 exp_so3(const Vec3& u) {
  const double theta2 = u.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;  // sin(theta)/theta
  double b;  // (1 - cos(theta))/theta^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = hat3(u);
  return Mat3::Identity() + a * k + b * k * k;
}

Pose exp_se3(const Twist& t, double h) {
  const Vec3 u = h * angular(t);
  const Vec3 q = h * linear(t);
  const double theta2 = u.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a, b, c;  // sin(x)/x, (1-cos x)/x^2, (x - sin x)/x^3
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    c = 1.0 / 6.0 - theta2 / 120.0 + theta2 * theta2 / 5040.0;
  } else {
    const double s = std::sin(theta);
    a = s / theta;
    b = (1.0 - std::cos(theta)) / theta2;
    c = (theta - s) / (theta2 * theta);
  }
  const Mat3 k = hat3(u);
  const Mat3 k2 = k * k;
  Pose g;
  g.rotation = Mat3::Identity() + a * k + b * k2;
  g.position = (Mat3::Identity() + b * k + c * k2) * q;
  return g;
}

Mat3 orthonormalize(const Mat3& m) {
  const double det = m.determinant();
  if (!(det > 0.0)) {
    throw DegenerateInputError("orthonormalize: determinant must be positive, got " +
                               std::to_string(det));
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace cosserat
