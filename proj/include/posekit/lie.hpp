#pragma once

#include "posekit/types.hpp"

namespace posekit {

/// Below this angle the trigonometric ratios switch to their Taylor series.
inline constexpr double kSmallAngle = 1e-4;
/// Within this distance of pi, so3_log extracts the axis from S = R + R^T + (1 - tr R) I.
inline constexpr double kNearPi = 1e-6;

/// se(3) coordinates, translation first.
struct TangentSE3 {
  Vec3 t = Vec3::Zero();
  Vec3 w = Vec3::Zero();

  Vec6 vector() const {
    Vec6 v;
    v << t, w;
    return v;
  }
  static TangentSE3 from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }
};

/// se(2) coordinates (t', phi).
struct TangentSE2 {
  Vec2 t = Vec2::Zero();
  double phi = 0.0;

  Vec3 vector() const { return {t.x(), t.y(), phi}; }
  static TangentSE2 from_vector(const Vec3& v) { return {v.head<2>(), v[2]}; }
};

/// Unit axis n and angle theta in [0, pi].
struct AxisAngle {
  Vec3 n = Vec3::UnitX();
  double theta = 0.0;
};

Mat3 so3_exp(const Vec3& w);
Mat3 so3_exp_coordinate(const AxisAngle& a);

struct RotationFactorization {
  Mat3 p;   ///< orthogonal, third column n
  Mat3 rz;  ///< rotation by theta about z
};

/// R(n, theta) = P Rz(theta) P^T. Throws DomainError when n is parallel to z.
RotationFactorization axis_angle_factorization(const AxisAngle& a);

Quaternion so3_exp_quat(const Vec3& w);

/// Rotation vector with angle in [0, pi]. At exactly pi the overall sign is chosen
/// so that the largest-magnitude component is positive.
Vec3 so3_log(const Mat3& r);
Vec3 so3_log_quat(const Quaternion& q);

HomPose se3_exp(const TangentSE3& v);
/// Throws RangeError when the rotation angle exceeds pi - kNearPi.
TangentSE3 se3_log(const HomPose& m);

/// Rotation exponentiated, translation copied.
HomPose se3_pseudo_exp(const TangentSE3& v);
TangentSE3 se3_pseudo_log(const HomPose& m);

Mat2 rot2(double phi);

HomPose2 se2_exp(const TangentSE2& v);
TangentSE2 se2_log(const HomPose2& m);

/// (x, y, phi) <-> matrix, translation copied.
HomPose2 se2_pseudo_exp(const Vec3& v);
Vec3 se2_pseudo_log(const HomPose2& m);

}  // namespace posekit
