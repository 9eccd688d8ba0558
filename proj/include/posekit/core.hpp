#pragma once

#include "posekit/types.hpp"

namespace posekit {

/// |Delta| above this selects the pitch = +-90 deg branch of quat_to_ypr.
inline constexpr double kGimbalThreshold = 0.5 - 1e-7;

Mat3 rot_x(double a);
Mat3 rot_y(double a);
Mat3 rot_z(double a);

struct NormalizedQuaternion {
  Quaternion q;
  Mat4 jacobian;  ///< d(q/|q|)/dq
};

/// q / |q| (sign untouched) and its Jacobian. Throws DomainError if |q| <= 1e-12.
NormalizedQuaternion quat_normalize(const Quaternion& q);

/// Rotation of a YPR angle triple as R = Rz(yaw) Ry(pitch) Rx(roll).
Mat3 ypr_rotation(double yaw, double pitch, double roll);

QuatPose ypr_to_quat(const EulerPose& p);
/// d p7 / d p6.
Mat<7, 6> jacobian_ypr_to_quat(const EulerPose& p);

/// The quaternion is normalized first. threshold is the |Delta| switch to the
/// degenerate branch.
EulerPose quat_to_ypr(const QuatPose& p, double threshold = kGimbalThreshold);
/// d p6 / d p7 including the normalization Jacobian. Throws SingularConfiguration
/// when |Delta| >= kGimbalThreshold.
Mat<6, 7> jacobian_quat_to_ypr(const QuatPose& p);

HomPose ypr_to_matrix(const EulerPose& p);
/// The quaternion is normalized first.
HomPose quat_to_matrix(const QuatPose& p);
EulerPose matrix_to_ypr(const HomPose& m);
QuatPose matrix_to_quat(const HomPose& m);

/// d p6 / d vec12(m), extrinsic over all 12 entries. Throws SingularConfiguration
/// when the pitch is degenerate.
Mat<6, 12> jacobian_ypr_wrt_matrix(const HomPose& m);
/// d vec12 / d p6.
Mat<12, 6> jacobian_matrix_wrt_ypr(const EulerPose& p);
/// d vec12 / d p7 including the normalization Jacobian.
Mat<12, 7> jacobian_matrix_wrt_quat(const QuatPose& p);

/// Converts a pose value to another parameterization.
PoseValue convert(const PoseValue& v, Param target);

/// Jacobian of convert(., target) at v; rows = target dimension.
Eigen::MatrixXd conversion_jacobian(const PoseValue& v, Param target);

/// First-order transport: mean converted, cov = J cov J^T (symmetrized).
GaussianPose convert_gaussian(const GaussianPose& src, Param target);

}  // namespace posekit
