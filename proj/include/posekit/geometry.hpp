#pragma once

#include <variant>

#include "posekit/types.hpp"

namespace posekit {

template <int PoseDim>
struct PointResult {
  Point3 point;
  Mat<3, PoseDim> d_pose;
  Mat3 d_point;
};

template <typename PoseT, int Dim>
struct PoseResult {
  PoseT pose;
  Mat<Dim, Dim> d_first;
  Mat<Dim, Dim> d_second;
};

/// p (+) a. The quaternion may be unnormalized; d_pose includes the normalization Jacobian.
PointResult<7> compose_point_quat(const QuatPose& p, const Point3& a);
PointResult<6> compose_point_ypr(const EulerPose& p, const Point3& a);
/// First-order d_pose for near-zero angles only.
Mat<3, 6> compose_point_ypr_small_rot_jacobian(const Point3& a);
Point3 compose_point_matrix(const HomPose& m, const Point3& a);

/// a (-) p, i.e. a expressed in the frame of p.
PointResult<7> inv_compose_point_quat(const Point3& a, const QuatPose& p);
Point3 inv_compose_point_matrix(const Point3& a, const HomPose& m);

/// p1 (+) p2. The result quaternion is normalized with qr >= 0.
PoseResult<QuatPose, 7> compose_pose_quat(const QuatPose& p1, const QuatPose& p2);
/// Value through matrices, Jacobians through the quaternion chain. Throws
/// SingularConfiguration if the result is gimbal-locked.
PoseResult<EulerPose, 6> compose_pose_ypr(const EulerPose& p1, const EulerPose& p2);
HomPose compose_pose_matrix(const HomPose& m1, const HomPose& m2);

struct InverseQuatResult {
  QuatPose pose;
  Mat7 jacobian;
};

InverseQuatResult inverse_pose_quat(const QuatPose& p);
HomPose inverse_pose_matrix(const HomPose& m);

enum class BinaryOp {
  compose_pose_point,  ///< pose (+) point -> point
  inv_compose_point,   ///< point (-) pose -> point
  compose_pose_pose,   ///< pose (+) pose -> pose
};

using GaussianOperand = std::variant<GaussianPose, GaussianPoint3>;

/// Independent operands; cov = J1 S1 J1^T + J2 S2 J2^T (symmetrized). Poses in a
/// compose_pose_pose must share a parameterization. Operand order follows the
/// operator: (pose, point), (point, pose), (pose, pose).
GaussianOperand propagate_binary(BinaryOp op, const GaussianOperand& g1, const GaussianOperand& g2);

GaussianPoint3 propagate_compose_point(const GaussianPose& p, const GaussianPoint3& a);
GaussianPoint3 propagate_inv_compose_point(const GaussianPoint3& a, const GaussianPose& p);
GaussianPose propagate_compose_pose(const GaussianPose& p1, const GaussianPose& p2);
/// Inverse of a Gaussian pose. YPR and matrix means go through the quaternion
/// form for the Jacobian.
GaussianPose propagate_inverse(const GaussianPose& p);

}  // namespace posekit
