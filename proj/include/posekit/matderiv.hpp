#pragma once

#include "posekit/types.hpp"

// Matrix-calculus helpers over the 12-vector pose view. All derivatives here are
// extrinsic: every one of the 12 entries is perturbed independently, so the
// perturbed matrix generally leaves SE(3).

namespace posekit {

/// Column-major stacking.
Eigen::VectorXd vec(const Eigen::MatrixXd& m);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// T_{m,n}: the mn x mn permutation with T_{m,n} vec(A) = vec(A^T) for every n x m A.
Eigen::MatrixXd transpose_permutation(int m, int n);

Mat3 hat3(const Vec3& w);
/// Throws DomainError unless |S + S^T| < 1e-9.
Vec3 vee3(const Mat3& s);

/// d vec12(A B) / d vec12(A) = T_B^T (x) I3.
Mat12 d_compose_wrt_A(const HomPose& b);
/// d vec12(A B) / d vec12(B) = I4 (x) R_A.
Mat12 d_compose_wrt_B(const HomPose& a);

/// d (A p) / d p = R_A.
Mat3 d_apply_wrt_point(const HomPose& a);
/// d (A p) / d vec12(A) = (p^T 1) (x) I3.
Mat<3, 12> d_apply_wrt_pose(const Point3& p);

/// d vec12(A^-1) / d vec12(A).
Mat12 d_inverse_wrt_pose(const HomPose& a);

/// d (A^-1 p) / d p = R_A^T.
Mat3 d_invapply_wrt_point(const HomPose& a);
/// d (A^-1 p) / d vec12(A) = [I3 (x) (p - t_A)^T | -R_A^T].
Mat<3, 12> d_invapply_wrt_pose(const HomPose& a, const Point3& p);

}  // namespace posekit
