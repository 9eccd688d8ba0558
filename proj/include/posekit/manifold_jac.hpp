#pragma once

#include <numbers>

#include "posekit/lie.hpp"
#include "posekit/types.hpp"

// Jacobians with respect to a tangent increment eps = (d, w) evaluated at eps = 0.
// The increment enters through se3_pseudo_exp, the library's boxplus.

namespace posekit {

/// d vec(so3_exp(w)) / dw at w = 0.
Mat<9, 3> dexp_so3_at_zero();
/// d so3_exp_quat(w) / dw, valid at any w (limit [0; I/2] at w = 0).
Mat<4, 3> dexp_so3_quat(const Vec3& w);
/// d vec12(se3_pseudo_exp(eps)) / d eps at eps = 0.
Mat<12, 6> dexp_se3_at_zero();

/// d so3_log(R) / d vec(R), extrinsic.
Mat<3, 9> dlog_so3(const Mat3& r);

/// d vec12(e^eps D) / d eps.
Mat<12, 6> jacob_expeD_de(const HomPose& d);
/// d vec12(D e^eps) / d eps.
Mat<12, 6> jacob_Dexpe_de(const HomPose& d);
/// d (e^eps D p) / d eps.
Mat<3, 6> jacob_expeDp_de(const HomPose& d, const Point3& p);
/// d (p (-) e^eps D) / d eps.
Mat<3, 6> jacob_p_ominus_expeD_de(const HomPose& d, const Point3& p);
/// d vec12(A e^eps D) / d eps.
Mat<12, 6> jacob_AexpeD_de(const HomPose& a, const HomPose& d);
/// d (A e^eps D p) / d eps. With approx set, the near-identity form [I | -hat(p + t_D)].
Mat<3, 6> jacob_AexpeDp_de(const HomPose& a, const HomPose& d, const Point3& p, bool approx = false);
/// d (p (-) A e^eps D) / d eps.
Mat<3, 6> jacob_p_ominus_AexpeD_de(const HomPose& a, const HomPose& d, const Point3& p);
/// d se3_pseudo_log(T) / d vec12(T), extrinsic.
Mat<6, 12> dpseudolog_se3(const HomPose& t);

/// Rotation angles of the edge error beyond this raise RangeError.
inline constexpr double kEdgeMaxAngle = std::numbers::pi - 1e-3;

struct EdgeErrorSE3 {
  TangentSE3 e;
  Mat6 j1;  ///< d e / d eps1 with P1 <- P1 e^eps1
  Mat6 j2;  ///< d e / d eps2 with P2 <- P2 e^eps2
};

struct EdgeErrorSE2 {
  Vec3 e;  ///< (x, y, phi), phi wrapped to (-pi, pi]
  Mat3 j1;
  Mat3 j2;
};

/// e = pseudo_log(D^-1 P1^-1 P2).
EdgeErrorSE3 edge_error_se3(const HomPose& d, const HomPose& p1, const HomPose& p2);

/// d pseudo_log(D e^eps) / d eps for SE(2).
Mat3 jacob_Dexpe_de_se2(const HomPose2& d);
/// d pseudo_log(A B) / d pseudo_log(A).
Mat3 d_compose_se2_wrt_A(const HomPose2& a, const HomPose2& b);
/// d pseudo_log(A B) / d pseudo_log(B).
Mat3 d_compose_se2_wrt_B(const HomPose2& a);

EdgeErrorSE2 edge_error_se2(const HomPose2& d, const HomPose2& p1, const HomPose2& p2);

}  // namespace posekit
