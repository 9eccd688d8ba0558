#pragma once

#include "posekit/types.hpp"

namespace posekit {

/// Points closer than this to the image plane (or behind it) are rejected.
inline constexpr double kDepthEpsilon = 1e-8;

struct CameraIntrinsics {
  double fx = 1.0, fy = 1.0;
  double cx = 0.0, cy = 0.0;
};

struct Pixel {
  double u = 0.0, v = 0.0;
  Vec2 vector() const { return {u, v}; }
};

/// Ideal pinhole without distortion. Throws BehindCamera if p.z <= kDepthEpsilon.
Pixel project(const CameraIntrinsics& k, const Point3& p);
Mat<2, 3> dproject_dp(const CameraIntrinsics& k, const Point3& p);

struct ProjectionResult {
  Pixel pixel;
  Mat<2, 6> j_eps;  ///< w.r.t. the pose increment eps
  Mat<2, 3> j_p;    ///< w.r.t. the point
};

/// h(e^eps A p).
ProjectionResult project_pose_point(const CameraIntrinsics& k, const HomPose& a, const Point3& p);
/// h(p (-) e^eps A); A is the camera pose.
ProjectionResult project_inv_pose_point(const CameraIntrinsics& k, const HomPose& a,
                                        const Point3& p);

}  // namespace posekit
