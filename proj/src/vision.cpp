#include "posekit/vision.hpp"

#include "posekit/errors.hpp"
#include "posekit/geometry.hpp"
#include "posekit/manifold_jac.hpp"
#include "posekit/matderiv.hpp"

namespace posekit {

namespace {

void require_depth(const Point3& p) {
  if (!(p.z() > kDepthEpsilon)) throw BehindCamera("point is at or behind the camera plane");
}

}  // namespace

Pixel project(const CameraIntrinsics& k, const Point3& p) {
  require_depth(p);
  return {k.cx + k.fx * p.x() / p.z(), k.cy + k.fy * p.y() / p.z()};
}

Mat<2, 3> dproject_dp(const CameraIntrinsics& k, const Point3& p) {
  require_depth(p);
  const double iz = 1.0 / p.z();
  Mat<2, 3> j;
  j << k.fx * iz, 0, -k.fx * p.x() * iz * iz,
      0, k.fy * iz, -k.fy * p.y() * iz * iz;
  return j;
}

ProjectionResult project_pose_point(const CameraIntrinsics& k, const HomPose& a, const Point3& p) {
  const Point3 g = compose_point_matrix(a, p);
  const Mat<2, 3> dh = dproject_dp(k, g);
  Mat<3, 6> dg;
  dg << Mat3::Identity(), -hat3(g);
  return {project(k, g), dh * dg, dh * a.rotation()};
}

ProjectionResult project_inv_pose_point(const CameraIntrinsics& k, const HomPose& a,
                                        const Point3& p) {
  const Point3 l = inv_compose_point_matrix(p, a);
  const Mat<2, 3> dh = dproject_dp(k, l);
  return {project(k, l), dh * jacob_p_ominus_expeD_de(a, p), dh * a.rotation().transpose()};
}

}  // namespace posekit
