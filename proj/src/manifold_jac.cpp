#include "posekit/manifold_jac.hpp"

#include <algorithm>
#include <cmath>

#include "posekit/errors.hpp"
#include "posekit/geometry.hpp"
#include "posekit/matderiv.hpp"

namespace posekit {

namespace {

// dlog_so3 evaluates its coefficients by series when cos(theta) exceeds this.
constexpr double kDlogSeriesCos = 0.999999;

Mat3 rot3(double phi) {
  Mat3 r = Mat3::Identity();
  r.topLeftCorner<2, 2>() = rot2(phi);
  return r;
}

}  // namespace

Mat<9, 3> dexp_so3_at_zero() {
  Mat<9, 3> j;
  for (int i = 0; i < 3; ++i) j.block<3, 3>(3 * i, 0) = -hat3(Vec3::Unit(i));
  return j;
}

Mat<4, 3> dexp_so3_quat(const Vec3& w) {
  const double t = w.norm();
  if (t < kSmallAngle) {
    // Series of the factored product below; exact limit [0; I/2] at w = 0.
    const double t2 = t * t;
    Mat<4, 3> j;
    j.row(0) = -0.25 * (1.0 - t2 / 24.0) * w.transpose();
    j.bottomRows<3>() = (0.5 - t2 / 48.0) * Mat3::Identity() +
                        (-1.0 / 24.0 + t2 / 960.0) * w * w.transpose();
    return j;
  }
  const double s = std::sin(t / 2), c = std::cos(t / 2);
  const double k = c / (2 * t) - s / (t * t);
  Mat4 f1 = Mat4::Zero();
  f1(0, 3) = -s / 2;
  for (int i = 0; i < 3; ++i) {
    f1(1 + i, i) = s / t;
    f1(1 + i, 3) = w[i] * k;
  }
  Mat<4, 3> f2;
  f2.topRows<3>().setIdentity();
  f2.row(3) = w.transpose() / t;
  return f1 * f2;
}

Mat<12, 6> dexp_se3_at_zero() {
  Mat<12, 6> j = Mat<12, 6>::Zero();
  for (int i = 0; i < 3; ++i) j.block<3, 3>(3 * i, 3) = -hat3(Vec3::Unit(i));
  j.block<3, 3>(9, 0).setIdentity();
  return j;
}

Mat<3, 9> dlog_so3(const Mat3& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  double ka, b;
  if (c > kDlogSeriesCos) {
    // Series of the general coefficients; at R = I this is the constant +-1/2 pattern.
    const double t2 = theta * theta;
    ka = -1.0 / 12.0 - t2 / 30.0 - t2 * t2 / 126.0;
    b = 0.5 + t2 / 12.0 + 7.0 * t2 * t2 / 720.0;
  } else {
    const double s = std::sqrt(1.0 - c * c);
    ka = (theta * c - s) / (4 * s * s * s);
    b = theta / (2 * s);
  }
  const Vec3 a = Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)) * ka;
  // Columns follow vec(R): R11 R21 R31 R12 R22 R32 R13 R23 R33.
  Mat<3, 9> j;
  j << a[0], 0, 0, 0, a[0], b, 0, -b, a[0],
      a[1], 0, -b, 0, a[1], 0, b, 0, a[1],
      a[2], b, 0, -b, a[2], 0, 0, 0, a[2];
  return j;
}

Mat<12, 6> jacob_expeD_de(const HomPose& d) {
  const Mat3 r = d.rotation();
  Mat<12, 6> j = Mat<12, 6>::Zero();
  for (int i = 0; i < 3; ++i) j.block<3, 3>(3 * i, 3) = -hat3(r.col(i));
  j.block<3, 3>(9, 0).setIdentity();
  j.block<3, 3>(9, 3) = -hat3(d.translation());
  return j;
}

Mat<12, 6> jacob_Dexpe_de(const HomPose& d) {
  const Mat3 r = d.rotation();
  const Vec3 c1 = r.col(0), c2 = r.col(1), c3 = r.col(2);
  Mat<12, 6> j = Mat<12, 6>::Zero();
  j.block<3, 1>(3, 3) = c3;
  j.block<3, 1>(6, 3) = -c2;
  j.block<3, 1>(0, 4) = -c3;
  j.block<3, 1>(6, 4) = c1;
  j.block<3, 1>(0, 5) = c2;
  j.block<3, 1>(3, 5) = -c1;
  j.block<3, 3>(9, 0) = r;
  return j;
}

Mat<3, 6> jacob_expeDp_de(const HomPose& d, const Point3& p) {
  Mat<3, 6> j;
  j << Mat3::Identity(), -hat3(compose_point_matrix(d, p));
  return j;
}

Mat<3, 6> jacob_p_ominus_expeD_de(const HomPose& d, const Point3& p) {
  const Mat3 r = d.rotation();
  const double px = p.x(), py = p.y(), pz = p.z();
  Mat3 w;
  for (int i = 0; i < 3; ++i) {
    const double d1 = r(0, i), d2 = r(1, i), d3 = r(2, i);
    w.row(i) << d2 * pz - d3 * py, -d1 * pz + d3 * px, d1 * py - d2 * px;
  }
  Mat<3, 6> j;
  j << -r.transpose(), w;
  return j;
}

Mat<12, 6> jacob_AexpeD_de(const HomPose& a, const HomPose& d) {
  const Mat3 ra = a.rotation();
  Mat<12, 6> j = jacob_expeD_de(d);
  for (int i = 0; i < 4; ++i) j.block<3, 6>(3 * i, 0) = ra * j.block<3, 6>(3 * i, 0);
  return j;
}

Mat<3, 6> jacob_AexpeDp_de(const HomPose& a, const HomPose& d, const Point3& p, bool approx) {
  Mat<3, 6> j;
  if (approx) {
    j << Mat3::Identity(), -hat3(p + d.translation());
    return j;
  }
  j << Mat3::Identity(), -hat3(compose_point_matrix(d, p));
  return a.rotation() * j;
}

Mat<3, 6> jacob_p_ominus_AexpeD_de(const HomPose& a, const HomPose& d, const Point3& p) {
  return d_invapply_wrt_pose(compose_pose_matrix(a, d), p) * jacob_AexpeD_de(a, d);
}

Mat<6, 12> dpseudolog_se3(const HomPose& t) {
  Mat<6, 12> j = Mat<6, 12>::Zero();
  j.block<3, 3>(0, 9).setIdentity();
  j.block<3, 9>(3, 0) = dlog_so3(t.rotation());
  return j;
}

EdgeErrorSE3 edge_error_se3(const HomPose& d, const HomPose& p1, const HomPose& p2) {
  const HomPose dinv = inverse_pose_matrix(d);
  const HomPose b = compose_pose_matrix(inverse_pose_matrix(p1), p2);
  const HomPose t = compose_pose_matrix(dinv, b);
  EdgeErrorSE3 out;
  out.e = se3_pseudo_log(t);
  if (out.e.w.norm() > kEdgeMaxAngle)
    throw RangeError("edge error rotation is too close to pi for the pseudo-log Jacobian");
  const Mat<6, 12> dlog = dpseudolog_se3(t);
  out.j1 = -dlog * d_compose_wrt_A(b) * jacob_Dexpe_de(dinv);
  out.j2 = dlog * jacob_Dexpe_de(t);
  return out;
}

Mat3 jacob_Dexpe_de_se2(const HomPose2& d) {
  const Mat2 r = d.rotation();
  return rot3(std::atan2(r(1, 0), r(0, 0)));
}

Mat3 d_compose_se2_wrt_A(const HomPose2& a, const HomPose2& b) {
  const Mat2 ra = a.rotation();
  const double c = ra(0, 0), s = ra(1, 0);
  const Vec2 tb = b.translation();
  Mat3 j;
  j << 1, 0, -tb.x() * s - tb.y() * c,
      0, 1, tb.x() * c - tb.y() * s,
      0, 0, 1;
  return j;
}

Mat3 d_compose_se2_wrt_B(const HomPose2& a) { return jacob_Dexpe_de_se2(a); }

EdgeErrorSE2 edge_error_se2(const HomPose2& d, const HomPose2& p1, const HomPose2& p2) {
  const HomPose2 dinv = d.inverse();
  const HomPose2 b = p1.inverse() * p2;
  const HomPose2 t = dinv * b;
  EdgeErrorSE2 out;
  out.e = se2_pseudo_log(t);
  out.j1 = -d_compose_se2_wrt_A(dinv, b) * jacob_Dexpe_de_se2(dinv);
  out.j2 = jacob_Dexpe_de_se2(t);
  return out;
}

}  // namespace posekit
