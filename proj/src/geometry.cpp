#include "posekit/geometry.hpp"

#include <cmath>

#include "posekit/core.hpp"
#include "posekit/errors.hpp"
#include "posekit/matderiv.hpp"

namespace posekit {

namespace {

// d f_qr / d q for a unit quaternion, before the normalization Jacobian.
Mat<3, 4> dfqr_dq(const Quaternion& q, const Point3& a) {
  const double qr = q.r, qx = q.x, qy = q.y, qz = q.z;
  const double ax = a.x(), ay = a.y(), az = a.z();
  Mat<3, 4> d;
  d << -qz * ay + qy * az, qy * ay + qz * az, -2 * qy * ax + qx * ay + qr * az,
      -2 * qz * ax - qr * ay + qx * az,
      qz * ax - qx * az, qy * ax - 2 * qx * ay - qr * az, qx * ax + qz * az,
      qr * ax - 2 * qz * ay + qy * az,
      -qy * ax + qx * ay, qz * ax + qr * ay - 2 * qx * az, -qr * ax + qz * ay - 2 * qy * az,
      qx * ax + qy * ay;
  return 2.0 * d;
}

// d f_qri / d q for a unit quaternion, before the normalization Jacobian.
Mat<3, 4> dfqri_dq(const Quaternion& q, const Vec3& d) {
  const double qr = q.r, qx = q.x, qy = q.y, qz = q.z;
  const double dx = d.x(), dy = d.y(), dz = d.z();
  Mat<3, 4> j;
  j << -qy * dz + qz * dy, qy * dy + qz * dz, qx * dy - 2 * qy * dx - qr * dz,
      qx * dz + qr * dy - 2 * qz * dx,
      qx * dz - qz * dx, qy * dx - 2 * qx * dy + qr * dz, qx * dx + qz * dz,
      -qr * dx - 2 * qz * dy + qy * dz,
      qy * dx - qx * dy, qz * dx - qr * dy - 2 * qx * dz, qz * dy + qr * dx - 2 * qy * dz,
      qx * dx + qy * dy;
  return 2.0 * j;
}

Point3 fqr(const Vec3& t, const Quaternion& q, const Point3& a) {
  const double qr = q.r, qx = q.x, qy = q.y, qz = q.z;
  const double ax = a.x(), ay = a.y(), az = a.z();
  return {t.x() + ax + 2 * ((-qy * qy - qz * qz) * ax + (qx * qy - qr * qz) * ay +
                            (qr * qy + qx * qz) * az),
          t.y() + ay + 2 * ((qr * qz + qx * qy) * ax + (-qx * qx - qz * qz) * ay +
                            (qy * qz - qr * qx) * az),
          t.z() + az + 2 * ((qx * qz - qr * qy) * ax + (qr * qx + qy * qz) * ay +
                            (-qx * qx - qy * qy) * az)};
}

Mat3 fqr_dpoint(const Quaternion& q) {
  const double qr = q.r, qx = q.x, qy = q.y, qz = q.z;
  Mat3 j;
  j << 0.5 - qy * qy - qz * qz, qx * qy - qr * qz, qr * qy + qx * qz,
      qr * qz + qx * qy, 0.5 - qx * qx - qz * qz, qy * qz - qr * qx,
      qx * qz - qr * qy, qr * qx + qy * qz, 0.5 - qx * qx - qy * qy;
  return 2.0 * j;
}

Point3 fqri(const Point3& a, const Vec3& t, const Quaternion& q) {
  const double qr = q.r, qx = q.x, qy = q.y, qz = q.z;
  const Vec3 d = a - t;
  const double dx = d.x(), dy = d.y(), dz = d.z();
  return {dx + 2 * (-(qy * qy + qz * qz) * dx + (qx * qy + qr * qz) * dy +
                    (-qr * qy + qx * qz) * dz),
          dy + 2 * ((-qr * qz + qx * qy) * dx - (qx * qx + qz * qz) * dy +
                    (qy * qz + qr * qx) * dz),
          dz + 2 * ((qx * qz + qr * qy) * dx + (-qr * qx + qy * qz) * dy -
                    (qx * qx + qy * qy) * dz)};
}

Mat3 fqri_dpoint(const Quaternion& q) {
  const double qr = q.r, qx = q.x, qy = q.y, qz = q.z;
  Mat3 j;
  j << 1 - 2 * (qy * qy + qz * qz), 2 * qx * qy + 2 * qr * qz, -2 * qr * qy + 2 * qx * qz,
      -2 * qr * qz + 2 * qx * qy, 1 - 2 * (qx * qx + qz * qz), 2 * qy * qz + 2 * qr * qx,
      2 * qx * qz + 2 * qr * qy, -2 * qr * qx + 2 * qy * qz, 1 - 2 * (qx * qx + qy * qy);
  return j;
}

// d f_qri / d p as a 3x7 block, normalization included.
Mat<3, 7> fqri_dpose(const Point3& a, const QuatPose& p) {
  const NormalizedQuaternion nq = quat_normalize(p.q);
  Mat<3, 7> j;
  j.leftCols<3>() = -fqri_dpoint(nq.q);
  j.rightCols<4>() = dfqri_dq(nq.q, a - p.t) * nq.jacobian;
  return j;
}

Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
  return {a.r * b.r - a.x * b.x - a.y * b.y - a.z * b.z,
          a.r * b.x + b.r * a.x + a.y * b.z - b.y * a.z,
          a.r * b.y + b.r * a.y + a.z * b.x - b.z * a.x,
          a.r * b.z + b.r * a.z + a.x * b.y - b.x * a.y};
}

Mat3 point_cov(const Eigen::MatrixXd& jp, const Eigen::MatrixXd& sp, const Mat3& ja,
               const Mat3& sa) {
  return symmetrize(jp * sp * jp.transpose() + ja * sa * ja.transpose());
}

void require_dim(const GaussianPose& g) {
  const int n = param_dim(g.param());
  if (g.cov.rows() != n || g.cov.cols() != n)
    throw DomainError("covariance dimension does not match the pose parameterization");
}

}  // namespace

PointResult<7> compose_point_quat(const QuatPose& p, const Point3& a) {
  const NormalizedQuaternion nq = quat_normalize(p.q);
  PointResult<7> out;
  out.point = fqr(p.t, nq.q, a);
  out.d_pose.leftCols<3>().setIdentity();
  out.d_pose.rightCols<4>() = dfqr_dq(nq.q, a) * nq.jacobian;
  out.d_point = fqr_dpoint(nq.q);
  return out;
}

PointResult<6> compose_point_ypr(const EulerPose& p, const Point3& a) {
  const double cy = std::cos(p.yaw), sy = std::sin(p.yaw);
  const double cp = std::cos(p.pitch), sp = std::sin(p.pitch);
  const double cr = std::cos(p.roll), sr = std::sin(p.roll);
  const double ax = a.x(), ay = a.y(), az = a.z();
  const HomPose m = ypr_to_matrix(p);

  PointResult<6> out;
  out.point = compose_point_matrix(m, a);
  out.d_point = m.rotation();
  out.d_pose.leftCols<3>().setIdentity();
  Mat3 j;
  j(0, 0) = -ax * sy * cp + ay * (-sy * sp * sr - cy * cr) + az * (-sy * sp * cr + cy * sr);
  j(0, 1) = -ax * cy * sp + ay * (cy * cp * sr) + az * (cy * cp * cr);
  j(0, 2) = ay * (cy * sp * cr + sy * sr) + az * (-cy * sp * sr + sy * cr);
  j(1, 0) = ax * cy * cp + ay * (cy * sp * sr - sy * cr) + az * (cy * sp * cr + sy * sr);
  j(1, 1) = -ax * sy * sp + ay * (sy * cp * sr) + az * (sy * cp * cr);
  j(1, 2) = ay * (sy * sp * cr - cy * sr) + az * (-sy * sp * sr - cy * cr);
  j(2, 0) = 0.0;
  j(2, 1) = -ax * cp - ay * sp * sr - az * sp * cr;
  j(2, 2) = ay * cp * cr - az * cp * sr;
  out.d_pose.rightCols<3>() = j;
  return out;
}

Mat<3, 6> compose_point_ypr_small_rot_jacobian(const Point3& a) {
  Mat<3, 6> j;
  j << 1, 0, 0, -a.y(), a.z(), 0,
      0, 1, 0, a.x(), 0, -a.z(),
      0, 0, 1, 0, -a.x(), a.y();
  return j;
}

Point3 compose_point_matrix(const HomPose& m, const Point3& a) {
  return m.rotation() * a + m.translation();
}

PointResult<7> inv_compose_point_quat(const Point3& a, const QuatPose& p) {
  const NormalizedQuaternion nq = quat_normalize(p.q);
  PointResult<7> out;
  out.point = fqri(a, p.t, nq.q);
  out.d_point = fqri_dpoint(nq.q);
  out.d_pose = fqri_dpose(a, p);
  return out;
}

Point3 inv_compose_point_matrix(const Point3& a, const HomPose& m) {
  return compose_point_matrix(inverse_pose_matrix(m), a);
}

PoseResult<QuatPose, 7> compose_pose_quat(const QuatPose& p1, const QuatPose& p2) {
  const Quaternion& q1 = p1.q;
  const Quaternion& q2 = p2.q;
  const PointResult<7> tr = compose_point_quat(p1, p2.t);
  const Quaternion prod = hamilton(q1, q2);
  const NormalizedQuaternion nq = quat_normalize(prod);

  Mat4 dq1, dq2;
  dq1 << q2.r, -q2.x, -q2.y, -q2.z,
      q2.x, q2.r, q2.z, -q2.y,
      q2.y, -q2.z, q2.r, q2.x,
      q2.z, q2.y, -q2.x, q2.r;
  dq2 << q1.r, -q1.x, -q1.y, -q1.z,
      q1.x, q1.r, -q1.z, q1.y,
      q1.y, q1.z, q1.r, -q1.x,
      q1.z, -q1.y, q1.x, q1.r;

  PoseResult<QuatPose, 7> out;
  out.d_first.setZero();
  out.d_second.setZero();
  out.d_first.topRows<3>() = tr.d_pose;
  out.d_first.bottomRightCorner<4, 4>() = nq.jacobian * dq1;
  out.d_second.topLeftCorner<3, 3>() = tr.d_point;
  out.d_second.bottomRightCorner<4, 4>() = nq.jacobian * dq2;
  if (nq.q.r < 0.0) {
    out.d_first.bottomRows<4>() *= -1.0;
    out.d_second.bottomRows<4>() *= -1.0;
  }
  out.pose = {tr.point, nq.q.canonical()};
  return out;
}

PoseResult<EulerPose, 6> compose_pose_ypr(const EulerPose& p1, const EulerPose& p2) {
  const QuatPose q1 = ypr_to_quat(p1), q2 = ypr_to_quat(p2);
  const auto qc = compose_pose_quat(q1, q2);
  const Mat<6, 7> back = jacobian_quat_to_ypr(qc.pose);

  PoseResult<EulerPose, 6> out;
  out.pose = matrix_to_ypr(ypr_to_matrix(p1) * ypr_to_matrix(p2));
  out.d_first = back * qc.d_first * jacobian_ypr_to_quat(p1);
  out.d_second = back * qc.d_second * jacobian_ypr_to_quat(p2);
  return out;
}

HomPose compose_pose_matrix(const HomPose& m1, const HomPose& m2) {
  Mat4 m = m1.matrix() * m2.matrix();
  m.row(3) << 0, 0, 0, 1;
  return HomPose(m);
}

InverseQuatResult inverse_pose_quat(const QuatPose& p) {
  const NormalizedQuaternion nq = quat_normalize(p.q);
  InverseQuatResult out;
  out.jacobian.setZero();
  out.jacobian.topRows<3>() = fqri_dpose(Point3::Zero(), p);
  const Vec4 conj(1, -1, -1, -1);
  out.jacobian.bottomRightCorner<4, 4>() = conj.asDiagonal() * nq.jacobian;
  Quaternion q = nq.q.conjugate();
  if (q.r < 0.0) {
    q = q.canonical();
    out.jacobian.bottomRows<4>() *= -1.0;
  }
  out.pose = {fqri(Point3::Zero(), p.t, nq.q), q};
  return out;
}

HomPose inverse_pose_matrix(const HomPose& m) {
  const Mat3 rt = m.rotation().transpose();
  return HomPose::from_rt(rt, -rt * m.translation());
}

GaussianPoint3 propagate_compose_point(const GaussianPose& p, const GaussianPoint3& a) {
  require_dim(p);
  switch (p.param()) {
    case Param::quat: {
      const auto r = compose_point_quat(std::get<QuatPose>(p.mean), a.mean);
      return {r.point, point_cov(r.d_pose, p.cov, r.d_point, a.cov)};
    }
    case Param::ypr: {
      const auto r = compose_point_ypr(std::get<EulerPose>(p.mean), a.mean);
      return {r.point, point_cov(r.d_pose, p.cov, r.d_point, a.cov)};
    }
    case Param::matrix: {
      const auto& m = std::get<HomPose>(p.mean);
      return {compose_point_matrix(m, a.mean),
              point_cov(d_apply_wrt_pose(a.mean), p.cov, d_apply_wrt_point(m), a.cov)};
    }
  }
  return {};
}

GaussianPoint3 propagate_inv_compose_point(const GaussianPoint3& a, const GaussianPose& p) {
  require_dim(p);
  switch (p.param()) {
    case Param::quat: {
      const auto r = inv_compose_point_quat(a.mean, std::get<QuatPose>(p.mean));
      return {r.point, point_cov(r.d_pose, p.cov, r.d_point, a.cov)};
    }
    case Param::ypr: {
      const auto& e = std::get<EulerPose>(p.mean);
      const auto r = inv_compose_point_quat(a.mean, ypr_to_quat(e));
      const Mat<3, 6> jp = r.d_pose * jacobian_ypr_to_quat(e);
      return {r.point, point_cov(jp, p.cov, r.d_point, a.cov)};
    }
    case Param::matrix: {
      const auto& m = std::get<HomPose>(p.mean);
      return {inv_compose_point_matrix(a.mean, m),
              point_cov(d_invapply_wrt_pose(m, a.mean), p.cov, d_invapply_wrt_point(m), a.cov)};
    }
  }
  return {};
}

GaussianPose propagate_compose_pose(const GaussianPose& p1, const GaussianPose& p2) {
  require_dim(p1);
  require_dim(p2);
  if (p1.param() != p2.param())
    throw DomainError("pose composition requires both operands in the same parameterization");
  auto cov = [&](const Eigen::MatrixXd& j1, const Eigen::MatrixXd& j2) {
    return symmetrize(j1 * p1.cov * j1.transpose() + j2 * p2.cov * j2.transpose());
  };
  switch (p1.param()) {
    case Param::quat: {
      const auto r = compose_pose_quat(std::get<QuatPose>(p1.mean), std::get<QuatPose>(p2.mean));
      return {r.pose, cov(r.d_first, r.d_second)};
    }
    case Param::ypr: {
      const auto r =
          compose_pose_ypr(std::get<EulerPose>(p1.mean), std::get<EulerPose>(p2.mean));
      return {r.pose, cov(r.d_first, r.d_second)};
    }
    case Param::matrix: {
      const auto& a = std::get<HomPose>(p1.mean);
      const auto& b = std::get<HomPose>(p2.mean);
      return {compose_pose_matrix(a, b), cov(d_compose_wrt_A(b), d_compose_wrt_B(a))};
    }
  }
  return {};
}

GaussianPose propagate_inverse(const GaussianPose& p) {
  require_dim(p);
  switch (p.param()) {
    case Param::quat: {
      const auto r = inverse_pose_quat(std::get<QuatPose>(p.mean));
      return {r.pose, symmetrize(r.jacobian * p.cov * r.jacobian.transpose())};
    }
    case Param::ypr: {
      const auto& e = std::get<EulerPose>(p.mean);
      const auto r = inverse_pose_quat(ypr_to_quat(e));
      const Mat6 j = jacobian_quat_to_ypr(r.pose) * r.jacobian * jacobian_ypr_to_quat(e);
      return {matrix_to_ypr(inverse_pose_matrix(ypr_to_matrix(e))),
              symmetrize(j * p.cov * j.transpose())};
    }
    case Param::matrix: {
      const auto& m = std::get<HomPose>(p.mean);
      const Mat12 j = d_inverse_wrt_pose(m);
      return {inverse_pose_matrix(m), symmetrize(j * p.cov * j.transpose())};
    }
  }
  return {};
}

GaussianOperand propagate_binary(BinaryOp op, const GaussianOperand& g1,
                                 const GaussianOperand& g2) {
  auto pose = [](const GaussianOperand& g) -> const GaussianPose& {
    if (!std::holds_alternative<GaussianPose>(g)) throw DomainError("expected a Gaussian pose operand");
    return std::get<GaussianPose>(g);
  };
  auto point = [](const GaussianOperand& g) -> const GaussianPoint3& {
    if (!std::holds_alternative<GaussianPoint3>(g)) throw DomainError("expected a Gaussian point operand");
    return std::get<GaussianPoint3>(g);
  };
  switch (op) {
    case BinaryOp::compose_pose_point:
      return propagate_compose_point(pose(g1), point(g2));
    case BinaryOp::inv_compose_point:
      return propagate_inv_compose_point(point(g1), pose(g2));
    case BinaryOp::compose_pose_pose:
      return propagate_compose_pose(pose(g1), pose(g2));
  }
  return g1;
}

}  // namespace posekit
