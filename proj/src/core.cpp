#include "posekit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "posekit/errors.hpp"
#include "posekit/matderiv.hpp"

namespace posekit {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this cos(pitch) the matrix is treated as gimbal-locked in matrix_to_ypr.
constexpr double kMatrixGimbalEps = 1e-8;

struct HalfAngles {
  double ccc, ccs, csc, css, scc, scs, ssc, sss;
};

// Products of half-angle cosines/sines, letters ordered (roll, pitch, yaw).
HalfAngles half_angle_products(const EulerPose& p) {
  const double c1 = std::cos(p.roll / 2), s1 = std::sin(p.roll / 2);
  const double c2 = std::cos(p.pitch / 2), s2 = std::sin(p.pitch / 2);
  const double c3 = std::cos(p.yaw / 2), s3 = std::sin(p.yaw / 2);
  return {c1 * c2 * c3, c1 * c2 * s3, c1 * s2 * c3, c1 * s2 * s3,
          s1 * c2 * c3, s1 * c2 * s3, s1 * s2 * c3, s1 * s2 * s3};
}

Quaternion ypr_quaternion_raw(const EulerPose& p) {
  const HalfAngles h = half_angle_products(p);
  return {h.ccc + h.sss, h.scc - h.css, h.csc + h.scs, h.ccs - h.ssc};
}

Mat3 quat_rotation_unit(const Quaternion& q) {
  const double r = q.r, x = q.x, y = q.y, z = q.z;
  Mat3 m;
  m << r * r + x * x - y * y - z * z, 2 * (x * y - r * z), 2 * (z * x + r * y),
      2 * (x * y + r * z), r * r - x * x + y * y - z * z, 2 * (y * z - r * x),
      2 * (z * x - r * y), 2 * (y * z + r * x), r * r - x * x - y * y + z * z;
  return m;
}

Vec12 vec12_of(const Mat3& r, const Vec3& t) {
  Vec12 v;
  v << r.col(0), r.col(1), r.col(2), t;
  return v;
}

}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, 2 * kPi);
  if (w <= -kPi) w += 2 * kPi;
  return w;
}

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (!(n > 1e-12)) throw DomainError("quaternion norm is zero or not finite");
  return Quaternion{r / n, x / n, y / n, z / n}.canonical();
}

EulerPose EulerPose::normalized(double x, double y, double z, double yaw, double pitch,
                                double roll) {
  pitch = wrap_angle(pitch);
  if (pitch > kPi / 2) {
    pitch = kPi - pitch;
    yaw += kPi;
    roll += kPi;
  } else if (pitch < -kPi / 2) {
    pitch = -kPi - pitch;
    yaw += kPi;
    roll += kPi;
  }
  return {x, y, z, wrap_angle(yaw), pitch, wrap_angle(roll)};
}

HomPose HomPose::checked(const Mat4& m, double tol) {
  HomPose p(m);
  if (!p.is_valid(tol)) throw DomainError("matrix is not a rigid transformation");
  return p;
}

HomPose HomPose::from_vec12(const Vec12& v) {
  Mat4 m = Mat4::Identity();
  for (int c = 0; c < 4; ++c) m.block<3, 1>(0, c) = v.segment<3>(3 * c);
  return HomPose(m);
}

Vec12 HomPose::vec12() const { return vec12_of(rotation(), translation()); }

bool HomPose::is_valid(double tol) const {
  if (!m_.allFinite()) return false;
  if (m_(3, 0) != 0.0 || m_(3, 1) != 0.0 || m_(3, 2) != 0.0 || m_(3, 3) != 1.0) return false;
  const Mat3 r = rotation();
  if ((r.transpose() * r - Mat3::Identity()).norm() >= tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

NormalizedQuaternion quat_normalize(const Quaternion& q) {
  const Vec4 c = q.coeffs();
  const double n2 = c.squaredNorm();
  if (!(n2 > 1e-24) || !std::isfinite(n2)) throw DomainError("quaternion norm is zero or not finite");
  const double n = std::sqrt(n2);
  const Mat4 j = (n2 * Mat4::Identity() - c * c.transpose()) / (n2 * n);
  return {Quaternion::from_coeffs(c / n), j};
}

Mat3 ypr_rotation(double yaw, double pitch, double roll) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  Mat3 r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
      sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
      -sp, cp * sr, cp * cr;
  return r;
}

QuatPose ypr_to_quat(const EulerPose& p) {
  return {p.translation(), ypr_quaternion_raw(p).canonical()};
}

Mat<7, 6> jacobian_ypr_to_quat(const EulerPose& p) {
  const HalfAngles h = half_angle_products(p);
  Mat<4, 3> dq;
  dq << (h.ssc - h.ccs) / 2, (h.scs - h.csc) / 2, (h.css - h.scc) / 2,
      -(h.csc + h.scs) / 2, -(h.ssc + h.ccs) / 2, (h.ccc + h.sss) / 2,
      (h.scc - h.css) / 2, (h.ccc - h.sss) / 2, (h.ccs - h.ssc) / 2,
      (h.ccc + h.sss) / 2, -(h.css + h.scc) / 2, -(h.csc + h.scs) / 2;
  // ypr_to_quat flips the sign to keep qr >= 0; the Jacobian follows.
  if (h.ccc + h.sss < 0.0) dq = -dq;
  Mat<7, 6> j = Mat<7, 6>::Zero();
  j.topLeftCorner<3, 3>().setIdentity();
  j.bottomRightCorner<4, 3>() = dq;
  return j;
}

EulerPose quat_to_ypr(const QuatPose& p, double threshold) {
  const Quaternion q = quat_normalize(p.q).q;
  const double r = q.r, x = q.x, y = q.y, z = q.z;
  const double delta = r * y - x * z;
  EulerPose out{p.t.x(), p.t.y(), p.t.z(), 0.0, 0.0, 0.0};
  if (delta >= threshold) {
    out.yaw = wrap_angle(-2.0 * std::atan2(x, r));
    out.pitch = kPi / 2;
  } else if (delta <= -threshold) {
    out.yaw = wrap_angle(2.0 * std::atan2(x, r));
    out.pitch = -kPi / 2;
  } else {
    out.yaw = std::atan2(2 * (r * z + x * y), 1 - 2 * (y * y + z * z));
    out.pitch = std::asin(std::clamp(2 * delta, -1.0, 1.0));
    out.roll = std::atan2(2 * (r * x + y * z), 1 - 2 * (x * x + y * y));
  }
  return out;
}

Mat<6, 7> jacobian_quat_to_ypr(const QuatPose& p) {
  const NormalizedQuaternion nq = quat_normalize(p.q);
  const double r = nq.q.r, x = nq.q.x, y = nq.q.y, z = nq.q.z;
  const double delta = r * y - x * z;
  if (std::abs(delta) >= kGimbalThreshold)
    throw SingularConfiguration("quaternion to YPR Jacobian is undefined at pitch = +-90 deg");

  // Derivatives with respect to the unit quaternion (r, x, y, z).
  auto atan2_grad = [](double n, double d, const Eigen::RowVector4d& dn,
                       const Eigen::RowVector4d& dd) -> Eigen::RowVector4d {
    return (d * dn - n * dd) / (n * n + d * d);
  };
  Mat<3, 4> du;
  du.row(0) = atan2_grad(2 * (r * z + x * y), 1 - 2 * (y * y + z * z),
                         Eigen::RowVector4d(2 * z, 2 * y, 2 * x, 2 * r),
                         Eigen::RowVector4d(0, 0, -4 * y, -4 * z));
  const double s = 2 * delta;
  du.row(1) = Eigen::RowVector4d(2 * y, -2 * z, 2 * r, -2 * x) / std::sqrt(1 - s * s);
  du.row(2) = atan2_grad(2 * (r * x + y * z), 1 - 2 * (x * x + y * y),
                         Eigen::RowVector4d(2 * x, 2 * r, 2 * z, 2 * y),
                         Eigen::RowVector4d(0, -4 * x, -4 * y, 0));

  Mat<6, 7> j = Mat<6, 7>::Zero();
  j.topLeftCorner<3, 3>().setIdentity();
  j.bottomRightCorner<3, 4>() = du * nq.jacobian;
  return j;
}

HomPose ypr_to_matrix(const EulerPose& p) {
  return HomPose::from_rt(ypr_rotation(p.yaw, p.pitch, p.roll), p.translation());
}

HomPose quat_to_matrix(const QuatPose& p) {
  return HomPose::from_rt(quat_rotation_unit(quat_normalize(p.q).q), p.t);
}

EulerPose matrix_to_ypr(const HomPose& m) {
  const Mat3 r = m.rotation();
  const Vec3 t = m.translation();
  EulerPose out{t.x(), t.y(), t.z(), 0.0, 0.0, 0.0};
  const double cp = std::hypot(r(0, 0), r(1, 0));
  if (cp < kMatrixGimbalEps) {
    if (r(2, 0) > 0.0) {
      out.pitch = -kPi / 2;
      out.yaw = std::atan2(-r(1, 2), -r(0, 2));
    } else {
      out.pitch = kPi / 2;
      out.yaw = std::atan2(r(1, 2), r(0, 2));
    }
  } else {
    out.pitch = std::atan2(-r(2, 0), cp);
    out.yaw = std::atan2(r(1, 0), r(0, 0));
    out.roll = std::atan2(r(2, 1), r(2, 2));
  }
  return out;
}

QuatPose matrix_to_quat(const HomPose& m) { return ypr_to_quat(matrix_to_ypr(m)); }

Mat<6, 12> jacobian_ypr_wrt_matrix(const HomPose& m) {
  const Mat3 r = m.rotation();
  const double p11 = r(0, 0), p21 = r(1, 0), p31 = r(2, 0), p32 = r(2, 1), p33 = r(2, 2);
  const double k = p11 * p11 + p21 * p21;
  const double kr = p32 * p32 + p33 * p33;
  if (k <= 1e-12 || kr <= 1e-12)
    throw SingularConfiguration("YPR Jacobian is undefined at pitch = +-90 deg");
  const double sk = std::sqrt(k);
  const double kp = k + p31 * p31;

  // Column indices follow the column-major vec: p11=0, p21=1, p31=2, p12=3, ...
  Mat<6, 12> j = Mat<6, 12>::Zero();
  j.block<3, 3>(0, 9).setIdentity();
  j(3, 0) = -p21 / k;
  j(3, 1) = p11 / k;
  j(4, 0) = p11 * p31 / (sk * kp);
  j(4, 1) = p21 * p31 / (sk * kp);
  j(4, 2) = -sk / kp;
  j(5, 5) = p33 / kr;
  j(5, 8) = -p32 / kr;
  return j;
}

Mat<12, 6> jacobian_matrix_wrt_ypr(const EulerPose& p) {
  const Mat3 rz = rot_z(p.yaw), ry = rot_y(p.pitch), rx = rot_x(p.roll);
  const Mat3 r = rz * ry * rx;
  const Mat3 d_yaw = hat3(Vec3::UnitZ()) * r;
  const Mat3 d_pitch = rz * hat3(Vec3::UnitY()) * ry * rx;
  const Mat3 d_roll = r * hat3(Vec3::UnitX());
  Mat<12, 6> j = Mat<12, 6>::Zero();
  j.block<3, 3>(9, 0).setIdentity();
  j.col(3) = vec12_of(d_yaw, Vec3::Zero());
  j.col(4) = vec12_of(d_pitch, Vec3::Zero());
  j.col(5) = vec12_of(d_roll, Vec3::Zero());
  return j;
}

Mat<12, 7> jacobian_matrix_wrt_quat(const QuatPose& p) {
  const NormalizedQuaternion nq = quat_normalize(p.q);
  const double r = nq.q.r;
  const Vec3 v = nq.q.vec();
  // R = (r^2 - |v|^2) I + 2 v v^T + 2 r hat(v)
  Mat<12, 4> du = Mat<12, 4>::Zero();
  du.col(0) = vec12_of(2 * r * Mat3::Identity() + 2 * hat3(v), Vec3::Zero());
  for (int k = 0; k < 3; ++k) {
    const Vec3 e = Vec3::Unit(k);
    const Mat3 d = -2 * v[k] * Mat3::Identity() + 2 * (e * v.transpose() + v * e.transpose()) +
                   2 * r * hat3(e);
    du.col(k + 1) = vec12_of(d, Vec3::Zero());
  }
  Mat<12, 7> j = Mat<12, 7>::Zero();
  j.block<3, 3>(9, 0).setIdentity();
  j.rightCols<4>() = du * nq.jacobian;
  return j;
}

PoseValue convert(const PoseValue& v, Param target) {
  switch (param_of(v)) {
    case Param::ypr: {
      const auto& p = std::get<EulerPose>(v);
      if (target == Param::quat) return ypr_to_quat(p);
      if (target == Param::matrix) return ypr_to_matrix(p);
      return p;
    }
    case Param::quat: {
      const auto& p = std::get<QuatPose>(v);
      if (target == Param::ypr) return quat_to_ypr(p);
      if (target == Param::matrix) return quat_to_matrix(p);
      return QuatPose::normalized(p.t, p.q);
    }
    case Param::matrix: {
      const auto& m = std::get<HomPose>(v);
      if (target == Param::ypr) return matrix_to_ypr(m);
      if (target == Param::quat) return matrix_to_quat(m);
      return m;
    }
  }
  return v;
}

Eigen::MatrixXd conversion_jacobian(const PoseValue& v, Param target) {
  const Param src = param_of(v);
  if (src == target) {
    if (src == Param::quat) {
      // Same parameterization still renormalizes.
      const auto& p = std::get<QuatPose>(v);
      Mat7 j = Mat7::Identity();
      j.bottomRightCorner<4, 4>() = quat_normalize(p.q).jacobian;
      if (p.q.r < 0.0) j.bottomRightCorner<4, 4>() *= -1.0;
      return j;
    }
    return Eigen::MatrixXd::Identity(param_dim(src), param_dim(src));
  }
  switch (src) {
    case Param::ypr: {
      const auto& p = std::get<EulerPose>(v);
      if (target == Param::quat) return jacobian_ypr_to_quat(p);
      return jacobian_matrix_wrt_ypr(p);
    }
    case Param::quat: {
      const auto& p = std::get<QuatPose>(v);
      if (target == Param::ypr) return jacobian_quat_to_ypr(p);
      return jacobian_matrix_wrt_quat(p);
    }
    case Param::matrix: {
      const auto& m = std::get<HomPose>(v);
      if (target == Param::ypr) return jacobian_ypr_wrt_matrix(m);
      return jacobian_ypr_to_quat(matrix_to_ypr(m)) * jacobian_ypr_wrt_matrix(m);
    }
  }
  return {};
}

GaussianPose convert_gaussian(const GaussianPose& src, Param target) {
  const int n = param_dim(src.param());
  if (src.cov.rows() != n || src.cov.cols() != n)
    throw DomainError("covariance dimension does not match the pose parameterization");
  const Eigen::MatrixXd j = conversion_jacobian(src.mean, target);
  return {convert(src.mean, target), symmetrize(j * src.cov * j.transpose())};
}

}  // namespace posekit
