#include "posekit/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "posekit/errors.hpp"
#include "posekit/matderiv.hpp"

namespace posekit {

namespace {

constexpr double kPi = std::numbers::pi;

// Between pi - kLogAxisBand and pi - kNearPi, so3_log takes the axis from the
// normalized skew part: sin(theta) recovered from the trace loses too many digits.
constexpr double kLogAxisBand = 1e-2;

// sin(t)/t
double sinc(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

// (1 - cos t)/t^2
double cosc(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  }
  return (1.0 - std::cos(t)) / (t * t);
}

// (t - sin t)/t^3
double sinc3(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  }
  return (t - std::sin(t)) / (t * t * t);
}

// (1 - (t/2) cot(t/2)) / t^2, the W^2 coefficient of V^-1.
double vinv_coeff(double t) {
  if (std::abs(t) < kSmallAngle) {
    const double t2 = t * t;
    return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  }
  return (1.0 - t * std::cos(t / 2) / (2 * std::sin(t / 2))) / (t * t);
}

Vec3 skew_part(const Mat3& r) { return {r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)}; }

Vec3 log_near_pi(const Mat3& r, double trace) {
  const Mat3 s = r + r.transpose() + (1.0 - trace) * Mat3::Identity();
  const double denom = 3.0 - trace;
  int i = 0;
  s.diagonal().maxCoeff(&i);
  Vec3 n;
  n[i] = std::sqrt(std::max(s(i, i), 0.0) / denom);
  for (int k = 0; k < 3; ++k)
    if (k != i) n[k] = s(i, k) / (denom * n[i]);
  n.normalize();
  const Vec3 v = skew_part(r);
  if (v.norm() > 1e-12 && n.dot(v) < 0.0) n = -n;
  const double c = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  return std::atan2(v.norm() / 2.0, c) * n;
}

}  // namespace

Mat3 so3_exp(const Vec3& w) {
  const double t = w.norm();
  const Mat3 k = hat3(w);
  return Mat3::Identity() + sinc(t) * k + cosc(t) * k * k;
}

Mat3 so3_exp_coordinate(const AxisAngle& a) {
  const double n1 = a.n.x(), n2 = a.n.y(), n3 = a.n.z();
  const double c = std::cos(a.theta), s = std::sin(a.theta), v = 1.0 - c;
  Mat3 r;
  r << n1 * n1 * v + c, n1 * n2 * v - n3 * s, n1 * n3 * v + n2 * s,
      n1 * n2 * v + n3 * s, n2 * n2 * v + c, n2 * n3 * v - n1 * s,
      n1 * n3 * v - n2 * s, n2 * n3 * v + n1 * s, n3 * n3 * v + c;
  return r;
}

RotationFactorization axis_angle_factorization(const AxisAngle& a) {
  const double n1 = a.n.x(), n2 = a.n.y(), n3 = a.n.z();
  const double s2 = n1 * n1 + n2 * n2;
  if (s2 <= 1e-12) throw DomainError("axis parallel to z has no factorization P Rz P^T");
  const double s = std::sqrt(s2);
  Mat3 p;
  p << n3 * n1 / s, -n2 / s, n1, n3 * n2 / s, n1 / s, n2, -s, 0, n3;
  const double c = std::cos(a.theta), sn = std::sin(a.theta);
  Mat3 rz;
  rz << c, -sn, 0, sn, c, 0, 0, 0, 1;
  return {p, rz};
}

Quaternion so3_exp_quat(const Vec3& w) {
  const double t = w.norm();
  double k;
  if (t < kSmallAngle) {
    const double t2 = t * t;
    k = 0.5 - t2 / 48.0 + t2 * t2 / 3840.0;
  } else {
    k = std::sin(t / 2) / t;
  }
  return {std::cos(t / 2), k * w.x(), k * w.y(), k * w.z()};
}

Vec3 so3_log(const Mat3& r) {
  const double trace = r.trace();
  const double c = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    return skew_part(r) * 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
  }
  if (theta > kPi - kNearPi) return log_near_pi(r, trace);
  if (theta > kPi - kLogAxisBand) {
    const Vec3 v = skew_part(r);
    const double vn = v.norm();
    return std::atan2(vn / 2.0, c) / vn * v;
  }
  return theta / (2.0 * std::sqrt(1.0 - c * c)) * skew_part(r);
}

Vec3 so3_log_quat(const Quaternion& q) {
  const Quaternion u = q.normalized();
  const Vec3 v = u.vec();
  const double vn = v.norm();
  if (vn < 1e-12) return 2.0 / u.r * v;
  return 2.0 * std::atan2(vn, u.r) / vn * v;
}

HomPose se3_exp(const TangentSE3& v) {
  const double t = v.w.norm();
  const Mat3 k = hat3(v.w);
  const Mat3 vm = Mat3::Identity() + cosc(t) * k + sinc3(t) * k * k;
  return HomPose::from_rt(so3_exp(v.w), vm * v.t);
}

TangentSE3 se3_log(const HomPose& m) {
  const Vec3 w = so3_log(m.rotation());
  const double t = w.norm();
  if (t > kPi - kNearPi)
    throw RangeError("se3_log: rotation angle too close to pi for the closed-form V^-1");
  const Mat3 k = hat3(w);
  const Mat3 vinv = Mat3::Identity() - 0.5 * k + vinv_coeff(t) * k * k;
  return {vinv * m.translation(), w};
}

HomPose se3_pseudo_exp(const TangentSE3& v) { return HomPose::from_rt(so3_exp(v.w), v.t); }

TangentSE3 se3_pseudo_log(const HomPose& m) { return {m.translation(), so3_log(m.rotation())}; }

Mat2 rot2(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

HomPose2 se2_exp(const TangentSE2& v) {
  Mat2 k;
  k << 0, -v.phi, v.phi, 0;
  const Mat2 vm = Mat2::Identity() + cosc(v.phi) * k + sinc3(v.phi) * k * k;
  return HomPose2::from_rt(rot2(v.phi), vm * v.t);
}

TangentSE2 se2_log(const HomPose2& m) {
  const Mat2 r = m.rotation();
  const double phi = std::atan2(r(1, 0), r(0, 0));
  Mat2 k;
  k << 0, -phi, phi, 0;
  const Mat2 vinv = Mat2::Identity() - 0.5 * k + vinv_coeff(phi) * k * k;
  return {vinv * m.translation(), phi};
}

HomPose2 se2_pseudo_exp(const Vec3& v) { return HomPose2::from_rt(rot2(v[2]), v.head<2>()); }

Vec3 se2_pseudo_log(const HomPose2& m) {
  const Mat2 r = m.rotation();
  const Vec2 t = m.translation();
  return {t.x(), t.y(), std::atan2(r(1, 0), r(0, 0))};
}

}  // namespace posekit
