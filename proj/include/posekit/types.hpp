#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <variant>

namespace posekit {

template <int R, int C>
using Mat = Eigen::Matrix<double, R, C>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Mat<6, 1>;
using Vec7 = Mat<7, 1>;
using Vec12 = Mat<12, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Mat<6, 6>;
using Mat7 = Mat<7, 7>;
using Mat12 = Mat<12, 12>;
using Point3 = Vec3;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Rotation quaternion stored as (qr, qx, qy, qz). Not normalized implicitly;
/// use normalized()/canonical() or the QuatPose factory.
struct Quaternion {
  double r = 1.0, x = 0.0, y = 0.0, z = 0.0;

  Quaternion() = default;
  Quaternion(double qr, double qx, double qy, double qz) : r(qr), x(qx), y(qy), z(qz) {}

  static Quaternion from_coeffs(const Vec4& c) { return {c[0], c[1], c[2], c[3]}; }
  Vec4 coeffs() const { return {r, x, y, z}; }
  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return coeffs().norm(); }
  Quaternion conjugate() const { return {r, -x, -y, -z}; }
  /// Unit norm with qr >= 0. Throws DomainError for a (near) zero quaternion.
  Quaternion normalized() const;
  Quaternion canonical() const { return r < 0.0 ? Quaternion{-r, -x, -y, -z} : *this; }
};

/// 3D translation plus yaw (about z), pitch (about y), roll (about x).
struct EulerPose {
  double x = 0.0, y = 0.0, z = 0.0;
  double yaw = 0.0, pitch = 0.0, roll = 0.0;

  /// Brings the angles into yaw, roll in (-pi, pi] and pitch in [-pi/2, pi/2]
  /// without changing the rotation.
  static EulerPose normalized(double x, double y, double z, double yaw, double pitch, double roll);

  Vec3 translation() const { return {x, y, z}; }
  Vec6 vector() const {
    Vec6 v;
    v << x, y, z, yaw, pitch, roll;
    return v;
  }
  static EulerPose from_vector(const Vec6& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }
};

/// 3D translation plus rotation quaternion; 7-vector order (x, y, z, qr, qx, qy, qz).
struct QuatPose {
  Vec3 t = Vec3::Zero();
  Quaternion q;

  /// Normalizes and canonicalizes the quaternion.
  static QuatPose normalized(const Vec3& t, const Quaternion& q) { return {t, q.normalized()}; }

  Vec7 vector() const {
    Vec7 v;
    v << t, q.coeffs();
    return v;
  }
  static QuatPose from_vector(const Vec7& v) {
    return {v.head<3>(), Quaternion::from_coeffs(v.tail<4>())};
  }
};

/// 4x4 homogeneous transform. The constructor does not validate: finite-difference
/// oracles perturb all 12 entries independently and leave SE(3). Use checked()
/// for inputs from outside the library.
class HomPose {
 public:
  HomPose() : m_(Mat4::Identity()) {}
  explicit HomPose(const Mat4& m) : m_(m) {}
  static HomPose from_rt(const Mat3& r, const Vec3& t) {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = r;
    m.topRightCorner<3, 1>() = t;
    return HomPose(m);
  }
  /// Throws DomainError unless is_valid(tol).
  static HomPose checked(const Mat4& m, double tol = 1e-9);
  /// Inverse of vec12(): column-major top 3x4 block, bottom row (0,0,0,1).
  static HomPose from_vec12(const Vec12& v);

  const Mat4& matrix() const { return m_; }
  Mat3 rotation() const { return m_.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return m_.topRightCorner<3, 1>(); }
  /// Column-major vec of the top 3x4 block: R columns, then t.
  Vec12 vec12() const;
  bool is_valid(double tol = 1e-9) const;

  HomPose operator*(const HomPose& o) const { return HomPose(m_ * o.m_); }

 private:
  Mat4 m_;
};

/// Planar pose (x, y, phi).
struct Pose2 {
  double x = 0.0, y = 0.0, phi = 0.0;
  Vec3 vector() const { return {x, y, phi}; }
  static Pose2 from_vector(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

/// 3x3 homogeneous planar transform.
class HomPose2 {
 public:
  HomPose2() : m_(Mat3::Identity()) {}
  explicit HomPose2(const Mat3& m) : m_(m) {}
  static HomPose2 from_rt(const Mat2& r, const Vec2& t) {
    Mat3 m = Mat3::Identity();
    m.topLeftCorner<2, 2>() = r;
    m.topRightCorner<2, 1>() = t;
    return HomPose2(m);
  }
  const Mat3& matrix() const { return m_; }
  Mat2 rotation() const { return m_.topLeftCorner<2, 2>(); }
  Vec2 translation() const { return m_.topRightCorner<2, 1>(); }
  HomPose2 operator*(const HomPose2& o) const { return HomPose2(m_ * o.m_); }
  HomPose2 inverse() const {
    const Mat2 rt = rotation().transpose();
    return from_rt(rt, -rt * translation());
  }

 private:
  Mat3 m_;
};

enum class Param { ypr, quat, matrix };

inline int param_dim(Param p) { return p == Param::ypr ? 6 : p == Param::quat ? 7 : 12; }

using PoseValue = std::variant<EulerPose, QuatPose, HomPose>;

inline Param param_of(const PoseValue& v) { return static_cast<Param>(v.index()); }

/// Pose mean in any parameterization plus covariance of matching dimension
/// (6 for YPR, 7 for quaternion, 12 for the matrix 12-vector).
struct GaussianPose {
  PoseValue mean;
  Eigen::MatrixXd cov;

  Param param() const { return param_of(mean); }
};

struct GaussianPoint3 {
  Point3 mean = Point3::Zero();
  Mat3 cov = Mat3::Zero();
};

/// (S + S^T) / 2.
inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& s) { return 0.5 * (s + s.transpose()); }

}  // namespace posekit
