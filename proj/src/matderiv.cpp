#include "posekit/matderiv.hpp"

#include "posekit/errors.hpp"

namespace posekit {

Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd transpose_permutation(int m, int n) {
  // A is n x m: A(i, j) sits at j*n + i, A^T(j, i) at i*m + j.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m * n, m * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) t(i * m + j, j * n + i) = 1.0;
  return t;
}

Mat3 hat3(const Vec3& w) {
  Mat3 s;
  s << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return s;
}

Vec3 vee3(const Mat3& s) {
  if ((s + s.transpose()).norm() >= 1e-9) throw DomainError("vee3: matrix is not skew-symmetric");
  return {s(2, 1), s(0, 2), s(1, 0)};
}

Mat12 d_compose_wrt_A(const HomPose& b) {
  const Mat<3, 4> tb = b.matrix().topRows<3>();
  // vec(A B) = (B^T (x) I) vec(A) over the 3x4 blocks, with the bottom row of B
  // contributing the translation of A.
  Mat12 j = Mat12::Zero();
  for (int c = 0; c < 4; ++c)
    for (int k = 0; k < 4; ++k) {
      const double bkc = k < 3 ? tb(k, c) : (c == 3 ? 1.0 : 0.0);
      if (bkc != 0.0) j.block<3, 3>(3 * c, 3 * k) = bkc * Mat3::Identity();
    }
  return j;
}

Mat12 d_compose_wrt_B(const HomPose& a) {
  Mat12 j = Mat12::Zero();
  const Mat3 r = a.rotation();
  for (int c = 0; c < 4; ++c) j.block<3, 3>(3 * c, 3 * c) = r;
  return j;
}

Mat3 d_apply_wrt_point(const HomPose& a) { return a.rotation(); }

Mat<3, 12> d_apply_wrt_pose(const Point3& p) {
  Mat<3, 12> j;
  j << p.x() * Mat3::Identity(), p.y() * Mat3::Identity(), p.z() * Mat3::Identity(),
      Mat3::Identity();
  return j;
}

Mat12 d_inverse_wrt_pose(const HomPose& a) {
  const Mat3 r = a.rotation();
  const Vec3 t = a.translation();
  Mat12 j = Mat12::Zero();
  j.topLeftCorner<9, 9>() = transpose_permutation(3, 3);
  for (int i = 0; i < 3; ++i) j.block<1, 3>(9 + i, 3 * i) = -t.transpose();
  j.bottomRightCorner<3, 3>() = -r.transpose();
  return j;
}

Mat3 d_invapply_wrt_point(const HomPose& a) { return a.rotation().transpose(); }

Mat<3, 12> d_invapply_wrt_pose(const HomPose& a, const Point3& p) {
  const Vec3 d = p - a.translation();
  Mat<3, 12> j = Mat<3, 12>::Zero();
  for (int i = 0; i < 3; ++i) j.block<1, 3>(i, 3 * i) = d.transpose();
  j.rightCols<3>() = -a.rotation().transpose();
  return j;
}

}  // namespace posekit
