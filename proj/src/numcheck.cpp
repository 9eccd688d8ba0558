#include "posekit/numcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "posekit/core.hpp"
#include "posekit/geometry.hpp"
#include "posekit/manifold_jac.hpp"
#include "posekit/matderiv.hpp"
#include "posekit/vision.hpp"

namespace posekit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd numeric_jacobian(const VectorFn& f, const VectorXd& x0, double h) {
  MatrixXd j;
  VectorXd x = x0;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    VectorXd fp, fm;
    try {
      x[i] = x0[i] + h;
      fp = f(x);
      x[i] = x0[i] - h;
      fm = f(x);
    } catch (const std::exception& e) {
      throw FiniteDifferenceError(i, e.what());
    }
    x[i] = x0[i];
    if (i == 0) j.resize(fp.size(), x0.size());
    j.col(i) = (fp - fm) / (2 * h);
  }
  return j;
}

Sampler::Sampler(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  rng_.seed(seq);
}

Vec3 Sampler::translation() { return {uniform(-2, 2), uniform(-2, 2), uniform(-2, 2)}; }

Vec3 Sampler::unit_vector() {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng_), n(rng_), n(rng_));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

Vec3 Sampler::rotation_vector(double max_angle, double min_angle) {
  const Vec3 n = unit_vector();
  return uniform(min_angle, max_angle) * n;
}

EulerPose Sampler::ypr_pose() {
  constexpr double kPitch = 85.0 * std::numbers::pi / 180.0;
  const Vec3 t = translation();
  return {t.x(), t.y(), t.z(), uniform(-3.1, 3.1), uniform(-kPitch, kPitch), uniform(-3.1, 3.1)};
}

QuatPose Sampler::quat_pose() {
  const Vec3 t = translation();
  return {t, so3_exp_quat(rotation_vector())};
}

HomPose Sampler::hom_pose() { return HomPose::from_rt(so3_exp(rotation_vector()), translation()); }

HomPose2 Sampler::pose2() {
  return se2_pseudo_exp(Vec3(uniform(-2, 2), uniform(-2, 2), uniform(-3.0, 3.0)));
}

JacobianReport compare_jacobians(const std::string& op, const MatrixXd& analytic,
                                 const MatrixXd& numeric, double tol) {
  JacobianReport r;
  r.op = op;
  r.analytic = analytic;
  r.numeric = numeric;
  r.samples = 1;
  if (analytic.rows() != numeric.rows() || analytic.cols() != numeric.cols()) {
    r.max_abs_error = std::numeric_limits<double>::infinity();
    r.pass = false;
    return r;
  }
  const MatrixXd diff = (analytic - numeric).cwiseAbs();
  Eigen::Index row = 0, col = 0;
  r.max_abs_error = diff.size() ? diff.maxCoeff(&row, &col) : 0.0;
  if (!std::isfinite(r.max_abs_error) || diff.hasNaN())
    r.max_abs_error = std::numeric_limits<double>::infinity();
  r.worst_row = static_cast<int>(row);
  r.worst_col = static_cast<int>(col);
  r.pass = r.max_abs_error <= tol;
  return r;
}

namespace {

using Pair = std::pair<MatrixXd, MatrixXd>;

struct Check {
  std::string name;
  std::function<Pair(Sampler&)> run;
};

VectorXd v12(const HomPose& m) { return m.vec12(); }
HomPose from12(const VectorXd& v) { return HomPose::from_vec12(Vec12(v)); }
Vec3 v3(const VectorXd& v) { return Vec3(v); }

// YPR pose whose composition with another stays away from gimbal lock and the
// yaw/roll wrap-around.
bool ypr_interior(const EulerPose& p) {
  return std::abs(p.pitch) < 85.0 * std::numbers::pi / 180.0 && std::abs(p.yaw) < 3.1 &&
         std::abs(p.roll) < 3.1;
}

HomPose noisy(Sampler& s, const HomPose& m, double sigma) {
  Vec6 e;
  for (int i = 0; i < 6; ++i) e[i] = s.normal(sigma);
  return m * se3_pseudo_exp(TangentSE3::from_vector(e));
}

// Scales a quaternion so the normalization Jacobian is exercised.
QuatPose unnormalized(Sampler& s, QuatPose p) {
  const double k = s.uniform(0.5, 2.0);
  p.q = Quaternion::from_coeffs(k * p.q.coeffs());
  return p;
}

Point3 point_in_front(Sampler& s) { return {s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(0.5, 3.0)}; }

CameraIntrinsics intrinsics(Sampler& s) {
  return {s.uniform(200, 800), s.uniform(200, 800), s.uniform(100, 400), s.uniform(100, 300)};
}

std::vector<Check> build_catalog() {
  std::vector<Check> c;

  // core
  c.push_back({"core.quat_normalize", [](Sampler& s) {
                 const Quaternion q = unnormalized(s, s.quat_pose()).q;
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return quat_normalize(Quaternion::from_coeffs(Vec4(x))).q.coeffs();
                 };
                 return Pair(quat_normalize(q).jacobian, numeric_jacobian(f, q.coeffs()));
               }});
  c.push_back({"core.jacobian_ypr_to_quat", [](Sampler& s) {
                 const EulerPose p = s.ypr_pose();
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return ypr_to_quat(EulerPose::from_vector(Vec6(x))).vector();
                 };
                 return Pair(jacobian_ypr_to_quat(p), numeric_jacobian(f, p.vector()));
               }});
  c.push_back({"core.jacobian_quat_to_ypr", [](Sampler& s) {
                 const QuatPose p = unnormalized(s, ypr_to_quat(s.ypr_pose()));
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return quat_to_ypr(QuatPose::from_vector(Vec7(x))).vector();
                 };
                 return Pair(jacobian_quat_to_ypr(p), numeric_jacobian(f, p.vector()));
               }});
  c.push_back({"core.jacobian_ypr_wrt_matrix", [](Sampler& s) {
                 const HomPose m = ypr_to_matrix(s.ypr_pose());
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return matrix_to_ypr(from12(x)).vector();
                 };
                 return Pair(jacobian_ypr_wrt_matrix(m), numeric_jacobian(f, v12(m)));
               }});
  c.push_back({"core.jacobian_matrix_wrt_ypr", [](Sampler& s) {
                 const EulerPose p = s.ypr_pose();
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return v12(ypr_to_matrix(EulerPose::from_vector(Vec6(x))));
                 };
                 return Pair(jacobian_matrix_wrt_ypr(p), numeric_jacobian(f, p.vector()));
               }});
  c.push_back({"core.jacobian_matrix_wrt_quat", [](Sampler& s) {
                 const QuatPose p = unnormalized(s, s.quat_pose());
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return v12(quat_to_matrix(QuatPose::from_vector(Vec7(x))));
                 };
                 return Pair(jacobian_matrix_wrt_quat(p), numeric_jacobian(f, p.vector()));
               }});

  // geometry
  c.push_back({"geometry.compose_point_quat.d_pose", [](Sampler& s) {
                 const QuatPose p = unnormalized(s, s.quat_pose());
                 const Point3 a = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_point_quat(QuatPose::from_vector(Vec7(x)), a).point;
                 };
                 return Pair(compose_point_quat(p, a).d_pose, numeric_jacobian(f, p.vector()));
               }});
  c.push_back({"geometry.compose_point_quat.d_point", [](Sampler& s) {
                 const QuatPose p = s.quat_pose();
                 const Point3 a = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_point_quat(p, v3(x)).point;
                 };
                 return Pair(compose_point_quat(p, a).d_point, numeric_jacobian(f, a));
               }});
  c.push_back({"geometry.compose_point_ypr.d_pose", [](Sampler& s) {
                 const EulerPose p = s.ypr_pose();
                 const Point3 a = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_point_ypr(EulerPose::from_vector(Vec6(x)), a).point;
                 };
                 return Pair(compose_point_ypr(p, a).d_pose, numeric_jacobian(f, p.vector()));
               }});
  c.push_back({"geometry.compose_point_ypr.d_point", [](Sampler& s) {
                 const EulerPose p = s.ypr_pose();
                 const Point3 a = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_point_ypr(p, v3(x)).point;
                 };
                 return Pair(compose_point_ypr(p, a).d_point, numeric_jacobian(f, a));
               }});
  c.push_back({"geometry.inv_compose_point_quat.d_pose", [](Sampler& s) {
                 const QuatPose p = unnormalized(s, s.quat_pose());
                 const Point3 a = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return inv_compose_point_quat(a, QuatPose::from_vector(Vec7(x))).point;
                 };
                 return Pair(inv_compose_point_quat(a, p).d_pose, numeric_jacobian(f, p.vector()));
               }});
  c.push_back({"geometry.inv_compose_point_quat.d_point", [](Sampler& s) {
                 const QuatPose p = s.quat_pose();
                 const Point3 a = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return inv_compose_point_quat(v3(x), p).point;
                 };
                 return Pair(inv_compose_point_quat(a, p).d_point, numeric_jacobian(f, a));
               }});
  c.push_back({"geometry.compose_pose_quat.d_first", [](Sampler& s) {
                 const QuatPose p1 = unnormalized(s, s.quat_pose()), p2 = s.quat_pose();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_pose_quat(QuatPose::from_vector(Vec7(x)), p2).pose.vector();
                 };
                 return Pair(compose_pose_quat(p1, p2).d_first, numeric_jacobian(f, p1.vector()));
               }});
  c.push_back({"geometry.compose_pose_quat.d_second", [](Sampler& s) {
                 const QuatPose p1 = s.quat_pose(), p2 = unnormalized(s, s.quat_pose());
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_pose_quat(p1, QuatPose::from_vector(Vec7(x))).pose.vector();
                 };
                 return Pair(compose_pose_quat(p1, p2).d_second, numeric_jacobian(f, p2.vector()));
               }});
  auto ypr_pair = [](Sampler& s) {
    while (true) {
      const EulerPose p1 = s.ypr_pose(), p2 = s.ypr_pose();
      if (ypr_interior(matrix_to_ypr(ypr_to_matrix(p1) * ypr_to_matrix(p2))))
        return std::make_pair(p1, p2);
    }
  };
  c.push_back({"geometry.compose_pose_ypr.d_first", [ypr_pair](Sampler& s) {
                 const auto [p1, p2] = ypr_pair(s);
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_pose_ypr(EulerPose::from_vector(Vec6(x)), p2).pose.vector();
                 };
                 return Pair(compose_pose_ypr(p1, p2).d_first, numeric_jacobian(f, p1.vector()));
               }});
  c.push_back({"geometry.compose_pose_ypr.d_second", [ypr_pair](Sampler& s) {
                 const auto [p1, p2] = ypr_pair(s);
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_pose_ypr(p1, EulerPose::from_vector(Vec6(x))).pose.vector();
                 };
                 return Pair(compose_pose_ypr(p1, p2).d_second, numeric_jacobian(f, p2.vector()));
               }});
  c.push_back({"geometry.inverse_pose_quat", [](Sampler& s) {
                 const QuatPose p = unnormalized(s, s.quat_pose());
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return inverse_pose_quat(QuatPose::from_vector(Vec7(x))).pose.vector();
                 };
                 return Pair(inverse_pose_quat(p).jacobian, numeric_jacobian(f, p.vector()));
               }});

  // matderiv: extrinsic derivatives over the 12-vector
  c.push_back({"matderiv.d_compose_wrt_A", [](Sampler& s) {
                 const HomPose a = s.hom_pose(), b = s.hom_pose();
                 auto f = [&](const VectorXd& x) -> VectorXd { return v12(from12(x) * b); };
                 return Pair(d_compose_wrt_A(b), numeric_jacobian(f, v12(a)));
               }});
  c.push_back({"matderiv.d_compose_wrt_B", [](Sampler& s) {
                 const HomPose a = s.hom_pose(), b = s.hom_pose();
                 auto f = [&](const VectorXd& x) -> VectorXd { return v12(a * from12(x)); };
                 return Pair(d_compose_wrt_B(a), numeric_jacobian(f, v12(b)));
               }});
  c.push_back({"matderiv.d_apply_wrt_point", [](Sampler& s) {
                 const HomPose a = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd { return compose_point_matrix(a, v3(x)); };
                 return Pair(d_apply_wrt_point(a), numeric_jacobian(f, p));
               }});
  c.push_back({"matderiv.d_apply_wrt_pose", [](Sampler& s) {
                 const HomPose a = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return compose_point_matrix(from12(x), p);
                 };
                 return Pair(d_apply_wrt_pose(p), numeric_jacobian(f, v12(a)));
               }});
  c.push_back({"matderiv.d_inverse_wrt_pose", [](Sampler& s) {
                 const HomPose a = s.hom_pose();
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return v12(inverse_pose_matrix(from12(x)));
                 };
                 return Pair(d_inverse_wrt_pose(a), numeric_jacobian(f, v12(a)));
               }});
  c.push_back({"matderiv.d_invapply_wrt_point", [](Sampler& s) {
                 const HomPose a = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return inv_compose_point_matrix(v3(x), a);
                 };
                 return Pair(d_invapply_wrt_point(a), numeric_jacobian(f, p));
               }});
  c.push_back({"matderiv.d_invapply_wrt_pose", [](Sampler& s) {
                 const HomPose a = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return inv_compose_point_matrix(p, from12(x));
                 };
                 return Pair(d_invapply_wrt_pose(a, p), numeric_jacobian(f, v12(a)));
               }});

  // manifold_jac
  c.push_back({"manifold_jac.dexp_so3_at_zero", [](Sampler&) {
                 auto f = [](const VectorXd& w) -> VectorXd {
                   return vec(so3_exp(v3(w)));
                 };
                 return Pair(dexp_so3_at_zero(), numeric_jacobian(f, Vec3::Zero()));
               }});
  c.push_back({"manifold_jac.dexp_so3_quat", [](Sampler& s) {
                 const Vec3 w = s.rotation_vector();
                 auto f = [](const VectorXd& x) -> VectorXd { return so3_exp_quat(v3(x)).coeffs(); };
                 return Pair(dexp_so3_quat(w), numeric_jacobian(f, w));
               }});
  c.push_back({"manifold_jac.dexp_se3_at_zero", [](Sampler&) {
                 auto f = [](const VectorXd& e) -> VectorXd {
                   return v12(se3_pseudo_exp(TangentSE3::from_vector(Vec6(e))));
                 };
                 return Pair(dexp_se3_at_zero(), numeric_jacobian(f, Vec6::Zero()));
               }});
  c.push_back({"manifold_jac.dlog_so3", [](Sampler& s) {
                 const Mat3 r = so3_exp(s.rotation_vector(2.8, 1e-3));
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return so3_log(Eigen::Map<const Mat3>(x.data()));
                 };
                 return Pair(dlog_so3(r), numeric_jacobian(f, vec(r)));
               }});
  c.push_back({"manifold_jac.jacob_expeD_de", [](Sampler& s) {
                 const HomPose d = s.hom_pose();
                 return Pair(jacob_expeD_de(d), manifold_numeric_jacobian(v12, d, Side::left));
               }});
  c.push_back({"manifold_jac.jacob_Dexpe_de", [](Sampler& s) {
                 const HomPose d = s.hom_pose();
                 return Pair(jacob_Dexpe_de(d), manifold_numeric_jacobian(v12, d, Side::right));
               }});
  c.push_back({"manifold_jac.jacob_expeDp_de", [](Sampler& s) {
                 const HomPose d = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const HomPose& m) -> VectorXd { return compose_point_matrix(m, p); };
                 return Pair(jacob_expeDp_de(d, p), manifold_numeric_jacobian(f, d, Side::left));
               }});
  c.push_back({"manifold_jac.jacob_p_ominus_expeD_de", [](Sampler& s) {
                 const HomPose d = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const HomPose& m) -> VectorXd { return inv_compose_point_matrix(p, m); };
                 return Pair(jacob_p_ominus_expeD_de(d, p),
                             manifold_numeric_jacobian(f, d, Side::left));
               }});
  c.push_back({"manifold_jac.jacob_AexpeD_de", [](Sampler& s) {
                 const HomPose a = s.hom_pose(), d = s.hom_pose();
                 auto f = [&](const HomPose& m) -> VectorXd { return v12(a * m); };
                 return Pair(jacob_AexpeD_de(a, d), manifold_numeric_jacobian(f, d, Side::left));
               }});
  c.push_back({"manifold_jac.jacob_AexpeDp_de", [](Sampler& s) {
                 const HomPose a = s.hom_pose(), d = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const HomPose& m) -> VectorXd {
                   return compose_point_matrix(a * m, p);
                 };
                 return Pair(jacob_AexpeDp_de(a, d, p), manifold_numeric_jacobian(f, d, Side::left));
               }});
  c.push_back({"manifold_jac.jacob_p_ominus_AexpeD_de", [](Sampler& s) {
                 const HomPose a = s.hom_pose(), d = s.hom_pose();
                 const Point3 p = s.point();
                 auto f = [&](const HomPose& m) -> VectorXd {
                   return inv_compose_point_matrix(p, a * m);
                 };
                 return Pair(jacob_p_ominus_AexpeD_de(a, d, p),
                             manifold_numeric_jacobian(f, d, Side::left));
               }});
  c.push_back({"manifold_jac.dpseudolog_se3", [](Sampler& s) {
                 const HomPose t =
                     HomPose::from_rt(so3_exp(s.rotation_vector(2.8, 1e-3)), s.translation());
                 auto f = [](const VectorXd& x) -> VectorXd {
                   return se3_pseudo_log(from12(x)).vector();
                 };
                 return Pair(dpseudolog_se3(t), numeric_jacobian(f, v12(t)));
               }});
  auto edge3 = [](Sampler& s) {
    const HomPose d = s.hom_pose(), p1 = s.hom_pose();
    return std::make_tuple(d, p1, noisy(s, p1 * d, 0.1));
  };
  c.push_back({"manifold_jac.edge_error_se3.j1", [edge3](Sampler& s) {
                 const auto [d, p1, p2] = edge3(s);
                 auto f = [&](const HomPose& m) -> VectorXd {
                   return edge_error_se3(d, m, p2).e.vector();
                 };
                 return Pair(edge_error_se3(d, p1, p2).j1,
                             manifold_numeric_jacobian(f, p1, Side::right));
               }});
  c.push_back({"manifold_jac.edge_error_se3.j2", [edge3](Sampler& s) {
                 const auto [d, p1, p2] = edge3(s);
                 auto f = [&](const HomPose& m) -> VectorXd {
                   return edge_error_se3(d, p1, m).e.vector();
                 };
                 return Pair(edge_error_se3(d, p1, p2).j2,
                             manifold_numeric_jacobian(f, p2, Side::right));
               }});
  c.push_back({"manifold_jac.jacob_Dexpe_de_se2", [](Sampler& s) {
                 const HomPose2 d = s.pose2();
                 auto f = [](const HomPose2& m) -> VectorXd { return se2_pseudo_log(m); };
                 return Pair(jacob_Dexpe_de_se2(d), manifold_numeric_jacobian(f, d, Side::right));
               }});
  auto se2_pair = [](Sampler& s) {
    while (true) {
      const HomPose2 a = s.pose2(), b = s.pose2();
      if (std::abs(se2_pseudo_log(a * b)[2]) < 3.1) return std::make_pair(a, b);
    }
  };
  c.push_back({"manifold_jac.d_compose_se2_wrt_A", [se2_pair](Sampler& s) {
                 const auto [a, b] = se2_pair(s);
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return se2_pseudo_log(se2_pseudo_exp(v3(x)) * b);
                 };
                 return Pair(d_compose_se2_wrt_A(a, b), numeric_jacobian(f, se2_pseudo_log(a)));
               }});
  c.push_back({"manifold_jac.d_compose_se2_wrt_B", [se2_pair](Sampler& s) {
                 const auto [a, b] = se2_pair(s);
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return se2_pseudo_log(a * se2_pseudo_exp(v3(x)));
                 };
                 return Pair(d_compose_se2_wrt_B(a), numeric_jacobian(f, se2_pseudo_log(b)));
               }});
  auto edge2 = [](Sampler& s) {
    const HomPose2 d = s.pose2(), p1 = s.pose2();
    const Vec3 n(s.normal(0.1), s.normal(0.1), s.normal(0.1));
    return std::make_tuple(d, p1, p1 * d * se2_pseudo_exp(n));
  };
  c.push_back({"manifold_jac.edge_error_se2.j1", [edge2](Sampler& s) {
                 const auto [d, p1, p2] = edge2(s);
                 auto f = [&](const HomPose2& m) -> VectorXd { return edge_error_se2(d, m, p2).e; };
                 return Pair(edge_error_se2(d, p1, p2).j1,
                             manifold_numeric_jacobian(f, p1, Side::right));
               }});
  c.push_back({"manifold_jac.edge_error_se2.j2", [edge2](Sampler& s) {
                 const auto [d, p1, p2] = edge2(s);
                 auto f = [&](const HomPose2& m) -> VectorXd { return edge_error_se2(d, p1, m).e; };
                 return Pair(edge_error_se2(d, p1, p2).j2,
                             manifold_numeric_jacobian(f, p2, Side::right));
               }});

  // vision
  c.push_back({"vision.dproject_dp", [](Sampler& s) {
                 const CameraIntrinsics k = intrinsics(s);
                 const Point3 p = point_in_front(s);
                 auto f = [&](const VectorXd& x) -> VectorXd { return project(k, v3(x)).vector(); };
                 return Pair(dproject_dp(k, p), numeric_jacobian(f, p));
               }});
  c.push_back({"vision.project_pose_point.j_eps", [](Sampler& s) {
                 const CameraIntrinsics k = intrinsics(s);
                 const HomPose a = s.hom_pose();
                 const Point3 p = inv_compose_point_matrix(point_in_front(s), a);
                 auto f = [&](const HomPose& m) -> VectorXd {
                   return project_pose_point(k, m, p).pixel.vector();
                 };
                 return Pair(project_pose_point(k, a, p).j_eps,
                             manifold_numeric_jacobian(f, a, Side::left));
               }});
  c.push_back({"vision.project_pose_point.j_p", [](Sampler& s) {
                 const CameraIntrinsics k = intrinsics(s);
                 const HomPose a = s.hom_pose();
                 const Point3 p = inv_compose_point_matrix(point_in_front(s), a);
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return project_pose_point(k, a, v3(x)).pixel.vector();
                 };
                 return Pair(project_pose_point(k, a, p).j_p, numeric_jacobian(f, p));
               }});
  c.push_back({"vision.project_inv_pose_point.j_eps", [](Sampler& s) {
                 const CameraIntrinsics k = intrinsics(s);
                 const HomPose a = s.hom_pose();
                 const Point3 p = compose_point_matrix(a, point_in_front(s));
                 auto f = [&](const HomPose& m) -> VectorXd {
                   return project_inv_pose_point(k, m, p).pixel.vector();
                 };
                 return Pair(project_inv_pose_point(k, a, p).j_eps,
                             manifold_numeric_jacobian(f, a, Side::left));
               }});
  c.push_back({"vision.project_inv_pose_point.j_p", [](Sampler& s) {
                 const CameraIntrinsics k = intrinsics(s);
                 const HomPose a = s.hom_pose();
                 const Point3 p = compose_point_matrix(a, point_in_front(s));
                 auto f = [&](const VectorXd& x) -> VectorXd {
                   return project_inv_pose_point(k, a, v3(x)).pixel.vector();
                 };
                 return Pair(project_inv_pose_point(k, a, p).j_p, numeric_jacobian(f, p));
               }});

  std::sort(c.begin(), c.end(), [](const Check& x, const Check& y) { return x.name < y.name; });
  return c;
}

std::uint64_t name_stream(const std::string& name) {
  // FNV-1a, so each check draws an independent stream regardless of catalog order.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const Check& c : build_catalog()) names.push_back(c.name);
  return names;
}

std::vector<JacobianReport> check_catalog(std::uint64_t seed, int n_samples, double tol) {
  std::vector<JacobianReport> reports;
  if (n_samples <= 0) return reports;
  for (const Check& check : build_catalog()) {
    Sampler sampler(seed, name_stream(check.name));
    JacobianReport worst;
    worst.op = check.name;
    worst.max_abs_error = -1.0;
    for (int i = 0; i < n_samples; ++i) {
      JacobianReport r;
      try {
        const auto [analytic, numeric] = check.run(sampler);
        r = compare_jacobians(check.name, analytic, numeric, tol);
      } catch (const std::exception& e) {
        r.op = check.name;
        r.max_abs_error = std::numeric_limits<double>::infinity();
        r.pass = false;
      }
      if (r.max_abs_error > worst.max_abs_error) worst = r;
    }
    worst.samples = n_samples;
    worst.pass = worst.max_abs_error <= tol;
    reports.push_back(std::move(worst));
  }
  return reports;
}

}  // namespace posekit
