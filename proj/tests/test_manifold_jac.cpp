#include <cmath>
#include <numbers>

#include "posekit/core.hpp"
#include "posekit/errors.hpp"
#include "posekit/geometry.hpp"
#include "posekit/lie.hpp"
#include "posekit/manifold_jac.hpp"
#include "posekit/matderiv.hpp"
#include "posekit/numcheck.hpp"
#include "test_util.hpp"

using namespace posekit;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kFdTol = 1e-6;

Mat3 mat3_from(const VectorXd& x) { return Eigen::Map<const Mat3>(x.data()); }

}  // namespace

TEST_SUITE("manifold_jac") {
  TEST_CASE("dexp at zero") {
    const Mat<9, 3> j = dexp_so3_at_zero();
    auto f = [](const VectorXd& w) -> VectorXd { return vec(so3_exp(Vec3(w))); };
    CHECK(maxdiff(j, numeric_jacobian(f, VectorXd::Zero(3))) < 1e-9);
    // Column i is vec(hat(e_i)).
    for (int i = 0; i < 3; ++i) CHECK(maxdiff(j.col(i), vec(hat3(Vec3::Unit(i)))) == 0.0);

    auto g = [](const VectorXd& e) -> VectorXd {
      return se3_pseudo_exp(TangentSE3::from_vector(Vec6(e))).vec12();
    };
    CHECK(maxdiff(dexp_se3_at_zero(), numeric_jacobian(g, VectorXd::Zero(6))) < 1e-9);
  }

  TEST_CASE("dexp_so3_quat") {
    Mat<4, 3> at0 = Mat<4, 3>::Zero();
    at0.bottomRows<3>() = 0.5 * Mat3::Identity();
    CHECK(maxdiff(dexp_so3_quat(Vec3::Zero()), at0) == 0.0);
    auto f = [](const VectorXd& w) -> VectorXd { return so3_exp_quat(Vec3(w)).coeffs(); };
    Sampler s(401);
    for (int i = 0; i < 100; ++i) {
      const Vec3 w = s.rotation_vector(3.0);
      CHECK(maxdiff(dexp_so3_quat(w), numeric_jacobian(f, w)) < kFdTol);
    }
    // Both sides of the series switch agree.
    const Vec3 n = Vec3(1, 2, -1).normalized();
    CHECK(maxdiff(dexp_so3_quat(n * kSmallAngle * (1 - 1e-9)),
                  dexp_so3_quat(n * kSmallAngle * (1 + 1e-9))) < 1e-12);
  }

  TEST_CASE("dlog_so3") {
    // At the identity: +-1/2 on the skew-symmetric entries, 0 elsewhere.
    Mat<3, 9> half = Mat<3, 9>::Zero();
    half(0, 5) = 0.5;
    half(0, 7) = -0.5;
    half(1, 6) = 0.5;
    half(1, 2) = -0.5;
    half(2, 1) = 0.5;
    half(2, 3) = -0.5;
    CHECK(maxdiff(dlog_so3(Mat3::Identity()), half) == 0.0);

    auto f = [](const VectorXd& x) -> VectorXd { return so3_log(mat3_from(x)); };
    Sampler s(403);
    for (int i = 0; i < 100; ++i) {
      const Mat3 r = so3_exp(s.rotation_vector(2.8, 0.01));
      CHECK(maxdiff(dlog_so3(r), numeric_jacobian(f, vec(r))) < 1e-5);
    }

    // Continuity across the series switch at cos(theta) = 0.999999.
    const double th = std::acos(0.999999);
    const Vec3 n = Vec3(0.2, -0.7, 0.4).normalized();
    CHECK(maxdiff(dlog_so3(so3_exp(n * th * (1 - 1e-7))), dlog_so3(so3_exp(n * th * (1 + 1e-7)))) <
          1e-8);
  }

  TEST_CASE("dpseudolog_se3") {
    auto f = [](const VectorXd& x) -> VectorXd {
      return se3_pseudo_log(HomPose::from_vec12(Vec12(x))).vector();
    };
    Sampler s(405);
    for (int i = 0; i < 50; ++i) {
      const HomPose t = s.hom_pose();
      CHECK(maxdiff(dpseudolog_se3(t), numeric_jacobian(f, t.vec12())) < 1e-5);
    }
    // Right inverse of dexp at the identity.
    CHECK(maxdiff(dpseudolog_se3(HomPose()) * dexp_se3_at_zero(), Mat6::Identity()) < 1e-15);
  }

  TEST_CASE("pose-increment Jacobians against finite differences") {
    Sampler s(407);
    for (int i = 0; i < 50; ++i) {
      const HomPose a = s.hom_pose(), d = s.hom_pose();
      const Point3 p = s.point();
      auto v12 = [](const HomPose& x) -> VectorXd { return x.vec12(); };
      CHECK(maxdiff(jacob_expeD_de(d), manifold_numeric_jacobian(v12, d, Side::left)) < kFdTol);
      CHECK(maxdiff(jacob_Dexpe_de(d), manifold_numeric_jacobian(v12, d, Side::right)) < kFdTol);
      auto app = [&](const HomPose& x) -> VectorXd { return compose_point_matrix(x, p); };
      CHECK(maxdiff(jacob_expeDp_de(d, p), manifold_numeric_jacobian(app, d, Side::left)) < kFdTol);
      auto inv = [&](const HomPose& x) -> VectorXd { return inv_compose_point_matrix(p, x); };
      CHECK(maxdiff(jacob_p_ominus_expeD_de(d, p), manifold_numeric_jacobian(inv, d, Side::left)) <
            kFdTol);

      auto a_e_d = [&](const VectorXd& e) -> VectorXd {
        return (a * se3_pseudo_exp(TangentSE3::from_vector(Vec6(e))) * d).vec12();
      };
      CHECK(maxdiff(jacob_AexpeD_de(a, d), numeric_jacobian(a_e_d, VectorXd::Zero(6))) < kFdTol);
      auto a_e_d_p = [&](const VectorXd& e) -> VectorXd {
        return compose_point_matrix(a * se3_pseudo_exp(TangentSE3::from_vector(Vec6(e))) * d, p);
      };
      CHECK(maxdiff(jacob_AexpeDp_de(a, d, p), numeric_jacobian(a_e_d_p, VectorXd::Zero(6))) <
            kFdTol);
      auto p_a_e_d = [&](const VectorXd& e) -> VectorXd {
        return inv_compose_point_matrix(p, a * se3_pseudo_exp(TangentSE3::from_vector(Vec6(e))) * d);
      };
      CHECK(maxdiff(jacob_p_ominus_AexpeD_de(a, d, p),
                    numeric_jacobian(p_a_e_d, VectorXd::Zero(6))) < kFdTol);
    }
  }

  TEST_CASE("factored identities") {
    Sampler s(409);
    for (int i = 0; i < 20; ++i) {
      const HomPose a = s.hom_pose(), d = s.hom_pose();
      const Point3 p = s.point();
      CHECK(maxdiff(jacob_expeD_de(d), d_compose_wrt_A(d) * dexp_se3_at_zero()) < 1e-12);
      CHECK(maxdiff(jacob_Dexpe_de(d), d_compose_wrt_B(d) * dexp_se3_at_zero()) < 1e-12);
      CHECK(maxdiff(jacob_AexpeD_de(a, d), d_compose_wrt_B(a) * jacob_expeD_de(d)) < 1e-12);
      CHECK(maxdiff(jacob_AexpeDp_de(a, d, p), a.rotation() * jacob_expeDp_de(d, p)) < 1e-12);
    }
    // Closed forms at the identity: [I | -hat(p)] and [-I | hat(p)].
    const Point3 p(0.3, -1.2, 2.0);
    Mat<3, 6> fwd;
    fwd << Mat3::Identity(), -hat3(p);
    CHECK(maxdiff(jacob_expeDp_de(HomPose(), p), fwd) < 1e-15);
    CHECK(maxdiff(jacob_p_ominus_expeD_de(HomPose(), p), -fwd) < 1e-15);
  }

  TEST_CASE("approximate point Jacobian") {
    const Point3 p(1, 2, 3);
    const HomPose d = HomPose::from_rt(Mat3::Identity(), Vec3(0.5, -0.5, 1));
    Mat<3, 6> expect;
    expect << Mat3::Identity(), -hat3(p + d.translation());
    CHECK(maxdiff(jacob_AexpeDp_de(HomPose(), d, p, true), expect) == 0.0);
    CHECK(maxdiff(jacob_AexpeDp_de(HomPose(), d, p, false), expect) < 1e-15);
  }

  TEST_CASE("edge_error_se3") {
    Sampler s(411);
    for (int i = 0; i < 50; ++i) {
      const HomPose p1 = s.hom_pose(), d = s.hom_pose();
      // Keep the error rotation away from pi.
      const HomPose p2 = p1 * d * se3_pseudo_exp(TangentSE3::from_vector(0.3 * Vec6::Random()));
      const EdgeErrorSE3 r = edge_error_se3(d, p1, p2);
      auto f1 = [&](const HomPose& x) -> VectorXd { return edge_error_se3(d, x, p2).e.vector(); };
      auto f2 = [&](const HomPose& x) -> VectorXd { return edge_error_se3(d, p1, x).e.vector(); };
      CHECK(maxdiff(r.j1, manifold_numeric_jacobian(f1, p1, Side::right)) < kFdTol);
      CHECK(maxdiff(r.j2, manifold_numeric_jacobian(f2, p2, Side::right)) < kFdTol);
    }
    // Exact measurement: zero error, j2 = I, j1 = -Ad.
    const HomPose p1 = s.hom_pose(), d = s.hom_pose();
    const EdgeErrorSE3 r = edge_error_se3(d, p1, p1 * d);
    CHECK(r.e.vector().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(maxdiff(r.j2, Mat6::Identity()) < 1e-12);
    const HomPose far = p1 * d * HomPose::from_rt(rot_x(std::numbers::pi - 1e-4), Vec3::Zero());
    CHECK_THROWS_AS(edge_error_se3(d, p1, far), RangeError);
  }

  TEST_CASE("se2 Jacobians") {
    Sampler s(413);
    for (int i = 0; i < 50; ++i) {
      const HomPose2 a = s.pose2(), b = s.pose2();
      auto fd = [&](const HomPose2& x) -> VectorXd { return se2_pseudo_log(x); };
      const Vec3 la = se2_pseudo_log(a), lb = se2_pseudo_log(b);
      if (std::abs(wrap_angle(la.z() + lb.z())) > 3.0) continue;  // avoid the angle wrap
      CHECK(maxdiff(jacob_Dexpe_de_se2(a), manifold_numeric_jacobian(fd, a, Side::right)) < kFdTol);
      auto fa = [&](const VectorXd& x) -> VectorXd { return se2_pseudo_log(se2_pseudo_exp(Vec3(x)) * b); };
      auto fb = [&](const VectorXd& x) -> VectorXd { return se2_pseudo_log(a * se2_pseudo_exp(Vec3(x))); };
      CHECK(maxdiff(d_compose_se2_wrt_A(a, b), numeric_jacobian(fa, la)) < kFdTol);
      CHECK(maxdiff(d_compose_se2_wrt_B(a), numeric_jacobian(fb, lb)) < kFdTol);
    }
  }

  TEST_CASE("edge_error_se2") {
    Sampler s(415);
    for (int i = 0; i < 50; ++i) {
      const HomPose2 p1 = s.pose2(), d = s.pose2();
      const HomPose2 p2 = p1 * d * se2_pseudo_exp(Vec3(0.1, -0.2, 0.3));
      const EdgeErrorSE2 r = edge_error_se2(d, p1, p2);
      auto f1 = [&](const HomPose2& x) -> VectorXd { return edge_error_se2(d, x, p2).e; };
      auto f2 = [&](const HomPose2& x) -> VectorXd { return edge_error_se2(d, p1, x).e; };
      CHECK(maxdiff(r.j1, manifold_numeric_jacobian(f1, p1, Side::right)) < kFdTol);
      CHECK(maxdiff(r.j2, manifold_numeric_jacobian(f2, p2, Side::right)) < kFdTol);
    }
    // The angle error is wrapped.
    const HomPose2 d = se2_pseudo_exp(Vec3(0, 0, 3.0));
    const HomPose2 p2 = se2_pseudo_exp(Vec3(0, 0, -3.0));
    const EdgeErrorSE2 r = edge_error_se2(d, HomPose2(), p2);
    CHECK(r.e.z() == doctest::Approx(2 * std::numbers::pi - 6.0));
  }
}
