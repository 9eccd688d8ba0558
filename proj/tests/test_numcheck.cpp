#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "posekit/lie.hpp"
#include "posekit/matderiv.hpp"
#include "posekit/numcheck.hpp"
#include "test_util.hpp"

using namespace posekit;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("numcheck") {
  TEST_CASE("numeric_jacobian on simple maps") {
    const VectorXd x0 = VectorXd::LinSpaced(4, -1, 2);
    auto id = [](const VectorXd& x) -> VectorXd { return x; };
    CHECK(maxdiff(numeric_jacobian(id, x0), MatrixXd::Identity(4, 4)) < 1e-10);

    auto sq = [](const VectorXd& x) -> VectorXd { return x.array().square().matrix(); };
    const MatrixXd jsq = numeric_jacobian(sq, x0);
    CHECK(maxdiff(jsq, MatrixXd(2 * x0.asDiagonal())) < 1e-9);

    const MatrixXd a = (MatrixXd(2, 4) << 1, -2, 0.5, 3, 4, 0, -1, 2).finished();
    auto lin = [&](const VectorXd& x) -> VectorXd { return a * x; };
    for (const double h : {1e-8, 1e-7, 1e-6, 1e-5, 1e-4}) {
      CHECK(maxdiff(numeric_jacobian(lin, x0, h), a) < 1e-7);
    }
  }

  TEST_CASE("numeric_jacobian shape and errors") {
    auto scalar = [](const VectorXd& x) -> VectorXd { return VectorXd::Constant(1, x.sum()); };
    const MatrixXd j = numeric_jacobian(scalar, VectorXd::Zero(3));
    CHECK(j.rows() == 1);
    CHECK(j.cols() == 3);
    CHECK(numeric_jacobian(scalar, VectorXd(0)).cols() == 0);

    auto throws_on_col2 = [](const VectorXd& x) -> VectorXd {
      if (x[2] != 0.0) throw std::runtime_error("boom");
      return x;
    };
    try {
      numeric_jacobian(throws_on_col2, VectorXd::Zero(3));
      FAIL("expected FiniteDifferenceError");
    } catch (const FiniteDifferenceError& e) {
      CHECK(e.column() == 2);
    }
  }

  TEST_CASE("manifold_numeric_jacobian") {
    // d (e^eps p) / d eps at p = identity and point q is [I | -hat(q)].
    const Point3 q(1, -2, 0.5);
    auto f = [&](const HomPose& x) -> VectorXd {
      return x.rotation() * q + x.translation();
    };
    Mat<3, 6> expect;
    expect << Mat3::Identity(), -hat3(q);
    CHECK(maxdiff(manifold_numeric_jacobian(f, HomPose(), Side::left), expect) < 1e-9);

    // Right increment on SE(2): d translation / d eps = R(phi) on the first two columns.
    const HomPose2 b = se2_pseudo_exp(Vec3(1, 2, 0.7));
    auto g = [](const HomPose2& x) -> VectorXd { return x.translation(); };
    const MatrixXd j2 = manifold_numeric_jacobian(g, b, Side::right);
    CHECK(maxdiff(j2.leftCols(2), rot2(0.7)) < 1e-9);
    CHECK(j2.col(2).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("compare_jacobians") {
    const MatrixXd a = MatrixXd::Identity(2, 2);
    MatrixXd n = a;
    n(1, 0) = 1e-3;
    const JacobianReport r = compare_jacobians("x", a, n, 1e-2);
    CHECK(r.pass);
    CHECK(r.max_abs_error == doctest::Approx(1e-3));
    CHECK(r.worst_row == 1);
    CHECK(r.worst_col == 0);
    CHECK_FALSE(compare_jacobians("x", a, n, 1e-4).pass);
    CHECK_FALSE(compare_jacobians("x", a, MatrixXd::Identity(2, 3), 1.0).pass);
    n(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(compare_jacobians("x", a, n, 1.0).pass);
  }

  TEST_CASE("sampler ranges and determinism") {
    Sampler s1(7), s2(7), s3(8);
    CHECK(maxdiff(s1.translation(), s2.translation()) == 0.0);
    CHECK(maxdiff(s1.translation(), s3.translation()) > 0.0);
    Sampler s(9);
    for (int i = 0; i < 1000; ++i) {
      CHECK(s.translation().cwiseAbs().maxCoeff() <= 2.0);
      const Vec3 w = s.rotation_vector(1.0, 0.5);
      CHECK(w.norm() >= 0.5 - 1e-12);
      CHECK(w.norm() <= 1.0 + 1e-12);
      CHECK(std::abs(s.ypr_pose().pitch) <= 85.0 * M_PI / 180.0);
      CHECK(std::abs(s.quat_pose().q.norm() - 1.0) < 1e-12);
    }
  }

  TEST_CASE("catalog") {
    const auto names = catalog_names();
    CHECK(names.size() >= 40);
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(check_catalog(1, 0, 1e-5).empty());

    const auto reports = check_catalog(1, 5, 1e-5);
    REQUIRE(reports.size() == names.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
      CAPTURE(reports[i].op);
      CHECK(reports[i].op == names[i]);
      CHECK(reports[i].pass);
      CHECK(reports[i].samples == 5);
    }

    const auto again = check_catalog(1, 5, 1e-5);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      CHECK(again[i].max_abs_error == reports[i].max_abs_error);
    }

    // Nothing survives an absurd tolerance.
    const auto tight = check_catalog(1, 2, 1e-16);
    CHECK(std::any_of(tight.begin(), tight.end(), [](const JacobianReport& r) { return !r.pass; }));
  }
}
