#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "posekit_c.h"
#include "test_util.hpp"

// Only the C interface is visible here; oracles use Eigen directly.

namespace {

std::vector<double> identity12() { return {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0}; }

Eigen::Matrix4d from12(const double* v) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 3; ++r) m(r, c) = v[3 * c + r];
  return m;
}

std::string temp_path(const char* name) { return std::string("capi_test_") + name; }

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("status names and errors") {
    CHECK(std::string(posekit_status_name(POSEKIT_OK)) == "ok");
    CHECK(posekit_param_dim(POSEKIT_YPR) == 6);
    CHECK(posekit_param_dim(POSEKIT_QUAT) == 7);
    CHECK(posekit_param_dim(POSEKIT_MATRIX) == 12);
    double out[7];
    CHECK(posekit_convert(POSEKIT_YPR, nullptr, POSEKIT_QUAT, out, nullptr) == POSEKIT_ERR_ARGUMENT);
    CHECK(std::string(posekit_last_error()).size() > 0);
    const double ypr[6] = {0, 0, 0, 0, 0, 0};
    CHECK(posekit_convert(POSEKIT_YPR, ypr, POSEKIT_QUAT, out, nullptr) == POSEKIT_OK);
    CHECK(std::string(posekit_last_error()).empty());
  }

  TEST_CASE("convert") {
    const double ypr[6] = {1, 2, 3, 0.3, -0.2, 0.1};
    double q[7], j[42];
    REQUIRE(posekit_convert(POSEKIT_YPR, ypr, POSEKIT_QUAT, q, j) == POSEKIT_OK);
    const Eigen::Quaterniond oracle = Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitZ()) *
                                      Eigen::AngleAxisd(-0.2, Eigen::Vector3d::UnitY()) *
                                      Eigen::AngleAxisd(0.1, Eigen::Vector3d::UnitX());
    CHECK(q[0] == 1);
    CHECK(std::abs(q[3] - oracle.w()) < 1e-15);
    CHECK(std::abs(q[4] - oracle.x()) < 1e-15);
    // Row 0 of the Jacobian is dx/d(x..roll) = e_0.
    CHECK(j[0] == 1.0);
    CHECK(j[1] == 0.0);

    double back[6];
    REQUIRE(posekit_convert(POSEKIT_QUAT, q, POSEKIT_YPR, back, nullptr) == POSEKIT_OK);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(back[i] - ypr[i]) < 1e-12);

    // Invalid rotation matrix.
    std::vector<double> bad = identity12();
    bad[0] = 2.0;
    double y[6];
    CHECK(posekit_convert(POSEKIT_MATRIX, bad.data(), POSEKIT_YPR, y, nullptr) == POSEKIT_ERR_DOMAIN);
    const double zero_q[7] = {0, 0, 0, 0, 0, 0, 0};
    CHECK(posekit_convert(POSEKIT_QUAT, zero_q, POSEKIT_YPR, y, nullptr) == POSEKIT_ERR_DOMAIN);
  }

  TEST_CASE("convert_gaussian singular") {
    const double h = std::sqrt(0.5);
    const double q[7] = {0, 0, 0, h, 0, h, 0};
    double cov[49] = {};
    for (int i = 0; i < 7; ++i) cov[8 * i] = 1e-4;
    double m[6], c[36];
    CHECK(posekit_convert_gaussian(POSEKIT_QUAT, q, cov, POSEKIT_YPR, m, c) == POSEKIT_ERR_SINGULAR);
  }

  TEST_CASE("compose, invert and points") {
    const double a[6] = {1, 0, 0, 0.5, 0, 0};
    const double b[6] = {0, 1, 0, -0.5, 0, 0};
    double ab[6];
    REQUIRE(posekit_compose(POSEKIT_YPR, a, b, ab) == POSEKIT_OK);
    CHECK(std::abs(ab[3]) < 1e-15);
    CHECK(std::abs(ab[0] - (1 - std::sin(0.5))) < 1e-15);
    CHECK(std::abs(ab[1] - std::cos(0.5)) < 1e-15);

    double inv[6], id[6];
    REQUIRE(posekit_invert(POSEKIT_YPR, a, inv) == POSEKIT_OK);
    REQUIRE(posekit_compose(POSEKIT_YPR, a, inv, id) == POSEKIT_OK);
    for (double v : id) CHECK(std::abs(v) < 1e-15);

    const double p[3] = {1, 2, 3};
    double g[3], l[3];
    REQUIRE(posekit_apply_point(POSEKIT_YPR, a, p, g) == POSEKIT_OK);
    REQUIRE(posekit_inv_apply_point(POSEKIT_YPR, a, g, l) == POSEKIT_OK);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(l[i] - p[i]) < 1e-14);
  }

  TEST_CASE("propagation") {
    const double pose[6] = {0, 0, 0, 0, 0, 0};
    double cov[36] = {};
    cov[0] = 0.01;           // x
    cov[3 * 6 + 3] = 0.04;   // yaw
    const double p[3] = {2, 0, 0};
    const double cp[9] = {};
    double g[3], cg[9];
    REQUIRE(posekit_propagate_apply_point(POSEKIT_YPR, pose, cov, p, cp, g, cg) == POSEKIT_OK);
    CHECK(std::abs(cg[0] - 0.01) < 1e-15);
    CHECK(std::abs(cg[4] - 4 * 0.04) < 1e-15);  // y variance = (2 * sigma_yaw)^2

    double out[6], cout_[36];
    REQUIRE(posekit_propagate_inverse(POSEKIT_YPR, pose, cov, out, cout_) == POSEKIT_OK);
    CHECK(std::abs(cout_[0] - 0.01) < 1e-15);
    REQUIRE(posekit_propagate_compose(POSEKIT_YPR, pose, cov, pose, cov, out, cout_) == POSEKIT_OK);
    CHECK(std::abs(cout_[0] - 0.02) < 1e-15);
    CHECK(posekit_propagate_compose(POSEKIT_YPR, pose, nullptr, pose, nullptr, out, cout_) == POSEKIT_OK);
    CHECK(cout_[0] == 0.0);
  }

  TEST_CASE("exp and log") {
    const double v[6] = {1, 2, 3, 0, 0, M_PI / 2};
    double m[12], back[6];
    REQUIRE(posekit_expmap(v, 1, m) == POSEKIT_OK);
    CHECK(m[9] == 1.0);
    CHECK(m[10] == 2.0);
    const Eigen::Matrix3d rz = Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    CHECK(maxdiff(from12(m).topLeftCorner<3, 3>(), rz) < 1e-15);
    REQUIRE(posekit_logmap(m, 1, back) == POSEKIT_OK);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(back[i] - v[i]) < 1e-12);
    REQUIRE(posekit_expmap(v, 0, m) == POSEKIT_OK);
    REQUIRE(posekit_logmap(m, 0, back) == POSEKIT_OK);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(back[i] - v[i]) < 1e-12);

    double flip[12] = {1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 0, 0};
    CHECK(posekit_logmap(flip, 0, back) == POSEKIT_ERR_RANGE);
  }

  TEST_CASE("project") {
    const double k[4] = {100, 100, 50, 40};
    const std::vector<double> pose = identity12();
    const double pts[6] = {0, 0, 1, 1, 1, 2};
    double px[4];
    REQUIRE(posekit_project(k, pose.data(), pts, 2, px) == POSEKIT_OK);
    CHECK(px[0] == 50);
    CHECK(px[1] == 40);
    CHECK(px[2] == 100);
    CHECK(px[3] == 90);
    const double behind[3] = {0, 0, -1};
    CHECK(posekit_project(k, pose.data(), behind, 1, px) == POSEKIT_ERR_BEHIND_CAMERA);
  }

  TEST_CASE("catalog report") {
    posekit_report* r = nullptr;
    REQUIRE(posekit_check_catalog(1, 3, 1e-5, &r) == POSEKIT_OK);
    REQUIRE(posekit_report_size(r) > 0);
    for (size_t i = 0; i < posekit_report_size(r); ++i) {
      const char* op = nullptr;
      double err = 0;
      int row = 0, col = 0, pass = 0;
      REQUIRE(posekit_report_entry(r, i, &op, &err, &row, &col, &pass) == POSEKIT_OK);
      CAPTURE(op);
      CHECK(pass == 1);
    }
    CHECK(posekit_report_entry(r, posekit_report_size(r), nullptr, nullptr, nullptr, nullptr, nullptr) ==
          POSEKIT_ERR_ARGUMENT);
    posekit_report_free(r);
  }

  TEST_CASE("graph lifecycle") {
    posekit_graph *truth = nullptr, *noisy = nullptr;
    REQUIRE(posekit_graph_synth(POSEKIT_SYNTH_CIRCLE2D, 20, 0.05, 0.01, 3, &truth, &noisy) == POSEKIT_OK);
    CHECK(posekit_graph_dimension(noisy) == 2);
    CHECK(posekit_graph_vertex_count(noisy) == 20);
    CHECK(posekit_graph_edge_count(noisy) == 20);
    CHECK(posekit_graph_history_size(noisy) == 0);
    double c0 = 0, c1 = 0;
    REQUIRE(posekit_graph_chi2(noisy, &c0) == POSEKIT_OK);

    posekit_solver_config cfg;
    posekit_solver_config_default(&cfg);
    CHECK(cfg.method == POSEKIT_LEVENBERG_MARQUARDT);
    REQUIRE(posekit_graph_optimize(noisy, &cfg) == POSEKIT_OK);
    REQUIRE(posekit_graph_chi2(noisy, &c1) == POSEKIT_OK);
    CHECK(c1 < 0.05 * c0);
    REQUIRE(posekit_graph_history_size(noisy) > 1);
    int it = -1;
    double hc = 0, un = 0, lam = 0;
    REQUIRE(posekit_graph_history(noisy, 0, &it, &hc, &un, &lam) == POSEKIT_OK);
    CHECK(it == 0);
    CHECK(hc == c0);

    const std::string path = temp_path("graph.g2o");
    REQUIRE(posekit_graph_save(noisy, path.c_str()) == POSEKIT_OK);
    posekit_graph* loaded = nullptr;
    REQUIRE(posekit_graph_load(path.c_str(), &loaded) == POSEKIT_OK);
    double c2 = 0;
    REQUIRE(posekit_graph_chi2(loaded, &c2) == POSEKIT_OK);
    CHECK(c2 == c1);
    std::remove(path.c_str());

    posekit_graph* missing = nullptr;
    CHECK(posekit_graph_load("/nonexistent/x.g2o", &missing) == POSEKIT_ERR_PARSE);
    CHECK(missing == nullptr);

    posekit_graph_free(loaded);
    posekit_graph_free(truth);
    posekit_graph_free(noisy);
    posekit_graph_free(nullptr);
  }
}
