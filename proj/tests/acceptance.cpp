// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. argv[1] is the directory holding the sample .g2o files.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "posekit/core.hpp"
#include "posekit/g2o.hpp"
#include "posekit/geometry.hpp"
#include "posekit/graphslam.hpp"
#include "posekit/lie.hpp"
#include "posekit/matderiv.hpp"
#include "posekit/numcheck.hpp"

using namespace posekit;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double maxabs(const MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// 1. Jacobian catalog.
Outcome jacobian_catalog() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = check_catalog(1, 100, 1e-5);
  const double secs = seconds_since(t0);
  Outcome o;
  double worst = 0.0;
  std::string worst_op;
  for (const auto& r : reports) {
    if (!r.pass) {
      o.pass = false;
      o.detail += " failed:" + r.op;
    }
    if (r.max_abs_error > worst) {
      worst = r.max_abs_error;
      worst_op = r.op;
    }
  }
  if (secs >= 30.0) o.pass = false;
  o.detail = fmt("%.0f checks, worst %.2e", static_cast<double>(reports.size()), worst) + " (" +
             worst_op + ")" + fmt(", %.2f s", secs) + o.detail;
  return o;
}

// 2. Conversion round trips.
Outcome conversion_round_trips() {
  Sampler s(2);
  double e_yq = 0, e_qy = 0, e_ym = 0, e_my = 0, e_qm = 0, e_mq = 0;
  auto canon = [](const QuatPose& p) { return Vec4(p.q.normalized().coeffs()); };
  const double max_pitch = 85.0 * kPi / 180.0;
  for (int i = 0; i < 1000; ++i) {
    const EulerPose y = s.ypr_pose();
    e_yq = std::max(e_yq, maxabs(quat_to_ypr(ypr_to_quat(y)).vector() - y.vector()));
    e_ym = std::max(e_ym, maxabs(matrix_to_ypr(ypr_to_matrix(y)).vector() - y.vector()));

    // Quaternion and matrix samples restricted to non-degenerate pitch.
    QuatPose q;
    do q = s.quat_pose();
    while (std::abs(quat_to_ypr(q).pitch) > max_pitch);
    e_qy = std::max(e_qy, maxabs(canon(ypr_to_quat(quat_to_ypr(q))) - canon(q)));
    e_qy = std::max(e_qy, maxabs(ypr_to_quat(quat_to_ypr(q)).t - q.t));
    e_qm = std::max(e_qm, maxabs(canon(matrix_to_quat(quat_to_matrix(q))) - canon(q)));

    const HomPose m = quat_to_matrix(q);
    e_my = std::max(e_my, maxabs(ypr_to_matrix(matrix_to_ypr(m)).matrix() - m.matrix()));
    e_mq = std::max(e_mq, maxabs(quat_to_matrix(matrix_to_quat(m)).matrix() - m.matrix()));
  }
  const double worst = std::max({e_yq, e_qy, e_ym, e_my, e_qm, e_mq});
  return {worst < 1e-9, fmt("ypr<->quat %.1e/%.1e, ", e_yq, e_qy) + fmt("ypr<->matrix %.1e/%.1e, ", e_ym, e_my) +
                            fmt("quat<->matrix %.1e/%.1e", e_qm, e_mq)};
}

Mat3 series_exp3(const Mat3& a) {
  Mat3 sum = Mat3::Identity(), term = Mat3::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// 3. Lie round trips.
Outcome lie_round_trips() {
  Sampler s(3);
  double e_so3 = 0, e_se3 = 0, e_pseudo = 0, e_series = 0;
  for (int i = 0; i < 1000; ++i) {
    const double th = std::exp(s.uniform(std::log(1e-8), std::log(kPi - 1e-4)));
    const Vec3 w = th * s.unit_vector();
    e_so3 = std::max(e_so3, maxabs(so3_log(so3_exp(w)) - w));
    e_series = std::max(e_series, maxabs(so3_exp(w) - series_exp3(hat3(w))));

    Vec6 v;
    v << s.translation(), s.rotation_vector(3.0 - 1e-9);
    e_se3 = std::max(e_se3, maxabs(se3_log(se3_exp(TangentSE3::from_vector(v))).vector() - v));

    // Default sampler range, angle <= 2.8: near pi the log is conditioned like 1/sin(theta).
    Vec6 u;
    u << s.translation(), s.rotation_vector();
    e_pseudo = std::max(e_pseudo, maxabs(se3_pseudo_log(se3_pseudo_exp(TangentSE3::from_vector(u))).vector() - u));
    const HomPose m = s.hom_pose();
    e_pseudo = std::max(e_pseudo, maxabs(se3_pseudo_exp(se3_pseudo_log(m)).matrix() - m.matrix()));
  }
  const bool pass = e_so3 < 1e-9 && e_se3 < 1e-9 && e_pseudo < 1e-12 && e_series < 1e-11;
  return {pass, fmt("so3 %.1e, se3 %.1e, ", e_so3, e_se3) + fmt("pseudo %.1e, series %.1e", e_pseudo, e_series)};
}

// 4. Degenerate cases.
Outcome degenerate_cases() {
  double e_axis = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 expect = kPi * Vec3::Unit(i);
    for (const double sign : {1.0, -1.0}) {
      const Vec3 w = so3_log(so3_exp(sign * expect));
      // Documented sign: largest-magnitude component positive.
      e_axis = std::max(e_axis, maxabs(w - expect));
    }
  }
  double e_gimbal = 0;
  bool branch = true;
  Sampler s(4);
  for (int i = 0; i < 200; ++i) {
    const double pitch = (i % 2 ? 1 : -1) * kPi / 2;
    const EulerPose y{s.uniform(-2, 2), s.uniform(-2, 2), s.uniform(-2, 2), s.uniform(-3, 3), pitch,
                      s.uniform(-3, 3)};
    const QuatPose q = ypr_to_quat(y);
    const double delta = q.q.r * q.q.y - q.q.x * q.q.z;
    if (std::abs(std::abs(delta) - 0.5) > 1e-12) branch = false;
    const EulerPose back = quat_to_ypr(q);
    if (std::abs(back.pitch) != kPi / 2) branch = false;
    e_gimbal = std::max(e_gimbal, maxabs(ypr_to_matrix(back).matrix() - quat_to_matrix(q).matrix()));
  }
  const bool pass = e_axis < 1e-8 && e_gimbal < 1e-9 && branch;
  return {pass, fmt("axis %.1e, gimbal round trip %.1e", e_axis, e_gimbal) + (branch ? "" : ", branch missed")};
}

template <class F>
MatrixXd monte_carlo(const VectorXd& x0, double sigma, int n, F f) {
  std::mt19937_64 rng(55);
  std::normal_distribution<double> nd(0.0, sigma);
  std::vector<VectorXd> ys;
  ys.reserve(n);
  VectorXd mean;
  for (int k = 0; k < n; ++k) {
    VectorXd x = x0;
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += nd(rng);
    ys.push_back(f(x));
    mean = k ? VectorXd(mean + ys.back()) : ys.back();
  }
  mean /= n;
  MatrixXd cov = MatrixXd::Zero(mean.size(), mean.size());
  for (const VectorXd& y : ys) cov += (y - mean) * (y - mean).transpose();
  return cov / (n - 1);
}

double rel_frob(const MatrixXd& mc, const MatrixXd& lin) { return (mc - lin).norm() / lin.norm(); }

// 5. Covariance propagation against Monte Carlo.
Outcome covariance_propagation() {
  const double sigma = 1e-3;
  const int n = 100000;
  Sampler s(5);

  const EulerPose y = s.ypr_pose();
  const GaussianPose gy{y, MatrixXd::Identity(6, 6) * sigma * sigma};
  const MatrixXd lin1 = convert_gaussian(gy, Param::quat).cov;
  const MatrixXd mc1 = monte_carlo(y.vector(), sigma, n, [](const VectorXd& x) -> VectorXd {
    return ypr_to_quat(EulerPose::from_vector(Vec6(x))).vector();
  });
  const double r1 = rel_frob(mc1, lin1);

  const QuatPose q = s.quat_pose();
  const Point3 a = s.point();
  VectorXd qa(10);
  qa << q.vector(), a;
  const GaussianPoint3 lin2 = propagate_compose_point({q, MatrixXd::Identity(7, 7) * sigma * sigma},
                                                      {a, Mat3::Identity() * sigma * sigma});
  const MatrixXd mc2 = monte_carlo(qa, sigma, n, [](const VectorXd& x) -> VectorXd {
    return compose_point_quat(QuatPose::from_vector(Vec7(x.head<7>())), Vec3(x.tail<3>())).point;
  });
  const double r2 = rel_frob(mc2, lin2.cov);

  const QuatPose q2 = s.quat_pose();
  VectorXd qq(14);
  qq << q.vector(), q2.vector();
  const GaussianPose lin3 = propagate_compose_pose({q, MatrixXd::Identity(7, 7) * sigma * sigma},
                                                   {q2, MatrixXd::Identity(7, 7) * sigma * sigma});
  const MatrixXd mc3 = monte_carlo(qq, sigma, n, [](const VectorXd& x) -> VectorXd {
    return compose_pose_quat(QuatPose::from_vector(Vec7(x.head<7>())), QuatPose::from_vector(Vec7(x.tail<7>())))
        .pose.vector();
  });
  const double r3 = rel_frob(mc3, lin3.cov);

  return {r1 < 0.05 && r2 < 0.05 && r3 < 0.05,
          fmt("ypr->quat %.3f, pose+point %.3f, pose+pose %.3f (relative Frobenius)", r1, r2, r3)};
}

// 6. Inverse-composition identities.
Outcome inverse_composition() {
  Sampler s(6);
  double e = 0;
  for (int i = 0; i < 1000; ++i) {
    const QuatPose p = s.quat_pose();
    const Point3 a = s.point();
    e = std::max(e, maxabs(compose_point_quat(p, inv_compose_point_quat(a, p).point).point - a));
    e = std::max(e, maxabs(compose_point_quat(inverse_pose_quat(p).pose, a).point -
                           inv_compose_point_quat(a, p).point));
    const HomPose m = quat_to_matrix(p);
    e = std::max(e, maxabs(compose_point_matrix(m, inv_compose_point_matrix(a, m)) - a));
    e = std::max(e, maxabs(compose_point_matrix(inverse_pose_matrix(m), a) - inv_compose_point_matrix(a, m)));
  }
  return {e < 1e-12, fmt("max error %.1e over 1000 cases", e)};
}

bool monotone(const std::vector<IterationStats>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i].chi2 > h[i - 1].chi2) return false;
  return true;
}

// 7. SE(2) circle.
Outcome slam_se2() {
  const SynthGraphs g = synth_graph(SynthKind::circle2d, 50, {0.05, 0.01}, 1);
  SolverConfig cfg;
  cfg.max_iterations = 50;
  const auto t0 = std::chrono::steady_clock::now();
  const OptimizeResult r = optimize(g.noisy, cfg);
  const double secs = seconds_since(t0);
  const double c0 = r.history.front().chi2, c1 = r.history.back().chi2;
  const bool mono = monotone(r.history);
  return {mono && c1 < 0.05 * c0 && secs < 5.0,
          fmt("chi2 %.4g -> %.4g", c0, c1) + fmt(" in %.0f iterations, %.3f s", r.history.size() - 1.0, secs) +
              (mono ? "" : ", not monotone")};
}

double gradient_check(const PoseGraph& g) {
  const NormalEquations ne = build_normal_equations(g);
  const int d = tangent_dim(g.kind);
  auto f = [&](const VectorXd& eps) -> VectorXd {
    PoseGraph h = g;
    for (std::size_t k = 0; k < ne.free_ids.size(); ++k)
      h.vertices[ne.free_ids[k]] = retract(g.kind, g.vertices.at(ne.free_ids[k]), eps.segment(d * k, d));
    return VectorXd::Constant(1, chi2(h));
  };
  const VectorXd fd = numeric_jacobian(f, VectorXd::Zero(ne.b.size())).transpose();
  return maxabs(fd - 2 * ne.b) / maxabs(2 * ne.b);
}

// 8. SE(3) arc.
Outcome slam_se3() {
  const SynthGraphs g = synth_graph(SynthKind::sphere3d, 30, {0.03, 0.01}, 1);
  const OptimizeResult r = optimize(g.noisy, SolverConfig{});
  const double c0 = r.history.front().chi2, c1 = r.history.back().chi2;

  // Vertices 0 and 21..29: the dead-reckoned odometry edges have zero error,
  // so the subgraph has to contain the loop closure 29 -> 0 to have a gradient.
  PoseGraph sub;
  sub.kind = GraphKind::se3;
  auto keep = [](int id) { return id == 0 || id >= 21; };
  for (const auto& [id, raw] : g.noisy.vertices)
    if (keep(id)) sub.vertices[id] = raw;
  for (const GraphEdge& e : g.noisy.edges)
    if (keep(e.from) && keep(e.to)) sub.edges.push_back(e);
  sub.fixed.insert(0);
  const double rel = gradient_check(sub);
  return {c1 < 0.1 * c0 && rel < 1e-4, fmt("chi2 %.4g -> %.4g, gradient FD relative error %.1e", c0, c1, rel)};
}

// 9. Small-rotation approximation.
Outcome small_rotation() {
  Sampler s(9);
  double small = 0, large = 0;
  for (int i = 0; i < 100; ++i) {
    const Point3 a = s.point();
    const EulerPose tiny{0, 0, 0, s.uniform(-1e-5, 1e-5), s.uniform(-1e-5, 1e-5), s.uniform(-1e-5, 1e-5)};
    small = std::max(small, maxabs(compose_point_ypr(tiny, a).d_pose - compose_point_ypr_small_rot_jacobian(a)));
  }
  const Point3 a(1, 2, 3);
  const EulerPose half{0, 0, 0, 0.5, 0.5, 0.5};
  large = maxabs(compose_point_ypr(half, a).d_pose - compose_point_ypr_small_rot_jacobian(a));
  return {small < 1e-4 && large > 0.05, fmt("at 1e-5 rad %.1e, at 0.5 rad %.3f", small, large)};
}

// 10. g2o idempotence on the bundled samples.
Outcome g2o_fidelity(const std::filesystem::path& dir) {
  Outcome o;
  int files = 0;
  for (const char* name : {"circle2d_noisy.g2o", "sphere3d_noisy.g2o"}) {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) {
      o.pass = false;
      o.detail += std::string(" missing ") + name;
      continue;
    }
    ++files;
    std::ostringstream first, second;
    write_g2o(first, read_g2o_file(path.string()));
    std::istringstream in(first.str());
    write_g2o(second, read_g2o(in));
    if (first.str() != second.str()) {
      o.pass = false;
      o.detail += std::string(" differs: ") + name;
    }
  }
  o.detail = fmt("%.0f files", files) + o.detail;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path data = argc > 1 ? argv[1] : "data";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"jacobian catalog", jacobian_catalog},
      {"conversion round trips", conversion_round_trips},
      {"lie round trips", lie_round_trips},
      {"degenerate cases", degenerate_cases},
      {"covariance propagation", covariance_propagation},
      {"inverse composition", inverse_composition},
      {"slam se2 circle", slam_se2},
      {"slam se3 arc", slam_se3},
      {"small rotation approximation", small_rotation},
      {"g2o fidelity", [&] { return g2o_fidelity(data); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::fflush(stdout);
  return failed ? 1 : 0;
}
