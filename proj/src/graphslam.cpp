#include "posekit/graphslam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include "posekit/core.hpp"
#include "posekit/errors.hpp"
#include "posekit/geometry.hpp"
#include "posekit/lie.hpp"
#include "posekit/manifold_jac.hpp"

namespace posekit {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

namespace {

constexpr int kDenseLimit = 1500;

Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
  return {a.r * b.r - a.x * b.x - a.y * b.y - a.z * b.z,
          a.r * b.x + a.x * b.r + a.y * b.z - a.z * b.y,
          a.r * b.y - a.x * b.z + a.y * b.r + a.z * b.x,
          a.r * b.z + a.x * b.y - a.y * b.x + a.z * b.r};
}

struct EdgeEval {
  VectorXd e;
  MatrixXd j1, j2;
};

EdgeEval evaluate(const PoseGraph& g, const GraphEdge& edge) {
  EdgeEval out;
  if (g.kind == GraphKind::se3) {
    const EdgeErrorSE3 r =
        edge_error_se3(raw_to_pose3(edge.measurement), g.pose3(edge.from), g.pose3(edge.to));
    out.e = r.e.vector();
    out.j1 = r.j1;
    out.j2 = r.j2;
  } else {
    const EdgeErrorSE2 r =
        edge_error_se2(raw_to_pose2(edge.measurement), g.pose2(edge.from), g.pose2(edge.to));
    out.e = r.e;
    out.j1 = r.j1;
    out.j2 = r.j2;
  }
  return out;
}

VectorXd solve(const SpMat& h, const VectorXd& rhs, double lambda, bool suggest_lm) {
  const std::string hint = suggest_lm ? "; try levenberg-marquardt" : "";
  VectorXd x;
  if (h.rows() <= kDenseLimit) {
    MatrixXd a = MatrixXd(h);
    a.diagonal().array() += lambda;
    Eigen::LLT<MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw SolverError("normal equations are not positive definite" + hint);
    x = llt.solve(rhs);
  } else {
    SpMat a = h;
    for (Eigen::Index i = 0; i < a.rows(); ++i) a.coeffRef(i, i) += lambda;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(a);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
      throw SolverError("normal equations are not positive definite" + hint);
    x = ldlt.solve(rhs);
  }
  if (!x.allFinite()) throw SolverError("normal equations are singular" + hint);
  return x;
}

PoseGraph apply_update(const PoseGraph& g, const std::vector<int>& ids, const VectorXd& eps) {
  PoseGraph out = g;
  const int d = tangent_dim(g.kind);
  for (std::size_t k = 0; k < ids.size(); ++k)
    out.vertices[ids[k]] = retract(g.kind, g.vertices.at(ids[k]), eps.segment(d * k, d));
  return out;
}

StepResult step_with(const PoseGraph& g, const NormalEquations& ne, const SolverConfig& cfg,
                     double lambda) {
  StepResult r;
  if (cfg.method == Method::gauss_newton) {
    const VectorXd eps = solve(ne.h, -ne.b, 0.0, true);
    r.graph = apply_update(g, ne.free_ids, eps);
    r.stats.chi2 = chi2(r.graph);
    r.stats.update_norm = eps.norm();
    return r;
  }
  for (int attempt = 0; attempt <= cfg.lm_max_retries; ++attempt) {
    const VectorXd eps = solve(ne.h, -ne.b, lambda, false);
    PoseGraph candidate = apply_update(g, ne.free_ids, eps);
    double c = std::numeric_limits<double>::infinity();
    try {
      c = chi2(candidate);
    } catch (const RangeError&) {
      // candidate pushed an edge error near pi; treat as a rejected step
    }
    if (c < ne.chi2) {
      r.graph = std::move(candidate);
      r.stats = {0, c, eps.norm(), lambda};
      r.next_lambda = lambda / cfg.lm_factor;
      return r;
    }
    lambda *= cfg.lm_factor;
  }
  r.graph = g;
  r.accepted = false;
  r.stats = {0, ne.chi2, 0.0, lambda};
  r.next_lambda = lambda;
  return r;
}

}  // namespace

HomPose raw_to_pose3(const VectorXd& raw) {
  const Quaternion q = Quaternion{raw[3], raw[4], raw[5], raw[6]}.normalized();
  return quat_to_matrix(QuatPose{raw.head<3>(), q});
}

HomPose2 raw_to_pose2(const VectorXd& raw) {
  return HomPose2::from_rt(rot2(raw[2]), raw.head<2>());
}

VectorXd pose3_to_raw(const HomPose& p) {
  const Eigen::Quaterniond e(p.rotation());
  const Quaternion q = Quaternion{e.w(), e.x(), e.y(), e.z()}.normalized();
  VectorXd raw(7);
  raw << p.translation(), q.coeffs();
  return raw;
}

VectorXd pose2_to_raw(const HomPose2& p) {
  const Mat2 r = p.rotation();
  return Vec3(p.translation().x(), p.translation().y(), std::atan2(r(1, 0), r(0, 0)));
}

VectorXd retract(GraphKind kind, const VectorXd& raw, const VectorXd& eps) {
  VectorXd out = raw;
  if (kind == GraphKind::se2) {
    out.head<2>() += rot2(raw[2]) * eps.head<2>();
    out[2] = wrap_angle(raw[2] + eps[2]);
    return out;
  }
  const Quaternion q = Quaternion{raw[3], raw[4], raw[5], raw[6]}.normalized();
  out.head<3>() += quat_to_matrix(QuatPose{Vec3::Zero(), q}).rotation() * eps.head<3>();
  out.tail<4>() = hamilton(q, so3_exp_quat(eps.tail<3>())).normalized().coeffs();
  return out;
}

void PoseGraph::add_vertex(int id, const VectorXd& raw) {
  if (raw.size() != raw_dim(kind)) throw DomainError("vertex " + std::to_string(id) + ": wrong parameter count");
  vertices[id] = raw;
}

void PoseGraph::add_edge(int from, int to, const VectorXd& measurement, const MatrixXd& information) {
  edges.push_back({from, to, measurement, information});
}

HomPose PoseGraph::pose3(int id) const { return raw_to_pose3(vertices.at(id)); }
HomPose2 PoseGraph::pose2(int id) const { return raw_to_pose2(vertices.at(id)); }

void PoseGraph::validate() const {
  const int d = tangent_dim(kind);
  for (const auto& [id, raw] : vertices)
    if (raw.size() != raw_dim(kind)) throw DomainError("vertex " + std::to_string(id) + ": wrong parameter count");
  for (const int f : fixed)
    if (!vertices.count(f)) throw DomainError("fixed vertex " + std::to_string(f) + " does not exist");
  for (const GraphEdge& e : edges) {
    const std::string name = "edge " + std::to_string(e.from) + "-" + std::to_string(e.to);
    if (!vertices.count(e.from) || !vertices.count(e.to)) throw DomainError(name + ": missing endpoint");
    if (e.measurement.size() != raw_dim(kind)) throw DomainError(name + ": wrong measurement size");
    if (e.information.rows() != d || e.information.cols() != d)
      throw DomainError(name + ": wrong information size");
    if ((e.information - e.information.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      throw DomainError(name + ": information matrix is not symmetric");
  }
}

double chi2(const PoseGraph& g) {
  double total = 0.0;
  for (const GraphEdge& edge : g.edges) {
    const EdgeEval ev = evaluate(g, edge);
    total += ev.e.dot(edge.information * ev.e);
  }
  return total;
}

void check_gauge(const PoseGraph& g) {
  if (g.fixed.empty()) throw SolverError("no fixed vertex: the gauge is unconstrained");
  std::map<int, int> index;
  std::vector<int> ids;
  for (const auto& [id, raw] : g.vertices) {
    index[id] = static_cast<int>(ids.size());
    ids.push_back(id);
  }
  std::vector<int> parent(ids.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const GraphEdge& e : g.edges) parent[find(index.at(e.from))] = find(index.at(e.to));
  std::set<int> anchored;
  for (const int f : g.fixed) anchored.insert(find(index.at(f)));
  std::map<int, std::vector<int>> loose;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!anchored.count(find(static_cast<int>(i)))) loose[find(static_cast<int>(i))].push_back(ids[i]);
  if (loose.empty()) return;
  std::ostringstream msg;
  msg << "rank-deficient normal equations: component {";
  const std::vector<int>& comp = loose.begin()->second;
  for (std::size_t i = 0; i < comp.size(); ++i) msg << (i ? ", " : "") << comp[i];
  msg << "} has no fixed vertex";
  throw SolverError(msg.str());
}

NormalEquations build_normal_equations(const PoseGraph& g) {
  check_gauge(g);
  const int d = tangent_dim(g.kind);
  NormalEquations ne;
  std::map<int, int> block;
  for (const auto& [id, raw] : g.vertices) {
    if (g.fixed.count(id)) continue;
    block[id] = static_cast<int>(ne.free_ids.size());
    ne.free_ids.push_back(id);
  }
  const int n = d * static_cast<int>(ne.free_ids.size());
  ne.b = VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.edges.size() * 4 * d * d);
  auto add_block = [&](int r0, int c0, const MatrixXd& m) {
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) trip.emplace_back(r0 + r, c0 + c, m(r, c));
  };
  for (const GraphEdge& edge : g.edges) {
    const EdgeEval ev = evaluate(g, edge);
    const VectorXd le = edge.information * ev.e;
    ne.chi2 += ev.e.dot(le);
    const auto bi = block.find(edge.from), bj = block.find(edge.to);
    const bool fi = bi != block.end(), fj = bj != block.end();
    if (fi) {
      const int i = d * bi->second;
      add_block(i, i, ev.j1.transpose() * edge.information * ev.j1);
      ne.b.segment(i, d) += ev.j1.transpose() * le;
    }
    if (fj) {
      const int j = d * bj->second;
      add_block(j, j, ev.j2.transpose() * edge.information * ev.j2);
      ne.b.segment(j, d) += ev.j2.transpose() * le;
    }
    if (fi && fj) {
      const MatrixXd hij = ev.j1.transpose() * edge.information * ev.j2;
      add_block(d * bi->second, d * bj->second, hij);
      add_block(d * bj->second, d * bi->second, hij.transpose());
    }
  }
  ne.h.resize(n, n);
  ne.h.setFromTriplets(trip.begin(), trip.end());
  return ne;
}

StepResult step(const PoseGraph& g, const SolverConfig& cfg, double lambda) {
  return step_with(g, build_normal_equations(g), cfg, lambda);
}

OptimizeResult optimize(const PoseGraph& g, const SolverConfig& cfg) {
  g.validate();
  const bool lm = cfg.method == Method::levenberg_marquardt;
  OptimizeResult out;
  out.graph = g;
  double lambda = lm ? cfg.lm_initial_lambda : 0.0;
  NormalEquations ne = build_normal_equations(g);
  out.history.push_back({0, ne.chi2, 0.0, lambda});
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (ne.b.size() == 0 || ne.b.cwiseAbs().maxCoeff() < cfg.epsilon_gradient) break;
    StepResult r = step_with(out.graph, ne, cfg, lambda);
    if (!r.accepted) break;
    r.stats.iteration = it;
    out.history.push_back(r.stats);
    out.graph = std::move(r.graph);
    lambda = r.next_lambda;
    if (r.stats.update_norm < cfg.epsilon_update) break;
    if (it < cfg.max_iterations) ne = build_normal_equations(out.graph);
  }
  return out;
}

namespace {

MatrixXd synth_information(int d, SynthNoise noise) {
  const auto w = [](double s) { return s > 0.0 ? 1.0 / (s * s) : 1.0; };
  VectorXd diag(d);
  if (d == 3)
    diag << w(noise.sigma_t), w(noise.sigma_t), w(noise.sigma_r);
  else
    diag << w(noise.sigma_t), w(noise.sigma_t), w(noise.sigma_t), w(noise.sigma_r), w(noise.sigma_r),
        w(noise.sigma_r);
  return diag.asDiagonal();
}

struct Link {
  int from, to;
};

constexpr double kSphereRadius = 5.0;

HomPose sphere_pose(double a) {
  const auto pos = [](double s) -> Vec3 {
    const double e = 0.3 * std::sin(2 * s);
    return Vec3(std::cos(e) * std::cos(s), std::cos(e) * std::sin(s), std::sin(e)) * kSphereRadius;
  };
  const double h = 1e-4;
  const Vec3 p = pos(a);
  const Vec3 x = (pos(a + h) - pos(a - h)).normalized();
  const Vec3 z = (p - p.dot(x) * x).normalized();
  Mat3 r;
  r << x, z.cross(x), z;
  return HomPose::from_rt(r * rot_x(0.4 * std::sin(3 * a)), p);
}

}  // namespace

SynthGraphs synth_graph(SynthKind kind, int n, SynthNoise noise, std::uint64_t seed) {
  if (n < 3) throw DomainError("synth_graph needs at least 3 vertices");
  const GraphKind gk = kind == SynthKind::sphere3d ? GraphKind::se3 : GraphKind::se2;
  const int d = tangent_dim(gk);
  std::vector<VectorXd> truth(n);
  std::vector<Link> links;
  for (int k = 0; k + 1 < n; ++k) links.push_back({k, k + 1});

  if (kind == SynthKind::circle2d) {
    const double radius = 10.0;
    for (int k = 0; k < n; ++k) {
      const double a = 2 * std::numbers::pi * k / n;
      truth[k] = Vec3(radius * std::cos(a), radius * std::sin(a), wrap_angle(a + std::numbers::pi / 2));
    }
    links.push_back({n - 1, 0});
  } else if (kind == SynthKind::grid2d) {
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    auto cell = [cols](int k) {
      const int row = k / cols;
      const int c = row % 2 ? cols - 1 - k % cols : k % cols;
      return Vec2(c, row);
    };
    for (int k = 0; k < n; ++k) {
      const Vec2 dir = k + 1 < n ? Vec2(cell(k + 1) - cell(k)) : Vec2(cell(k) - cell(k - 1));
      truth[k] = Vec3(cell(k).x(), cell(k).y(), std::atan2(dir.y(), dir.x()));
    }
    for (int k = cols; k < n; ++k) {
      const int row = k / cols;
      const int col = static_cast<int>(cell(k).x());
      const int below = (row - 1) * cols + ((row - 1) % 2 ? cols - 1 - col : col);
      if (below != k - 1) links.push_back({below, k});
    }
  } else {
    for (int k = 0; k < n; ++k) truth[k] = pose3_to_raw(sphere_pose(2 * std::numbers::pi * k / n));
    links.push_back({n - 1, 0});
  }

  std::mt19937_64 rng(seed);
  auto draw = [&rng](double sigma) {
    return sigma > 0.0 ? std::normal_distribution<double>(0.0, sigma)(rng) : 0.0;
  };
  const MatrixXd info = synth_information(d, noise);

  SynthGraphs out;
  out.truth.kind = out.noisy.kind = gk;
  out.truth.fixed = out.noisy.fixed = {0};
  for (int k = 0; k < n; ++k) out.truth.add_vertex(k, truth[k]);

  std::vector<VectorXd> odometry(n - 1);
  for (const Link& l : links) {
    VectorXd exact, measured;
    if (gk == GraphKind::se3) {
      const HomPose dm = inverse_pose_matrix(out.truth.pose3(l.from)) * out.truth.pose3(l.to);
      Vec6 nu;
      for (int i = 0; i < 6; ++i) nu[i] = draw(i < 3 ? noise.sigma_t : noise.sigma_r);
      exact = pose3_to_raw(dm);
      measured = pose3_to_raw(dm * se3_pseudo_exp(TangentSE3::from_vector(nu)));
    } else {
      const HomPose2 dm = out.truth.pose2(l.from).inverse() * out.truth.pose2(l.to);
      const Vec3 nu(draw(noise.sigma_t), draw(noise.sigma_t), draw(noise.sigma_r));
      exact = pose2_to_raw(dm);
      measured = pose2_to_raw(dm * se2_pseudo_exp(nu));
    }
    out.truth.add_edge(l.from, l.to, exact, info);
    out.noisy.add_edge(l.from, l.to, measured, info);
    if (l.to == l.from + 1) odometry[l.from] = measured;
  }

  out.noisy.add_vertex(0, truth[0]);
  for (int k = 0; k + 1 < n; ++k) {
    if (gk == GraphKind::se3)
      out.noisy.add_vertex(k + 1, pose3_to_raw(out.noisy.pose3(k) * raw_to_pose3(odometry[k])));
    else
      out.noisy.add_vertex(k + 1, pose2_to_raw(out.noisy.pose2(k) * raw_to_pose2(odometry[k])));
  }
  return out;
}

double ate(const PoseGraph& a, const PoseGraph& b) {
  double sum = 0.0;
  int count = 0;
  const int dim = a.kind == GraphKind::se2 ? 2 : 3;
  for (const auto& [id, raw] : a.vertices) {
    const auto it = b.vertices.find(id);
    if (it == b.vertices.end()) continue;
    sum += (raw.head(dim) - it->second.head(dim)).squaredNorm();
    ++count;
  }
  return count ? std::sqrt(sum / count) : 0.0;
}

}  // namespace posekit
