#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "posekit/types.hpp"

namespace posekit {

enum class GraphKind { se2, se3 };

/// Tangent dimension of one vertex: 3 for SE(2), 6 for SE(3).
inline int tangent_dim(GraphKind k) { return k == GraphKind::se2 ? 3 : 6; }
/// Raw parameter count: (x, y, theta) or (x, y, z, qr, qx, qy, qz).
inline int raw_dim(GraphKind k) { return k == GraphKind::se2 ? 3 : 7; }

struct GraphEdge {
  int from = 0;
  int to = 0;
  Eigen::VectorXd measurement;  ///< raw parameters of D, see raw_dim
  Eigen::MatrixXd information;  ///< in (t, w) tangent coordinates
};

/// Poses are kept as raw parameter vectors, exactly as read from or written to
/// g2o text; the quaternion is normalized whenever a matrix is built from it.
struct PoseGraph {
  GraphKind kind = GraphKind::se2;
  std::map<int, Eigen::VectorXd> vertices;
  std::vector<GraphEdge> edges;
  std::set<int> fixed;

  void add_vertex(int id, const Eigen::VectorXd& raw);
  void add_edge(int from, int to, const Eigen::VectorXd& measurement, const Eigen::MatrixXd& information);

  HomPose pose3(int id) const;
  HomPose2 pose2(int id) const;
  /// Throws DomainError on missing endpoints, wrong sizes or asymmetric information.
  void validate() const;
};

HomPose raw_to_pose3(const Eigen::VectorXd& raw);
HomPose2 raw_to_pose2(const Eigen::VectorXd& raw);
Eigen::VectorXd pose3_to_raw(const HomPose& p);
Eigen::VectorXd pose2_to_raw(const HomPose2& p);

/// Right retraction P <- P pseudo_exp(eps) applied to raw parameters.
Eigen::VectorXd retract(GraphKind kind, const Eigen::VectorXd& raw, const Eigen::VectorXd& eps);

enum class Method { gauss_newton, levenberg_marquardt };

struct SolverConfig {
  Method method = Method::levenberg_marquardt;
  int max_iterations = 50;
  double epsilon_gradient = 1e-9;
  double epsilon_update = 1e-10;
  double lm_initial_lambda = 1e-4;
  double lm_factor = 10.0;
  int lm_max_retries = 10;
};

struct IterationStats {
  int iteration = 0;
  double chi2 = 0.0;
  double update_norm = 0.0;
  double lambda = 0.0;  ///< 0 for Gauss-Newton
};

double chi2(const PoseGraph& g);

struct NormalEquations {
  Eigen::SparseMatrix<double> h;
  Eigen::VectorXd b;
  std::vector<int> free_ids;  ///< vertex id of each block, ascending
  double chi2 = 0.0;
};

/// H = sum J^T L J and b = sum J^T L e over edges, restricted to free vertices.
/// The chi2 gradient over the stacked tangent coordinates is 2b.
NormalEquations build_normal_equations(const PoseGraph& g);

/// Throws SolverError if there is no fixed vertex or some connected component
/// has none; the message lists the vertices of the offending component.
void check_gauge(const PoseGraph& g);

struct StepResult {
  PoseGraph graph;
  IterationStats stats;
  bool accepted = true;
  double next_lambda = 0.0;
};

/// One GN step, or one LM step with up to lm_max_retries lambda increases.
/// A rejected LM step returns the input graph unchanged.
StepResult step(const PoseGraph& g, const SolverConfig& cfg, double lambda);

struct OptimizeResult {
  PoseGraph graph;
  std::vector<IterationStats> history;  ///< history[0] is the initial state
};

OptimizeResult optimize(const PoseGraph& g, const SolverConfig& cfg);

enum class SynthKind { circle2d, grid2d, sphere3d };

struct SynthNoise {
  double sigma_t = 0.0;
  double sigma_r = 0.0;
};

struct SynthGraphs {
  PoseGraph truth;  ///< true poses, exact measurements
  PoseGraph noisy;  ///< noisy measurements, dead-reckoned initial poses
};

/// Odometry chain plus loop closures; vertex 0 fixed; deterministic in seed.
SynthGraphs synth_graph(SynthKind kind, int n, SynthNoise noise, std::uint64_t seed);

/// RMS translation difference over common vertices.
double ate(const PoseGraph& a, const PoseGraph& b);

}  // namespace posekit
