#include "posekit_c.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "posekit/core.hpp"
#include "posekit/errors.hpp"
#include "posekit/g2o.hpp"
#include "posekit/geometry.hpp"
#include "posekit/graphslam.hpp"
#include "posekit/lie.hpp"
#include "posekit/numcheck.hpp"
#include "posekit/vision.hpp"

using namespace posekit;

struct posekit_report {
  std::vector<JacobianReport> entries;
};

struct posekit_graph {
  PoseGraph graph;
  std::vector<IterationStats> history;
};

namespace {

thread_local std::string g_last_error;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

posekit_status fail(posekit_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
posekit_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return POSEKIT_OK;
  } catch (const SingularConfiguration& e) {
    return fail(POSEKIT_ERR_SINGULAR, e.what());
  } catch (const BehindCamera& e) {
    return fail(POSEKIT_ERR_BEHIND_CAMERA, e.what());
  } catch (const DomainError& e) {
    return fail(POSEKIT_ERR_DOMAIN, e.what());
  } catch (const RangeError& e) {
    return fail(POSEKIT_ERR_RANGE, e.what());
  } catch (const ParseError& e) {
    return fail(POSEKIT_ERR_PARSE, e.what());
  } catch (const SolverError& e) {
    return fail(POSEKIT_ERR_SOLVER, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(POSEKIT_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(POSEKIT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(POSEKIT_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Param to_param(posekit_param p) {
  require(p == POSEKIT_YPR || p == POSEKIT_QUAT || p == POSEKIT_MATRIX, "unknown parameterization");
  return static_cast<Param>(p);
}

PoseValue read_pose(posekit_param p, const double* in) {
  require(in != nullptr, "null pose");
  switch (to_param(p)) {
    case Param::ypr:
      return EulerPose::from_vector(Eigen::Map<const Vec6>(in));
    case Param::quat:
      return QuatPose::from_vector(Eigen::Map<const Vec7>(in));
    case Param::matrix:
      return HomPose::checked(HomPose::from_vec12(Eigen::Map<const Vec12>(in)).matrix(), 1e-6);
  }
  return {};
}

void write_pose(const PoseValue& v, double* out) {
  require(out != nullptr, "null output");
  std::visit(
      [out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HomPose>) {
          Eigen::Map<Vec12>{out} = p.vec12();
        } else {
          const auto v = p.vector();
          Eigen::Map<Eigen::VectorXd>(out, v.size()) = v;
        }
      },
      v);
}

Eigen::MatrixXd read_cov(const double* c, int n) {
  if (!c) return Eigen::MatrixXd::Zero(n, n);
  return Eigen::Map<const RowMajor>(c, n, n);
}

void write_matrix(const Eigen::MatrixXd& m, double* out) {
  if (out) Eigen::Map<RowMajor>(out, m.rows(), m.cols()) = m;
}

GaussianPose gaussian(posekit_param p, const double* mean, const double* cov) {
  const PoseValue v = read_pose(p, mean);
  return {v, read_cov(cov, param_dim(param_of(v)))};
}

GaussianPoint3 gaussian_point(const double* point, const double* cov) {
  require(point != nullptr, "null point");
  GaussianPoint3 g;
  g.mean = Eigen::Map<const Vec3>(point);
  if (cov) g.cov = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(cov);
  return g;
}

void write_point(const GaussianPoint3& g, double* out, double* out_cov) {
  require(out != nullptr, "null output");
  Eigen::Map<Vec3>{out} = g.mean;
  write_matrix(g.cov, out_cov);
}

}  // namespace

extern "C" {

const char* posekit_last_error(void) { return g_last_error.c_str(); }

const char* posekit_status_name(posekit_status s) {
  switch (s) {
    case POSEKIT_OK: return "ok";
    case POSEKIT_ERR_ARGUMENT: return "invalid argument";
    case POSEKIT_ERR_PARSE: return "parse error";
    case POSEKIT_ERR_DOMAIN: return "domain error";
    case POSEKIT_ERR_SINGULAR: return "singular configuration";
    case POSEKIT_ERR_BEHIND_CAMERA: return "point behind camera";
    case POSEKIT_ERR_RANGE: return "range error";
    case POSEKIT_ERR_SOLVER: return "solver error";
    case POSEKIT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int posekit_param_dim(posekit_param p) {
  if (p != POSEKIT_YPR && p != POSEKIT_QUAT && p != POSEKIT_MATRIX) return 0;
  return param_dim(static_cast<Param>(p));
}

posekit_status posekit_convert(posekit_param from, const double* in, posekit_param to, double* out,
                               double* jacobian) {
  return guarded([&] {
    const PoseValue v = read_pose(from, in);
    const Param target = to_param(to);
    write_pose(convert(v, target), out);
    if (jacobian) write_matrix(conversion_jacobian(v, target), jacobian);
  });
}

posekit_status posekit_convert_gaussian(posekit_param from, const double* mean, const double* cov,
                                        posekit_param to, double* out_mean, double* out_cov) {
  return guarded([&] {
    require(cov != nullptr, "null covariance");
    const GaussianPose g = convert_gaussian(gaussian(from, mean, cov), to_param(to));
    write_pose(g.mean, out_mean);
    write_matrix(g.cov, out_cov);
  });
}

posekit_status posekit_compose(posekit_param p, const double* a, const double* b, double* out) {
  return posekit_propagate_compose(p, a, nullptr, b, nullptr, out, nullptr);
}

posekit_status posekit_invert(posekit_param p, const double* in, double* out) {
  return posekit_propagate_inverse(p, in, nullptr, out, nullptr);
}

posekit_status posekit_apply_point(posekit_param p, const double* pose, const double point[3],
                                   double out[3]) {
  return posekit_propagate_apply_point(p, pose, nullptr, point, nullptr, out, nullptr);
}

posekit_status posekit_inv_apply_point(posekit_param p, const double* pose, const double point[3],
                                       double out[3]) {
  return posekit_propagate_inv_apply_point(p, pose, nullptr, point, nullptr, out, nullptr);
}

posekit_status posekit_propagate_compose(posekit_param p, const double* a, const double* cov_a,
                                         const double* b, const double* cov_b, double* out,
                                         double* out_cov) {
  return guarded([&] {
    const GaussianPose g = propagate_compose_pose(gaussian(p, a, cov_a), gaussian(p, b, cov_b));
    write_pose(g.mean, out);
    write_matrix(g.cov, out_cov);
  });
}

posekit_status posekit_propagate_apply_point(posekit_param p, const double* pose,
                                             const double* cov_pose, const double point[3],
                                             const double cov_point[9], double out[3],
                                             double out_cov[9]) {
  return guarded([&] {
    write_point(propagate_compose_point(gaussian(p, pose, cov_pose), gaussian_point(point, cov_point)),
                out, out_cov);
  });
}

posekit_status posekit_propagate_inv_apply_point(posekit_param p, const double* pose,
                                                 const double* cov_pose, const double point[3],
                                                 const double cov_point[9], double out[3],
                                                 double out_cov[9]) {
  return guarded([&] {
    write_point(
        propagate_inv_compose_point(gaussian_point(point, cov_point), gaussian(p, pose, cov_pose)),
        out, out_cov);
  });
}

posekit_status posekit_propagate_inverse(posekit_param p, const double* pose, const double* cov,
                                         double* out, double* out_cov) {
  return guarded([&] {
    const GaussianPose g = propagate_inverse(gaussian(p, pose, cov));
    write_pose(g.mean, out);
    write_matrix(g.cov, out_cov);
  });
}

posekit_status posekit_expmap(const double v[6], int pseudo, double out[12]) {
  return guarded([&] {
    require(v && out, "null argument");
    const TangentSE3 t = TangentSE3::from_vector(Eigen::Map<const Vec6>(v));
    Eigen::Map<Vec12>{out} = (pseudo ? se3_pseudo_exp(t) : se3_exp(t)).vec12();
  });
}

posekit_status posekit_logmap(const double m[12], int pseudo, double out[6]) {
  return guarded([&] {
    require(m && out, "null argument");
    const HomPose h = HomPose::checked(HomPose::from_vec12(Eigen::Map<const Vec12>(m)).matrix(), 1e-6);
    Eigen::Map<Vec6>{out} = (pseudo ? se3_pseudo_log(h) : se3_log(h)).vector();
  });
}

posekit_status posekit_project(const double intrinsics[4], const double pose[12], const double* points,
                               size_t n, double* pixels) {
  return guarded([&] {
    require(intrinsics && pose && (n == 0 || (points && pixels)), "null argument");
    const CameraIntrinsics k{intrinsics[0], intrinsics[1], intrinsics[2], intrinsics[3]};
    const HomPose a = std::get<HomPose>(read_pose(POSEKIT_MATRIX, pose));
    for (size_t i = 0; i < n; ++i) {
      const Pixel px = project_pose_point(k, a, Eigen::Map<const Vec3>(points + 3 * i)).pixel;
      pixels[2 * i] = px.u;
      pixels[2 * i + 1] = px.v;
    }
  });
}

posekit_status posekit_check_catalog(uint64_t seed, int samples, double tol, posekit_report** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    require(samples >= 0, "negative sample count");
    auto r = std::make_unique<posekit_report>();
    r->entries = check_catalog(seed, samples, tol);
    *out = r.release();
  });
}

size_t posekit_report_size(const posekit_report* r) { return r ? r->entries.size() : 0; }

posekit_status posekit_report_entry(const posekit_report* r, size_t i, const char** op,
                                    double* max_abs_error, int* worst_row, int* worst_col, int* pass) {
  return guarded([&] {
    require(r != nullptr && i < r->entries.size(), "report index out of range");
    const JacobianReport& e = r->entries[i];
    if (op) *op = e.op.c_str();
    if (max_abs_error) *max_abs_error = e.max_abs_error;
    if (worst_row) *worst_row = e.worst_row;
    if (worst_col) *worst_col = e.worst_col;
    if (pass) *pass = e.pass ? 1 : 0;
  });
}

void posekit_report_free(posekit_report* r) { delete r; }

void posekit_solver_config_default(posekit_solver_config* cfg) {
  if (!cfg) return;
  const SolverConfig d;
  cfg->method = POSEKIT_LEVENBERG_MARQUARDT;
  cfg->max_iterations = d.max_iterations;
  cfg->epsilon_gradient = d.epsilon_gradient;
  cfg->epsilon_update = d.epsilon_update;
  cfg->lm_initial_lambda = d.lm_initial_lambda;
  cfg->lm_factor = d.lm_factor;
}

posekit_status posekit_graph_load(const char* path, posekit_graph** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto g = std::make_unique<posekit_graph>();
    g->graph = read_g2o_file(path);
    *out = g.release();
  });
}

posekit_status posekit_graph_save(const posekit_graph* g, const char* path) {
  return guarded([&] {
    require(g && path, "null argument");
    write_g2o_file(path, g->graph);
  });
}

posekit_status posekit_graph_synth(posekit_synth_kind kind, int n, double sigma_t, double sigma_r,
                                   uint64_t seed, posekit_graph** truth, posekit_graph** noisy) {
  return guarded([&] {
    require(truth && noisy, "null output");
    require(kind >= POSEKIT_SYNTH_CIRCLE2D && kind <= POSEKIT_SYNTH_SPHERE3D, "unknown graph kind");
    require(sigma_t >= 0 && sigma_r >= 0, "negative noise");
    SynthGraphs s = synth_graph(static_cast<SynthKind>(kind), n, {sigma_t, sigma_r}, seed);
    auto t = std::make_unique<posekit_graph>();
    auto m = std::make_unique<posekit_graph>();
    t->graph = std::move(s.truth);
    m->graph = std::move(s.noisy);
    *truth = t.release();
    *noisy = m.release();
  });
}

void posekit_graph_free(posekit_graph* g) { delete g; }

int posekit_graph_dimension(const posekit_graph* g) {
  if (!g) return 0;
  return g->graph.kind == GraphKind::se2 ? 2 : 3;
}

size_t posekit_graph_vertex_count(const posekit_graph* g) { return g ? g->graph.vertices.size() : 0; }
size_t posekit_graph_edge_count(const posekit_graph* g) { return g ? g->graph.edges.size() : 0; }

posekit_status posekit_graph_chi2(const posekit_graph* g, double* out) {
  return guarded([&] {
    require(g && out, "null argument");
    *out = chi2(g->graph);
  });
}

posekit_status posekit_graph_optimize(posekit_graph* g, const posekit_solver_config* cfg) {
  return guarded([&] {
    require(g != nullptr, "null graph");
    SolverConfig c;
    if (cfg) {
      require(cfg->method == POSEKIT_GAUSS_NEWTON || cfg->method == POSEKIT_LEVENBERG_MARQUARDT,
              "unknown method");
      require(cfg->max_iterations >= 0, "negative iteration limit");
      require(cfg->epsilon_gradient > 0 && cfg->epsilon_update > 0 && cfg->lm_initial_lambda > 0 &&
                  cfg->lm_factor > 1,
              "solver tolerances must be positive and lm_factor > 1");
      c.method = cfg->method == POSEKIT_GAUSS_NEWTON ? Method::gauss_newton : Method::levenberg_marquardt;
      c.max_iterations = cfg->max_iterations;
      c.epsilon_gradient = cfg->epsilon_gradient;
      c.epsilon_update = cfg->epsilon_update;
      c.lm_initial_lambda = cfg->lm_initial_lambda;
      c.lm_factor = cfg->lm_factor;
    }
    OptimizeResult r = optimize(g->graph, c);
    g->graph = std::move(r.graph);
    g->history = std::move(r.history);
  });
}

size_t posekit_graph_history_size(const posekit_graph* g) { return g ? g->history.size() : 0; }

posekit_status posekit_graph_history(const posekit_graph* g, size_t i, int* iteration, double* chi2_out,
                                     double* update_norm, double* lambda) {
  return guarded([&] {
    require(g != nullptr && i < g->history.size(), "history index out of range");
    const IterationStats& s = g->history[i];
    if (iteration) *iteration = s.iteration;
    if (chi2_out) *chi2_out = s.chi2;
    if (update_norm) *update_norm = s.update_norm;
    if (lambda) *lambda = s.lambda;
  });
}

}  // extern "C"
