#ifndef POSEKIT_C_H
#define POSEKIT_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef POSEKIT_BUILDING_LIBRARY
#    define POSEKIT_API __declspec(dllexport)
#  else
#    define POSEKIT_API __declspec(dllimport)
#  endif
#else
#  define POSEKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum posekit_status {
  POSEKIT_OK = 0,
  POSEKIT_ERR_ARGUMENT = 1,       /* null pointer, bad enum, bad size */
  POSEKIT_ERR_PARSE = 2,          /* malformed file */
  POSEKIT_ERR_DOMAIN = 3,         /* input outside an operation's domain */
  POSEKIT_ERR_SINGULAR = 4,       /* gimbal lock in a Jacobian */
  POSEKIT_ERR_BEHIND_CAMERA = 5,
  POSEKIT_ERR_RANGE = 6,          /* rotation angle too close to pi */
  POSEKIT_ERR_SOLVER = 7,         /* singular or rank-deficient normal equations */
  POSEKIT_ERR_INTERNAL = 8
} posekit_status;

/* Message of the last failing call on this thread; empty after success. */
POSEKIT_API const char* posekit_last_error(void);
POSEKIT_API const char* posekit_status_name(posekit_status s);

/*
 * Pose parameter vectors:
 *   YPR     6: x y z yaw pitch roll
 *   QUAT    7: x y z qr qx qy qz
 *   MATRIX 12: column-major top 3x4 block of the homogeneous matrix
 * Matrices (covariances, Jacobians) are row-major.
 */
typedef enum posekit_param { POSEKIT_YPR = 0, POSEKIT_QUAT = 1, POSEKIT_MATRIX = 2 } posekit_param;

POSEKIT_API int posekit_param_dim(posekit_param p);

/* jacobian may be NULL; otherwise dim(to) x dim(from). */
POSEKIT_API posekit_status posekit_convert(posekit_param from, const double* in, posekit_param to,
                                           double* out, double* jacobian);
POSEKIT_API posekit_status posekit_convert_gaussian(posekit_param from, const double* mean,
                                                    const double* cov, posekit_param to,
                                                    double* out_mean, double* out_cov);

POSEKIT_API posekit_status posekit_compose(posekit_param p, const double* a, const double* b,
                                           double* out);
POSEKIT_API posekit_status posekit_invert(posekit_param p, const double* in, double* out);
/* out = pose (+) point */
POSEKIT_API posekit_status posekit_apply_point(posekit_param p, const double* pose,
                                               const double point[3], double out[3]);
/* out = point (-) pose */
POSEKIT_API posekit_status posekit_inv_apply_point(posekit_param p, const double* pose,
                                                   const double point[3], double out[3]);

/* First-order propagation of independent Gaussian operands. */
POSEKIT_API posekit_status posekit_propagate_compose(posekit_param p, const double* a,
                                                     const double* cov_a, const double* b,
                                                     const double* cov_b, double* out,
                                                     double* out_cov);
POSEKIT_API posekit_status posekit_propagate_apply_point(posekit_param p, const double* pose,
                                                         const double* cov_pose,
                                                         const double point[3],
                                                         const double cov_point[9],
                                                         double out[3], double out_cov[9]);
POSEKIT_API posekit_status posekit_propagate_inv_apply_point(posekit_param p, const double* pose,
                                                             const double* cov_pose,
                                                             const double point[3],
                                                             const double cov_point[9],
                                                             double out[3], double out_cov[9]);
POSEKIT_API posekit_status posekit_propagate_inverse(posekit_param p, const double* pose,
                                                     const double* cov, double* out,
                                                     double* out_cov);

/* Tangent vectors are (t, w), translation first. pseudo selects the maps that
 * keep the translation block verbatim. */
POSEKIT_API posekit_status posekit_expmap(const double v[6], int pseudo, double out[12]);
POSEKIT_API posekit_status posekit_logmap(const double m[12], int pseudo, double out[6]);

/* intrinsics: fx fy cx cy. Projects camera-frame points pose (+) p_i. */
POSEKIT_API posekit_status posekit_project(const double intrinsics[4], const double pose[12],
                                           const double* points, size_t n, double* pixels);

typedef struct posekit_report posekit_report;

POSEKIT_API posekit_status posekit_check_catalog(uint64_t seed, int samples, double tol,
                                                 posekit_report** out);
POSEKIT_API size_t posekit_report_size(const posekit_report* r);
/* op stays valid until posekit_report_free. */
POSEKIT_API posekit_status posekit_report_entry(const posekit_report* r, size_t i, const char** op,
                                                double* max_abs_error, int* worst_row,
                                                int* worst_col, int* pass);
POSEKIT_API void posekit_report_free(posekit_report* r);

typedef struct posekit_graph posekit_graph;

typedef enum posekit_method { POSEKIT_GAUSS_NEWTON = 0, POSEKIT_LEVENBERG_MARQUARDT = 1 } posekit_method;

typedef struct posekit_solver_config {
  posekit_method method;
  int max_iterations;
  double epsilon_gradient;
  double epsilon_update;
  double lm_initial_lambda;
  double lm_factor;
} posekit_solver_config;

typedef enum posekit_synth_kind {
  POSEKIT_SYNTH_CIRCLE2D = 0,
  POSEKIT_SYNTH_GRID2D = 1,
  POSEKIT_SYNTH_SPHERE3D = 2
} posekit_synth_kind;

POSEKIT_API void posekit_solver_config_default(posekit_solver_config* cfg);

POSEKIT_API posekit_status posekit_graph_load(const char* path, posekit_graph** out);
POSEKIT_API posekit_status posekit_graph_save(const posekit_graph* g, const char* path);
POSEKIT_API posekit_status posekit_graph_synth(posekit_synth_kind kind, int n, double sigma_t,
                                               double sigma_r, uint64_t seed,
                                               posekit_graph** truth, posekit_graph** noisy);
POSEKIT_API void posekit_graph_free(posekit_graph* g);

/* 2 or 3 */
POSEKIT_API int posekit_graph_dimension(const posekit_graph* g);
POSEKIT_API size_t posekit_graph_vertex_count(const posekit_graph* g);
POSEKIT_API size_t posekit_graph_edge_count(const posekit_graph* g);
POSEKIT_API posekit_status posekit_graph_chi2(const posekit_graph* g, double* out);

/* Replaces the graph's poses with the optimized ones and records the history. */
POSEKIT_API posekit_status posekit_graph_optimize(posekit_graph* g, const posekit_solver_config* cfg);
/* Entry 0 is the initial state. Empty before the first optimize. */
POSEKIT_API size_t posekit_graph_history_size(const posekit_graph* g);
POSEKIT_API posekit_status posekit_graph_history(const posekit_graph* g, size_t i, int* iteration,
                                                 double* chi2, double* update_norm, double* lambda);

#ifdef __cplusplus
}
#endif

#endif
