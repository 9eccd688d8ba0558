#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "posekit/lie.hpp"
#include "posekit/types.hpp"

namespace posekit {

inline constexpr double kDefaultStep = 1e-6;

using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Raised when f throws while differentiating; column() is the perturbed coordinate.
class FiniteDifferenceError : public std::runtime_error {
 public:
  FiniteDifferenceError(Eigen::Index column, const std::string& what)
      : std::runtime_error("finite difference failed at column " + std::to_string(column) + ": " +
                           what),
        column_(column) {}
  Eigen::Index column() const { return column_; }

 private:
  Eigen::Index column_;
};

/// Central differences: column i = (f(x0 + h e_i) - f(x0 - h e_i)) / 2h.
Eigen::MatrixXd numeric_jacobian(const VectorFn& f, const Eigen::VectorXd& x0,
                                 double h = kDefaultStep);

enum class Side { left, right };

inline HomPose boxplus(const HomPose& base, const Vec6& eps, Side side) {
  const HomPose e = se3_pseudo_exp(TangentSE3::from_vector(eps));
  return side == Side::left ? e * base : base * e;
}

inline HomPose2 boxplus(const HomPose2& base, const Vec3& eps, Side side) {
  const HomPose2 e = se2_pseudo_exp(eps);
  return side == Side::left ? e * base : base * e;
}

/// Central differences of f(base (+) eps) over eps, the increment entering as
/// pseudo_exp(eps) on the given side. Translation-first ordering.
template <class F>
Eigen::MatrixXd manifold_numeric_jacobian(F&& f, const HomPose& base, Side side,
                                          double h = kDefaultStep) {
  return numeric_jacobian(
      [&](const Eigen::VectorXd& eps) -> Eigen::VectorXd {
        return f(boxplus(base, Vec6(eps), side));
      },
      Eigen::VectorXd::Zero(6), h);
}

template <class F>
Eigen::MatrixXd manifold_numeric_jacobian(F&& f, const HomPose2& base, Side side,
                                          double h = kDefaultStep) {
  return numeric_jacobian(
      [&](const Eigen::VectorXd& eps) -> Eigen::VectorXd {
        return f(boxplus(base, Vec3(eps), side));
      },
      Eigen::VectorXd::Zero(3), h);
}

/// Seeded random inputs: translations uniform in [-2, 2]^3, rotation vectors
/// with uniform direction and angle uniform in [0, 2.8], YPR pitch within +-85 deg.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  Sampler(std::uint64_t seed, std::uint64_t stream);

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double sigma) { return std::normal_distribution<double>(0.0, sigma)(rng_); }
  Vec3 translation();
  Vec3 unit_vector();
  Vec3 rotation_vector(double max_angle = 2.8, double min_angle = 0.0);
  EulerPose ypr_pose();
  QuatPose quat_pose();
  HomPose hom_pose();
  Point3 point() { return translation(); }
  HomPose2 pose2();
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct JacobianReport {
  std::string op;
  double max_abs_error = 0.0;
  int worst_row = -1;
  int worst_col = -1;
  Eigen::MatrixXd analytic;  ///< at the worst sample
  Eigen::MatrixXd numeric;   ///< at the worst sample
  bool pass = true;
  int samples = 0;
};

/// Element-wise comparison; pass iff max |analytic - numeric| <= tol.
JacobianReport compare_jacobians(const std::string& op, const Eigen::MatrixXd& analytic,
                                 const Eigen::MatrixXd& numeric, double tol);

/// Runs every analytic Jacobian of the library against central differences on
/// n_samples seeded inputs. Reports are sorted by op name; n_samples == 0 gives
/// an empty list.
std::vector<JacobianReport> check_catalog(std::uint64_t seed, int n_samples, double tol);

/// Names of the catalog entries, sorted.
std::vector<std::string> catalog_names();

}  // namespace posekit
