#pragma once

#include <stdexcept>
#include <string>

namespace posekit {

/// Input outside the domain of an operation (zero quaternion, non-skew matrix, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Jacobian requested at a point where the parameterization is singular (gimbal lock).
class SingularConfiguration : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Point at or behind the camera plane.
class BehindCamera : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Rotation angle too close to pi for a map whose closed form degrades there.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Malformed text input (g2o files, JSON poses).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normal equations could not be solved.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace posekit
