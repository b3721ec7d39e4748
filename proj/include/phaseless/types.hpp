#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace phaseless {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Planar point: `x` is cross-range, `z` is range (distance from the array line).
struct Point2 {
  double x = 0.0;
  double z = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.z - b.z);
}

/// Raised when a Green's function is evaluated at coincident points.
class SingularEvaluation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative solver failure (divergence, non-finite iterates). `stage()` names
/// the pipeline step that raised it.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace phaseless
