#include "phaseless/reflectivity.hpp"

#include "phaseless/lowrank.hpp"
#include "phaseless/mmv.hpp"
#include "phaseless/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace phaseless {

LiftedProblem make_lifted_problem(const CMatrix& sensing, std::span<const IlluminationVector> illuminations,
                                  std::span<const RVector> intensities, std::span<const std::size_t> support,
                                  std::size_t max_unknowns) {
  if (support.empty()) throw std::invalid_argument("make_lifted_problem: empty support");
  if (support.size() > max_unknowns)
    throw std::invalid_argument("make_lifted_problem: support of " + std::to_string(support.size()) +
                                " pixels exceeds the lift limit of " + std::to_string(max_unknowns));
  if (illuminations.size() != intensities.size() || illuminations.empty())
    throw std::invalid_argument("make_lifted_problem: one intensity vector per illumination expected");

  const auto rows = sensing.rows();
  const auto l = static_cast<Eigen::Index>(support.size());
  const auto blocks = static_cast<Eigen::Index>(illuminations.size());
  CMatrix restricted(rows, l);
  for (Eigen::Index s = 0; s < l; ++s)
    restricted.col(s) = sensing.col(static_cast<Eigen::Index>(support[static_cast<std::size_t>(s)]));

  LiftedProblem problem;
  problem.op.resize(rows * blocks, l);
  problem.intensities.resize(rows * blocks);
  problem.support.assign(support.begin(), support.end());
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const auto& f = illuminations[static_cast<std::size_t>(b)];
    const auto& data = intensities[static_cast<std::size_t>(b)];
    if (data.size() != rows) throw std::invalid_argument("make_lifted_problem: intensity block has wrong length");
    problem.op.middleRows(b * rows, rows) = build_forward_operator(restricted, f.weights);
    problem.intensities.segment(b * rows, rows) = data;
  }
  return problem;
}

RVector lift_forward(const CMatrix& y, const CMatrix& op) {
  if (y.rows() != op.cols() || y.cols() != op.cols())
    throw std::invalid_argument("lift_forward: lifted matrix does not match the operator");
  return (op * y).cwiseProduct(op.conjugate()).rowwise().sum().real();
}

CMatrix lift_adjoint(const RVector& c, const CMatrix& op) {
  if (c.size() != op.rows()) throw std::invalid_argument("lift_adjoint: data length does not match the operator");
  CMatrix out = op.adjoint() * c.asDiagonal() * op;
  return 0.5 * (out + out.adjoint());
}

double lift_operator_norm(const CMatrix& op, std::size_t iterations, std::uint64_t seed) {
  const auto l = op.cols();
  RandomStream rng(seed, 0x11f7);
  CMatrix y(l, l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j) y(i, j) = Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  y = 0.5 * (y + y.adjoint());
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const double n = y.norm();
    if (n == 0.0) return 0.0;
    y /= n;
    y = lift_adjoint(lift_forward(y, op), op);
    estimate = y.norm();
  }
  return estimate;
}

LiftResult nuclear_min_reflectivity(const LiftedProblem& problem, const LiftParams& params) {
  const auto& a = problem.op;
  const auto& b = problem.intensities;
  const auto l = a.cols();
  const double b_norm = b.norm();

  LiftResult result;
  result.lifted = CMatrix::Zero(l, l);
  if (b_norm == 0.0) {
    result.converged = true;
    return result;
  }

  double beta = params.step;
  if (!(beta > 0.0)) {
    const double norm = lift_operator_norm(a, params.power_iterations);
    if (!(norm > 0.0)) throw SolverError("nuclear_min_reflectivity", "lift operator is zero");
    beta = 0.9 / norm;
  }
  double tau = params.threshold;
  if (!(tau > 0.0)) tau = 1e-3 * Eigen::BDCSVD<CMatrix>(lift_adjoint(b, a)).singularValues()(0);

  CMatrix prev = CMatrix::Zero(l, l);
  CMatrix curr = CMatrix::Zero(l, l);
  double t_prev = 1.0;
  double t_curr = 1.0;
  for (std::size_t it = 1; it <= params.max_iters; ++it) {
    const double w = (t_prev - 1.0) / t_curr;
    const CMatrix extrapolated = (1.0 + w) * curr - w * prev;
    CMatrix step = extrapolated - beta * lift_adjoint(lift_forward(extrapolated, a) - b, a);
    step = 0.5 * (step + step.adjoint());
    CMatrix next = params.mode == LiftMode::RankOne ? rank_one_project_hermitian(step)
                                                    : soft_threshold_hermitian(step, tau);
    next = 0.5 * (next + next.adjoint());
    if (!next.allFinite()) throw SolverError("nuclear_min_reflectivity", "non-finite iterate");

    const double change = (next - curr).norm();
    const double size = std::max(next.norm(), std::numeric_limits<double>::min());
    prev = std::move(curr);
    curr = std::move(next);
    t_prev = t_curr;
    t_curr = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_curr * t_curr));

    result.iterations = it;
    result.nuclear_norms.push_back(params.mode == LiftMode::RankOne
                                       ? curr.norm()
                                       : Eigen::SelfAdjointEigenSolver<CMatrix>(curr, Eigen::EigenvaluesOnly)
                                             .eigenvalues()
                                             .cwiseAbs()
                                             .sum());
    if (it > 1 && change <= params.tolerance * size) {
      result.converged = true;
      break;
    }
  }
  result.lifted = curr;
  result.relative_residual = (lift_forward(curr, a) - b).norm() / b_norm;
  if (!std::isfinite(result.relative_residual))
    throw SolverError("nuclear_min_reflectivity", "non-finite residual");
  return result;
}

RVector amplitudes_from_lift(const CMatrix& y) {
  const RVector diag = y.diagonal().real();
  if (diag.size() == 0) return diag;
  const double scale = diag.cwiseAbs().maxCoeff();
  RVector out(diag.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) < -1e-6 * scale)
      throw std::domain_error("amplitudes_from_lift: lifted matrix has a strongly negative diagonal");
    out(i) = std::sqrt(std::max(diag(i), 0.0));
  }
  return out;
}

}  // namespace phaseless
