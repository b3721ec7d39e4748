#pragma once

#include "phaseless/polarization.hpp"
#include "phaseless/types.hpp"

#include <cstddef>
#include <vector>

namespace phaseless {

/// Thin SVD A = U diag(sigma) V*, singular values descending.
struct SvdResult {
  CMatrix u;
  RVector sigma;
  CMatrix v;

  std::size_t rank(double relative_tol) const;
  CMatrix reconstruct() const;
};

SvdResult svd(const CMatrix& a);

/// Eigen-based SVD for Hermitian input: sigma = |lambda|, U = V diag(sign lambda).
SvdResult hermitian_svd(const CMatrix& a);

double nuclear_norm(const CMatrix& a);

/// S_tau(A) = U diag(max(sigma - tau, 0)) V*.
CMatrix soft_threshold(const CMatrix& a, double tau);

/// sigma_1 U_1 V_1*.
CMatrix rank_one_project(const CMatrix& a);

/// Singular value thresholding for nuclear-norm matrix completion.
/// Zero `threshold` / `step` select the defaults 5 N mean|M_known| and
/// 1.2 N^2 / |Omega|.
struct CompletionParams {
  double threshold = 0.0;
  double step = 0.0;
  std::size_t max_iters = 500;
  double tolerance = 1e-6;  ///< relative residual on the known entries
  std::size_t patience = 50;
};

struct CompletionResult {
  CMatrix matrix;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Fills the unknown entries of `m` by minimising the nuclear norm subject to
/// agreement on the known entries. Iterates are kept Hermitian. Throws
/// std::invalid_argument for an empty mask and SolverError when the residual
/// grows for `patience` consecutive iterations or turns non-finite.
CompletionResult complete_matrix(const TimeReversalMatrix& m, const CompletionParams& params = {});

}  // namespace phaseless

namespace phaseless {

/// soft_threshold for Hermitian input via its eigendecomposition; the result
/// is Hermitian: sum_k sign(lambda_k) max(|lambda_k| - tau, 0) v_k v_k^*.
CMatrix soft_threshold_hermitian(const CMatrix& a, double tau);

/// rank_one_project for Hermitian input: lambda_1 v_1 v_1^* for the
/// eigenvalue of largest magnitude.
CMatrix rank_one_project_hermitian(const CMatrix& a);

}  // namespace phaseless
