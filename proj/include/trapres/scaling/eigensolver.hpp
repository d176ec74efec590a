#pragma once

#include "trapres/scaling/deformed_operator.hpp"

#include <vector>

namespace trapres::scaling {

struct EigenPair {
  cplx value;
  double residual = 0.0;  // ||A v - value v|| with ||v|| = 1, by direct matvec
};

/// Eigenvalues of a tridiagonal matrix. Rescales to complex-symmetric form and
/// runs implicitly shifted QL; on breakdown of the complex-orthogonal rotations
/// (or when `force_dense`) falls back to LAPACK zgeev on the dense matrix.
/// QL accuracy falls off with |E| (N = 2000: relative residual ~1e-8 for |E| <= 1,
/// ~1e-5 for |E| <= 4, ~0.3 near the grid scale).
std::vector<cplx> tridiagonal_eigenvalues(const CVec& sub, const CVec& diag, const CVec& sup,
                                          bool force_dense = false);

/// Residual of the eigenpair (lambda, v) with v from inverse iteration on the
/// tridiagonal operator.
double eigenpair_residual(const DeformedOperator& op, cplx lambda);

/// Every eigenvalue of the operator with its independently recomputed residual.
std::vector<EigenPair> eigen_solve(const DeformedOperator& op, bool force_dense = false);

/// Dense general matrix (balancing, Hessenberg reduction and shifted QR via zgeev).
std::vector<EigenPair> eigen_solve(const CMat& A);

}  // namespace trapres::scaling
