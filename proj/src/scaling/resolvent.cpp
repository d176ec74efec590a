#include "trapres/scaling/resolvent.hpp"

#include "../common/lapack.hpp"
#include "trapres/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace trapres::scaling {

double resolvent_norm(const DeformedOperator& op, cplx omega, const ResolventOptions& opts) {
  const int n = op.size();
  if (n == 0) throw PreconditionError("resolvent_norm: empty operator");
  const cplx z = omega * omega;
  CVec dl = op.sub, d = op.diag, du = op.sup, du2(std::max(n - 2, 1));
  for (int i = 0; i < n; ++i) d[i] -= z;
  std::vector<lapack_int> ipiv(n);
  if (LAPACKE_zgttrf(n, dl.data(), d.data(), du.data(), du2.data(), ipiv.data()) != 0)
    throw PreconditionError("resolvent_norm: omega^2 is an eigenvalue");

  auto solve = [&](CVec& v, char trans) {
    if (LAPACKE_zgttrs(LAPACK_COL_MAJOR, trans, n, 1, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(),
                       v.data(), n) != 0)
      throw PreconditionError("resolvent_norm: triangular solve failed");
  };

  // Lanczos on the Hermitian positive definite M = (B^H B)^{-1}; its largest
  // eigenvalue is sigma_min(B)^{-2}. Full reorthogonalisation keeps clustered
  // singular values from stalling the estimate.
  std::mt19937_64 rng(0xabcdef);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int kmax = std::min(n, opts.max_iterations);
  std::vector<CVec> basis;
  basis.reserve(kmax);
  CVec q(n);
  for (int i = 0; i < n; ++i) q[i] = cplx(U(rng), U(rng));
  q.normalize();
  std::vector<double> alpha, beta;
  double est = 0.0;
  for (int k = 0; k < kmax; ++k) {
    basis.push_back(q);
    CVec w = q;
    solve(w, 'C');
    solve(w, 'N');
    if (!w.allFinite()) throw PreconditionError("resolvent_norm: omega^2 is an eigenvalue");
    alpha.push_back(q.dot(w).real());
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& v : basis) w -= v * v.dot(w);
    const double b = w.norm();

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      T(i, i) = alpha[i];
      if (i < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double top = es.eigenvalues()(k);
    const double resid = b * std::abs(es.eigenvectors()(k, k));
    est = std::sqrt(top);
    // Ritz residual bounds the eigenvalue error of a Hermitian operator.
    if (resid <= opts.relative_tolerance * top || b <= 1e-14 * top) return est;
    beta.push_back(b);
    q = w / b;
  }
  if (kmax == n) return est;
  throw NormUncertainError("resolvent_norm: Lanczos did not converge", est);
}

double resolvent_norm(const std::vector<DeformedOperator>& stack, cplx omega, const ResolventOptions& opts) {
  double m = 0.0;
  for (const auto& op : stack) m = std::max(m, resolvent_norm(op, omega, opts));
  return m;
}

}  // namespace trapres::scaling
