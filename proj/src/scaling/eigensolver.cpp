#include "trapres/scaling/eigensolver.hpp"

#include "../common/lapack.hpp"
#include "trapres/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace trapres::scaling {

namespace {

// Returns false on breakdown (a near-isotropic rotation vector).
bool complex_symmetric_ql(std::vector<cplx>& d, std::vector<cplx>& e) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  long sweeps = 0;
  const long budget = 30L * std::max(n, 1);
  for (int l = 0; l < n; ++l) {
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++sweeps > budget) throw SolverError("tridiagonal QL did not converge", sweeps);
        cplx g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        cplx r = std::sqrt(g * g + 1.0);
        g = d[m] - d[l] + e[l] / (std::abs(g + r) >= std::abs(g - r) ? g + r : g - r);
        cplx s = 1.0, c = 1.0, p = 0.0;
        int i;
        bool deflated = false;
        for (i = m - 1; i >= l; --i) {
          const cplx f = s * e[i];
          const cplx b = c * e[i];
          r = std::sqrt(f * f + g * g);
          e[i + 1] = r;
          const double scale = std::abs(f) + std::abs(g);
          if (std::abs(r) == 0.0 && scale == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          if (std::abs(r) < 1e-6 * scale) return false;
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (deflated && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  for (const auto& v : d)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

std::vector<cplx> dense_eigenvalues(CMat A, CMat* vectors) {
  const int n = static_cast<int>(A.rows());
  std::vector<cplx> w(n);
  CMat vr(n, n);
  cplx dummy;
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, A.data(), n, w.data(),
                                        &dummy, 1, vectors ? vr.data() : &dummy, vectors ? n : 1);
  if (info > 0) throw SolverError("zgeev: QR iteration failed to converge", info);
  if (info < 0) throw SolverError("zgeev: invalid argument", info);
  if (vectors) *vectors = std::move(vr);
  return w;
}

}  // namespace

std::vector<cplx> tridiagonal_eigenvalues(const CVec& sub, const CVec& diag, const CVec& sup, bool force_dense) {
  const int n = static_cast<int>(diag.size());
  if (!force_dense) {
    std::vector<cplx> d(diag.data(), diag.data() + n), e(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt(sub[i] * sup[i]);
    if (complex_symmetric_ql(d, e)) return d;
  }
  CMat A = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    A(j, j) = diag[j];
    if (j + 1 < n) {
      A(j + 1, j) = sub[j];
      A(j, j + 1) = sup[j];
    }
  }
  return dense_eigenvalues(std::move(A), nullptr);
}

double eigenpair_residual(const DeformedOperator& op, cplx lambda) {
  const int n = op.size();
  if (n == 0) return 0.0;
  const double scale = std::max(op.diag.cwiseAbs().maxCoeff(), 1.0);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cplx(U(rng), U(rng));
  x.normalize();
  for (double shift : {1e-13, 1e-10, 1e-7}) {
    CVec dl = op.sub, d = op.diag, du = op.sup, du2(std::max(n - 2, 1));
    const cplx mu = lambda + cplx(shift, shift) * scale;
    for (int i = 0; i < n; ++i) d[i] -= mu;
    std::vector<lapack_int> ipiv(n);
    if (LAPACKE_zgttrf(n, dl.data(), d.data(), du.data(), du2.data(), ipiv.data()) != 0) continue;
    CVec v = x;
    bool ok = true;
    for (int it = 0; it < 3 && ok; ++it) {
      ok = LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(),
                          v.data(), n) == 0 && v.allFinite();
      if (ok) v.normalize();
    }
    if (!ok) continue;
    return (op.apply(v) - lambda * v).norm();
  }
  throw SolverError("eigenpair_residual: inverse iteration failed", 0);
}

std::vector<EigenPair> eigen_solve(const DeformedOperator& op, bool force_dense) {
  const std::vector<cplx> w = tridiagonal_eigenvalues(op.sub, op.diag, op.sup, force_dense);
  std::vector<EigenPair> out;
  out.reserve(w.size());
  for (const cplx& l : w) out.push_back({l, eigenpair_residual(op, l)});
  return out;
}

std::vector<EigenPair> eigen_solve(const CMat& A) {
  if (A.rows() != A.cols()) throw PreconditionError("eigen_solve: matrix must be square");
  CMat V;
  const std::vector<cplx> w = dense_eigenvalues(A, &V);
  std::vector<EigenPair> out;
  out.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const CVec v = V.col(static_cast<Eigen::Index>(k)).normalized();
    out.push_back({w[k], (A * v - w[k] * v).norm()});
  }
  return out;
}

}  // namespace trapres::scaling
