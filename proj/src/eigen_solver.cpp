#include "lpp/eigen_solver.hpp"

#include <algorithm>
#include <random>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace lpp {

namespace {

SpectrumResult zheevd_solve(Eigen::MatrixXcd A, bool want_vectors) {
  const int n = static_cast<int>(A.rows());
  std::vector<double> w(n);
  const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                                  A.data(), n, w.data());
  if (info != 0)
    throw NumericalError("zheevd failed with info = " + std::to_string(info));
  SpectrumResult r;
  r.eigenvalues = std::move(w);
  if (want_vectors) r.eigenvectors = std::move(A);
  return r;
}

// Lanczos with full reorthogonalization against the stored basis.
SpectrumResult lanczos_lowest(const SparseHermitianOperator& H, int k,
                              bool want_vectors) {
  const int n = H.dim;
  if (k <= 0 || k > n) throw std::invalid_argument("LowestK needs 0 < k <= dim");
  const int m_max = std::min(n, std::max(3 * k, 200));
  std::mt19937_64 rng(0x6c70705fULL);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd V(n, m_max);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cd(nd(rng), nd(rng));
  v.normalize();
  V.col(0) = v;
  std::vector<double> a, b;  // tridiagonal entries
  Eigen::VectorXcd w(n);
  int m = 0;
  double conv_resid = 1e300;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  for (int j = 0; j < m_max; ++j) {
    w = H.mat * V.col(j);
    const double aj = std::real(V.col(j).dot(w));
    a.push_back(aj);
    w -= aj * V.col(j);
    if (j > 0) w -= b[j - 1] * V.col(j - 1);
    // two passes of reorthogonalization keep the basis orthonormal
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
    const double bj = w.norm();
    m = j + 1;
    if (m >= k && (m % 10 == 0 || m == m_max || bj < 1e-14)) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) T(i, i) = a[i];
      for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = b[i];
      tri.compute(T);
      // residual of the k-th lowest Ritz pair is |beta_m * s(m-1, k)|
      conv_resid = 0.0;
      for (int i = 0; i < k; ++i)
        conv_resid = std::max(conv_resid, std::abs(bj * tri.eigenvectors()(m - 1, i)));
      if (conv_resid < 1e-11 || bj < 1e-14) break;
    }
    if (j + 1 < m_max) {
      if (bj < 1e-14) {  // invariant subspace hit; restart with a fresh vector
        for (int i = 0; i < n; ++i) w[i] = cd(nd(rng), nd(rng));
        w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
        w.normalize();
        b.push_back(0.0);
      } else {
        b.push_back(bj);
        w /= bj;
      }
      V.col(j + 1) = w;
    }
  }
  if (conv_resid > 1e-9)
    throw NumericalError("Lanczos did not converge: residual " +
                         std::to_string(conv_resid) + " after " +
                         std::to_string(m) + " iterations");
  SpectrumResult r;
  r.eigenvalues.assign(tri.eigenvalues().data(), tri.eigenvalues().data() + k);
  if (want_vectors) {
    r.eigenvectors = V.leftCols(m) * tri.eigenvectors().leftCols(k);
  }
  return r;
}

}  // namespace

SpectrumResult diagonalize(const SparseHermitianOperator& H, DiagonalizeMode mode,
                           bool want_vectors) {
  if (mode.kind == DiagonalizeMode::Full) {
    if (H.dim > kDenseCeiling)
      throw std::invalid_argument("dense solve limited to dim <= " +
                                  std::to_string(kDenseCeiling) + "; use LowestK");
    return zheevd_solve(Eigen::MatrixXcd(H.mat), want_vectors);
  }
  return lanczos_lowest(H, mode.k, want_vectors);
}

SpectrumResult diagonalize_dense(const Eigen::MatrixXcd& H, bool want_vectors) {
  return zheevd_solve(H, want_vectors);
}

}  // namespace lpp
