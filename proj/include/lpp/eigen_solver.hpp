#pragma once

#include <Eigen/Dense>
#include <optional>

#include "lpp/lattice.hpp"

namespace lpp {

struct SpectrumResult {
  std::vector<double> eigenvalues;                 // sorted ascending
  std::optional<Eigen::MatrixXcd> eigenvectors;    // columns match eigenvalues
};

struct DiagonalizeMode {
  enum Kind { Full, LowestK } kind = Full;
  int k = 0;  // used by LowestK
  static DiagonalizeMode full() { return {Full, 0}; }
  static DiagonalizeMode lowest(int k) { return {LowestK, k}; }
};

// Dense ceiling for Full mode; larger problems must use LowestK.
inline constexpr int kDenseCeiling = 4096;

// Full: LAPACK divide-and-conquer on the dense matrix.
// LowestK: Lanczos with full reorthogonalization; returns the k algebraically
// smallest converged Ritz pairs. Near-degenerate clusters (flat Landau
// plateaus) converge as a group only once the Krylov space resolves their
// internal splittings, so tight clusters may need dim-scale iteration counts;
// prefer Full for those spectra.
SpectrumResult diagonalize(const SparseHermitianOperator& H, DiagonalizeMode mode,
                           bool want_vectors = true);

// Dense Hermitian eigensolve used directly by the few-level models.
SpectrumResult diagonalize_dense(const Eigen::MatrixXcd& H, bool want_vectors = true);

}  // namespace lpp
