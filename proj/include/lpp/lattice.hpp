#pragma once

#include <Eigen/SparseCore>

#include "lpp/types.hpp"

namespace lpp {

// Complex Hermitian operator in sparse storage. Construction closes the
// Hermitian conjugate automatically, so only one triangle needs to be fed.
struct SparseHermitianOperator {
  int dim = 0;
  Eigen::SparseMatrix<cd> mat;

  static SparseHermitianOperator from_upper(
      int dim, const std::vector<Eigen::Triplet<cd>>& upper);
  double hermiticity_defect() const;
};

// Line integral of the vector potential along the bond r_j -> r_i, in units
// where the flux per plaquette is 2*pi*alpha. Exact for both gauges since A
// is linear in position. Arguments are site coordinates in units of l0;
// `origin` is the symmetric-gauge coordinate origin.
double peierls_phase(const Gauge& gauge, double alpha, Vec2 r_i, Vec2 r_j,
                     Vec2 origin);

// Convenience overload resolving origin from the spec and checking that the
// two sites are nearest neighbors.
double peierls_phase(const LatticeSpec& spec, const Gauge& gauge,
                     std::array<int, 2> site_i, std::array<int, 2> site_j);

// Tight-binding Hamiltonian on the open-boundary nx*ny lattice: diagonal
// omega_p (+ optional per-site shift), off-diagonal -J e^{i phi_ij} on
// nearest-neighbor bonds.
SparseHermitianOperator build_hamiltonian(const LatticeSpec& spec, const Gauge& gauge,
                                          const std::vector<double>* onsite_shift = nullptr);

// Flux through every interior plaquette (lower-left corners in row-major
// order), each the sum of four bond phases. All must equal 2*pi*alpha.
std::vector<double> plaquette_flux_check(const LatticeSpec& spec, const Gauge& gauge);

}  // namespace lpp
