#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "lpp/continuum.hpp"
#include "lpp/types.hpp"

namespace lpp {

// Effective model of N emitters coupled to the N orthonormal photon modes
// built from level-ell orbitals at the emitter positions. K K^dagger equals
// the Gram matrix of projected propagator entries.
struct LppModel {
  int ell = 0;
  int n = 0;  // emitter / mode count
  double alpha = 0.0;
  double g = 0.0;
  double omega_e = 0.0;
  double omega_ell = 0.0;
  double gamma_e = 0.0;
  double gamma_p = 0.0;

  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd K;  // principal PSD square root of gram

  // eigen-decomposition of gram, kept for mode construction
  Eigen::VectorXd gram_eigenvalues;
  Eigen::MatrixXcd gram_eigenvectors;
  int rank = 0;
  std::vector<bool> mode_usable;  // false when the mode leaks into the null space

  // positions used to build the Gram; empty for injected Grams
  std::vector<Vec2> positions;
  LatticeSpec spec;
};

// Gram matrix G_nm = G_ell(r_e^n, r_e^m) from the projected propagator.
// Coincident emitters are allowed (rank-deficient result).
Eigen::MatrixXcd gram_matrix(const EmitterSet& emitters, int ell, const LatticeSpec& spec);

// Principal PSD square root of a Hermitian PSD matrix. Eigenvalues below
// 1e-10 * max(diag) are truncated to zero; an eigenvalue below -1e-12 is a
// PSD failure and throws NumericalError.
Eigen::MatrixXcd coupling_matrix_K(const Eigen::MatrixXcd& gram);

// Full model from emitters on a lattice; omega_ell from the quartic formula.
LppModel make_lpp_model(const EmitterSet& emitters, int ell, const LatticeSpec& spec,
                        CorrectionOrder order = CorrectionOrder::Quartic,
                        double gamma_p = 0.0);

// Model from an externally supplied Gram (analytic geometries, closed-form
// cross-checks). positions may be empty.
LppModel lpp_model_from_gram(const Eigen::MatrixXcd& gram, double alpha, double g,
                             double omega_e, double omega_ell, int ell,
                             double gamma_e = 0.0, double gamma_p = 0.0);

// Analytic Gram of three equidistant emitters in the centroid gauge:
// G = alpha (I + f M), M cyclic with phases e^{i theta/3},
// f = e^{-(d/l_B)^2/4} L_ell((d/l_B)^2/2).
Eigen::MatrixXcd equilateral_gram(double alpha, double d_over_lB, int ell,
                                  double theta_triangle);

// Sum of the three pairwise gauge phases around a triangle; equals minus the
// signed area divided by l_B^2 (the effective flux theta_triangle).
double triangle_phase(Vec2 r1, Vec2 r2, Vec2 r3, double l_B);

// Basis bookkeeping for the one- and two-excitation sectors.
// Sector 1: N spin states then N boson states.
// Sector 2: spin pairs (a<b), then spin-boson (p,k) row-major, then boson
// pairs (k<=m), all lexicographic.
struct FewExcitationBasis {
  int sector = 1;
  int n = 0;

  int dim() const {
    if (sector == 1) return 2 * n;
    return n * (n - 1) / 2 + n * n + n * (n + 1) / 2;
  }
  int spin_index(int a) const { return a; }
  int boson_index(int k) const { return n + k; }
  int spin_pair_index(int a, int b) const {  // a < b
    return a * n - a * (a + 1) / 2 + (b - a - 1);
  }
  int spin_boson_index(int p, int k) const {
    return n * (n - 1) / 2 + p * n + k;
  }
  int boson_pair_index(int k, int m) const {  // k <= m
    return n * (n - 1) / 2 + n * n + k * n - k * (k - 1) / 2 + (m - k);
  }
};

// Hermitian matrix of the effective Hamiltonian restricted to the sector.
Eigen::MatrixXcd build_lpp_hamiltonian(const LppModel& model, int sector);

// Complex eigenvalues of the sector Hamiltonian; with_losses subtracts
// i gamma_e/2 on spin occupation and i gamma_p/2 on boson occupation.
struct LppSpectrum {
  std::vector<cd> eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};
LppSpectrum lpp_spectrum(const LppModel& model, int sector, bool with_losses = false);

// Roots of lambda^3 - 3 lambda - 2 cos(theta) = 0, sorted ascending:
// lambda_nu = 2 cos((theta + 2 pi nu)/3).
std::array<double, 3> triangle_eigenvalues(double theta_triangle);

// Closed-form one-excitation resonances of three equidistant emitters,
// omega_nu = omega_e - i(gamma_e+gamma_p)/4
//            +/- sqrt(Omega^2 (1 + Lambda_nu) - (gamma_e-gamma_p)^2/16),
// Lambda_nu = f lambda_nu. Lossless non-PSD geometries yield complex pairs.
std::array<cd, 6> lpp_closed_form_spectrum(double d_over_lB, int ell,
                                           double theta_triangle, double omega_rabi,
                                           double omega_e, double gamma_e = 0.0,
                                           double gamma_p = 0.0);

// Emitter excitation spectrum on an omega grid: squared modulus of the
// resolvent matrix element (H - omega - i gamma_e/2 P_spin)^{-1} at the
// emitter's own entry, solved by LU factorization per omega. H must be the
// sector-1 matrix; the first `n` basis states are the spin states.
Eigen::VectorXd excitation_spectrum(const Eigen::MatrixXcd& H_sector1, int n_spins,
                                    int emitter, const std::vector<double>& omega_grid,
                                    double gamma_e);

// Coefficients of the orthonormal mode operators over positions:
// u_n(r) = sum_m conj(K^{-1})_{nm} G_ell(r, r_e^m). Throws on rank-deficient
// models (modes flagged unusable).
Eigen::MatrixXcd mode_profiles(const LppModel& model, const std::vector<Vec2>& points);

// Normalized two-photon correlation C(r_i, r_ref) of a sector-2 state over
// the given points, per the Hanbury Brown-Twiss definition with the
// reference-point photon density in the denominator.
Eigen::VectorXd two_photon_correlation(const Eigen::VectorXcd& state, const LppModel& model,
                                       const std::vector<Vec2>& points, Vec2 r_ref);

// Largest deviation of the lattice-summed mode overlaps from the identity,
// max_nm |sum_i beta_n(r_i) conj(beta_m(r_i)) - delta_nm|.
double lpp_mode_commutator_check(const LppModel& model);

}  // namespace lpp
