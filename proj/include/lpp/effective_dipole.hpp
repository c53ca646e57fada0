#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lpp/continuum.hpp"
#include "lpp/types.hpp"

namespace lpp {

// Dispersive dipole-dipole couplings J~_nm = g^2 G_ell(r_n, r_m)/(omega_e -
// omega_ell) with zero diagonal. theta holds the antisymmetric gauge phases;
// G0 is the common magnitude scale of the first emitter pair (signed by the
// detuning), meaningful for equidistant geometries.
struct EffectiveCouplingMatrix {
  Eigen::MatrixXcd Jtilde;
  Eigen::MatrixXd theta;
  double G0 = 0.0;
  bool dispersive_warning = false;  // |omega_e - omega_ell| < 5 g
};

EffectiveCouplingMatrix effective_couplings(const EmitterSet& emitters, int ell,
                                            double g, double omega_e,
                                            double omega_ell_freq,
                                            const LatticeSpec& spec);

// Same construction for arbitrary continuum positions (emitter lattices with
// non-integer spacing).
EffectiveCouplingMatrix effective_couplings_at(const std::vector<Vec2>& positions,
                                               int ell, double g, double omega_e,
                                               double omega_ell_freq,
                                               const LatticeSpec& spec);

// det of the 3x3 coupling matrix; equals 2 G0^3 cos(theta_triangle) for an
// equilateral triangle, and vanishes exactly at perfect chirality.
cd chirality_determinant(const EffectiveCouplingMatrix& J);

// Hard-core excitation amplitudes over emitter sites (sector 1) or over
// site pairs a<b in lexicographic order (sector 2).
struct HardCoreState {
  int sector = 1;
  Eigen::VectorXcd amplitudes;

  static HardCoreState single(int site, int n);
  static HardCoreState pair(int a, int b, int n);
};

// Unitary evolution under H_eff = sum J~_nm sigma_+^n sigma_-^m restricted to
// the hard-core sector; returns per-emitter populations on t_grid
// (times x N matrix).
Eigen::MatrixXd evolve_hardcore(const EffectiveCouplingMatrix& J, int sector,
                                const HardCoreState& initial,
                                const std::vector<double>& t_grid);

// Closed-form amplitude magnitudes for the perfectly chiral triangle,
// |c_n(t)| = |1/3 + (2/3) cos(sqrt(3) G0 t + phi_n)|, phi_n = {0, 4pi/3,
// 2pi/3}; populations are the squares. Returns a times x 3 matrix.
Eigen::MatrixXd chiral_closed_form(double G0, const std::vector<double>& t_grid);

struct EmitterLatticeSpectrum {
  Eigen::VectorXd omega_over_Jnn;  // eigenvalues normalized to |J~| at the NN distance
  double alpha_eff = 0.0;          // alpha (d/l0)^2 for the square emitter lattice
  double j_nn = 0.0;               // the normalization scale |J~_NN|
  double spacing = 0.0;            // nearest-neighbor emitter distance
};

// Single-excitation spectrum of the all-to-all dipole Hamiltonian over an
// emitter geometry (cutoff_radius > 0 truncates couplings beyond it).
EmitterLatticeSpectrum emitter_lattice_spectrum(const std::vector<Vec2>& geometry,
                                                int ell, double g, double detuning,
                                                const LatticeSpec& spec,
                                                double cutoff_radius = 0.0);

// n_side x n_side square grid of emitter positions with spacing d, centered
// on the lattice center.
std::vector<Vec2> square_emitter_grid(int n_side, double d, const LatticeSpec& spec);

}  // namespace lpp
