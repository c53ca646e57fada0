#pragma once

#include "lpp/types.hpp"

namespace lpp {

struct LandauIndex {
  int ell = 0;  // Landau level
  int k = 0;    // degeneracy label
};

enum class CorrectionOrder { Harmonic, Quartic };

struct LandauSpectrumParams {
  double omega_b = 0.0;  // band edge omega_p - 4J
  double omega_c = 0.0;  // cyclotron spacing 4*pi*alpha*J
  CorrectionOrder order = CorrectionOrder::Quartic;

  static LandauSpectrumParams from_lattice(const LatticeSpec& spec,
                                           CorrectionOrder order = CorrectionOrder::Quartic) {
    return {spec.omega_p - 4.0 * spec.J, 4.0 * pi * spec.alpha * spec.J, order};
  }
};

// Generalized Laguerre polynomial L_ell^m(x) by the stable upward recurrence
// in the degree.
double generalized_laguerre(int ell, int m, double x);

// Orbital of level ell, degeneracy label k, evaluated at r (units of l0),
// normalized so that the sum of |Phi|^2 over lattice sites is 1.
cd landau_orbital(LandauIndex idx, Vec2 r, const LatticeSpec& spec);

// Flat-band frequency of level ell. Harmonic: omega_b + omega_c*(ell + 1/2).
// Quartic adds the lattice correction -(omega_c^2/32J)*(2 ell^2 + 2 ell + 1).
double landau_frequency(int ell, const LandauSpectrumParams& params, double J);

// Gauge phase of the projected propagator between two points,
// theta_ij = -(x_i y_j - x_j y_i) / (2 l_B^2). Coordinates are relative to
// the gauge origin.
double gauge_phase_theta(Vec2 r_i, Vec2 r_j, double l_B);

struct GreensProjection {
  int ell = 0;
  LatticeSpec spec;  // carries alpha, l0, gauge origin

  double magnetic_length() const { return spec.magnetic_length(); }
};

// Single-level propagator G_ell(r_i, r_j) = sqrt(alpha) e^{i theta_ij}
// Phi_{ell,ell}(r_i - r_j). Positions in lattice coordinates (units of l0);
// the gauge origin of the spec is subtracted internally.
cd greens_projected(const GreensProjection& proj, Vec2 r_i, Vec2 r_j);

// Landau-sum propagator G(t) = sum_{ell <= ell_max} G_ell e^{-i omega_ell t}
// with frequencies measured in the frame rotating at omega_p.
cd full_greens(double t, Vec2 r_i, Vec2 r_j, const LatticeSpec& spec, int ell_max,
               CorrectionOrder order = CorrectionOrder::Quartic);

// Default degeneracy-label cutoff for sums over k at a given level.
inline int degeneracy_cutoff(const LatticeSpec& spec, int ell) {
  return static_cast<int>(std::ceil(spec.alpha * spec.sites())) + 4 * ell;
}

}  // namespace lpp
