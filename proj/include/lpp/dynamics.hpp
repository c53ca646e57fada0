#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lpp/lattice.hpp"
#include "lpp/types.hpp"

namespace lpp {

// Amplitudes of the single-excitation sector: c over emitters, phi over sites.
struct SingleExcitationState {
  Eigen::VectorXcd c;
  Eigen::VectorXcd phi;
  double t = 0.0;

  double norm2() const { return c.squaredNorm() + phi.squaredNorm(); }

  static SingleExcitationState excited_emitter(int n, int n_emitters, int n_sites) {
    SingleExcitationState s;
    s.c = Eigen::VectorXcd::Zero(n_emitters);
    s.phi = Eigen::VectorXcd::Zero(n_sites);
    s.c(n) = 1.0;
    return s;
  }
};

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXcd emitter_amplitudes;  // times.size() x N, rotating frame
  std::vector<double> photon_norm;      // sum |phi|^2 per time
  std::vector<SingleExcitationState> snapshots;

  Eigen::VectorXd population(int n) const {
    return emitter_amplitudes.col(n).cwiseAbs2();
  }
};

enum class EvolveMethod { Rk4, Eigenbasis };

struct EvolveOptions {
  EvolveMethod method = EvolveMethod::Rk4;
  double step_factor = 0.02;             // h <= step_factor / frequency scale
  std::vector<double> snapshot_times;    // full-state dumps at nearest grid times
};

// Hermitian part of the coupled emitter-photon Hamiltonian in the frame
// rotating at omega_p, ordered [c_1..c_N, phi_1..phi_M].
Eigen::SparseMatrix<cd> coupled_hamiltonian(const SparseHermitianOperator& H,
                                            const LatticeSpec& spec,
                                            const EmitterSet& emitters);

// Integrates i d/dt psi = (H_coupled - i Gamma/2) psi on t_grid, where Gamma
// holds gamma_e on emitter entries and the dissipation profile on sites.
// Rk4 subdivides each grid interval; Eigenbasis requires uniform loss
// (gamma_e equal to the site-independent photon rate) and diagonalizes once.
Trajectory evolve_single_excitation(const SparseHermitianOperator& H,
                                    const LatticeSpec& spec,
                                    const EmitterSet& emitters,
                                    const DissipationProfile& dissipation,
                                    const SingleExcitationState& initial,
                                    const std::vector<double>& t_grid,
                                    const EvolveOptions& opts = {});

// Volterra integro-differential evolution of a single emitter amplitude,
// dc/dt = -g^2 int_0^t G(t-s) e^{i(omega_e - omega_p)(t-s)} c(s) ds,
// with G(tau) supplied in the omega_p frame (see continuum::full_greens).
// Trapezoidal product integration on a uniform grid; c(0) = 1.
Eigen::VectorXcd memory_kernel_evolution(const EmitterSet& emitters,
                                         const std::function<cd(double)>& greens_kernel,
                                         const std::vector<double>& t_grid,
                                         double omega_p = 0.0);

// Vacuum Rabi frequency of the flat-band coupling, sqrt(alpha) * g.
double rabi_frequency(double alpha, double g);

// Photon field emitted by a resonant flat-band emitter,
// phi(r_i, t) = -i sin(Omega t)/sqrt(alpha) * G_ell(r_i, r_e).
Eigen::VectorXcd emitted_photon_profile(int ell, Vec2 r_e, double t,
                                        const LatticeSpec& spec, double g);

// Expectation of the bond-current operator in a photon state, averaged over
// the forward and backward bonds of every site (one-sided at the boundary).
// Row i holds (jx, jy) at site i.
Eigen::MatrixXd photon_current(const Eigen::VectorXcd& phi, const LatticeSpec& spec,
                               const Gauge& gauge);

// Markovian decay rate of a resonant mid-band emitter at alpha = 0, g^2/(2J).
double markov_decay_rate(double g, double J);

// --- small fitting helpers used by tests and the CLI ---

// Time of the first local minimum, refined by a parabola through the three
// samples around it. Throws if no interior minimum exists.
double first_minimum_time(const std::vector<double>& times, const Eigen::VectorXd& values);

// Least-squares exponential rate: fits ln(values) = a - rate * t.
double fit_exponential_rate(const std::vector<double>& times, const Eigen::VectorXd& values);

// Uniform grid helper: n+1 points covering [0, t_max].
std::vector<double> uniform_grid(double t_max, int n);

}  // namespace lpp
