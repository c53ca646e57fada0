#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lpp/dynamics.hpp"
#include "lpp/lattice.hpp"
#include "lpp/types.hpp"

namespace lpp {

// Gaussian on-site frequency disorder, fully determined by (seed, k, site).
struct DisorderSpec {
  double delta_omega_p = 0.0;
  std::uint64_t seed = 0;
  int n_realizations = 1;

  void validate() const {
    if (delta_omega_p < 0.0) throw std::invalid_argument("disorder width must be >= 0");
    if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
  }
};

// Mean observable over the ensemble: rows follow the sampling grid (omega or
// time), columns are channels (one spectrum, or one column per emitter).
struct EnsembleResult {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd mean_incoherent;             // average of |c|^2 (populations only)
  std::vector<Eigen::MatrixXd> realizations;   // optional per-realization storage
  int count = 0;
};

// Per-site offsets of realization k; deterministic counter-based stream
// (splitmix64-hashed keys, Box-Muller transform), i.i.d. N(0, delta^2).
std::vector<double> sample_disorder(const DisorderSpec& spec, int n_sites, int k);

// Disorder-averaged emitter excitation spectrum on the full lattice: for each
// realization the resolvent of the coupled Hamiltonian is evaluated through
// its eigenbasis and a Woodbury correction for the -i gamma_e/2 emitter
// shift; the mean is accumulated in realization order (bit-stable under
// threading).
EnsembleResult averaged_excitation_spectrum(const LatticeSpec& spec, const Gauge& gauge,
                                            const EmitterSet& emitters,
                                            const DisorderSpec& disorder,
                                            const std::vector<double>& omega_grid,
                                            int emitter_index = 0,
                                            bool keep_realizations = false,
                                            int threads = 1);

// Single-realization spectrum used by the ensemble (exposed for tests):
// S(omega) = |[(H - omega - i gamma_e/2 P_emitters)^{-1}]_{nn}|^2 with H the
// coupled Hermitian Hamiltonian in the omega_p frame.
Eigen::VectorXd lattice_excitation_spectrum(const SparseHermitianOperator& H,
                                            const LatticeSpec& spec,
                                            const EmitterSet& emitters, int emitter_index,
                                            const std::vector<double>& omega_grid);

// Disorder-averaged population per the coherent-average definition
// p_bar(t) = |mean_k c^k(t)|^2 (amplitudes averaged first). mean_incoherent
// carries the naive average of |c|^2 for comparison.
EnsembleResult averaged_population(const LatticeSpec& spec, const Gauge& gauge,
                                   const EmitterSet& emitters,
                                   const DissipationProfile& dissipation,
                                   const DisorderSpec& disorder,
                                   const std::vector<double>& t_grid,
                                   int initial_emitter = 0,
                                   const EvolveOptions& opts = {},
                                   bool keep_realizations = false, int threads = 1);

// Largest value of a sampled curve inside [t_lo, t_hi].
double window_max(const std::vector<double>& times, const Eigen::VectorXd& values,
                  double t_lo, double t_hi);

}  // namespace lpp
