#pragma once

#include "lpp/eigen_solver.hpp"

namespace lpp {

// Lorentzian-broadened projected density of states at site r_e.
// rho(r_e, w) = sum_l |f_l(r_e)|^2 * (broadening/pi) / ((w - w_l)^2 + broadening^2)
std::vector<double> projected_dos(const SpectrumResult& spectrum, int site_index,
                                  const std::vector<double>& omega_grid,
                                  double broadening);

struct ButterflyResult {
  std::vector<double> alphas;
  std::vector<std::vector<double>> eigenvalues;  // one sorted set per alpha
};

// Spectra over a flux sweep. Uses dense solves below the dense ceiling, the
// iterative path above it (k lowest).
ButterflyResult butterfly_scan(LatticeSpec spec, const Gauge& gauge,
                               const std::vector<double>& alpha_list,
                               int lowest_k = 0, int threads = 1);

// Center of the near-degenerate bulk cluster closest to `guess`: the median
// of eigenvalues within the window, then the mean of those within a tight
// band around that median. Ignores sparse in-gap edge states.
double plateau_center(const std::vector<double>& eigenvalues, double guess,
                      double window, double tight = 0.0);

}  // namespace lpp
