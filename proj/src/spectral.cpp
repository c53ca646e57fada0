#include "lpp/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace lpp {

std::vector<double> projected_dos(const SpectrumResult& spectrum, int site_index,
                                  const std::vector<double>& omega_grid,
                                  double broadening) {
  if (!spectrum.eigenvectors)
    throw std::invalid_argument("projected_dos needs eigenvectors");
  if (broadening <= 0.0) throw std::invalid_argument("broadening must be positive");
  const auto& V = *spectrum.eigenvectors;
  if (site_index < 0 || site_index >= V.rows())
    throw std::invalid_argument("site index outside lattice");
  std::vector<double> weights(spectrum.eigenvalues.size());
  for (size_t l = 0; l < weights.size(); ++l)
    weights[l] = std::norm(V(site_index, static_cast<int>(l)));
  std::vector<double> rho(omega_grid.size(), 0.0);
  for (size_t iw = 0; iw < omega_grid.size(); ++iw) {
    double s = 0.0;
    for (size_t l = 0; l < weights.size(); ++l) {
      const double d = omega_grid[iw] - spectrum.eigenvalues[l];
      s += weights[l] * broadening / (pi * (d * d + broadening * broadening));
    }
    rho[iw] = s;
  }
  return rho;
}

ButterflyResult butterfly_scan(LatticeSpec spec, const Gauge& gauge,
                               const std::vector<double>& alpha_list,
                               int lowest_k, int threads) {
  for (double a : alpha_list)
    if (a < 0.0 || a >= 1.0) throw std::invalid_argument("alpha must lie in [0, 1)");
  ButterflyResult out;
  out.alphas = alpha_list;
  out.eigenvalues.resize(alpha_list.size());
  auto solve_one = [&](size_t i) {
    LatticeSpec s = spec;
    s.alpha = alpha_list[i];
    const auto H = build_hamiltonian(s, gauge);
    const auto mode = (lowest_k > 0 && lowest_k < H.dim)
                          ? DiagonalizeMode::lowest(lowest_k)
                          : DiagonalizeMode::full();
    if (mode.kind == DiagonalizeMode::Full && H.dim > kDenseCeiling)
      throw std::invalid_argument("lattice too large for a full butterfly; pass lowest_k");
    out.eigenvalues[i] = diagonalize(H, mode, false).eigenvalues;
  };
  const int nthreads = std::max(1, std::min<int>(threads, alpha_list.size()));
  if (nthreads == 1) {
    for (size_t i = 0; i < alpha_list.size(); ++i) solve_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < alpha_list.size(); i = next.fetch_add(1))
          solve_one(i);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

double plateau_center(const std::vector<double>& eigenvalues, double guess,
                      double window, double tight) {
  std::vector<double> in;
  for (double e : eigenvalues)
    if (std::abs(e - guess) < window) in.push_back(e);
  if (in.empty()) throw std::invalid_argument("no eigenvalues near the plateau guess");
  std::sort(in.begin(), in.end());
  const double med = in[in.size() / 2];
  if (tight <= 0.0) tight = 0.2 * window;
  double sum = 0.0;
  int cnt = 0;
  for (double e : in)
    if (std::abs(e - med) < tight) {
      sum += e;
      ++cnt;
    }
  return sum / cnt;
}

}  // namespace lpp
