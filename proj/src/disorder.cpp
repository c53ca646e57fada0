#include "lpp/disorder.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "lpp/eigen_solver.hpp"

namespace lpp {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t bits) {
  // 53-bit mantissa, strictly inside (0, 1)
  return ((bits >> 11) + 0.5) * 0x1.0p-53;
}

// one independent standard normal per (seed, realization, site)
double gaussian_at(std::uint64_t seed, std::uint64_t k, std::uint64_t site) {
  const std::uint64_t base = splitmix64(splitmix64(seed) ^ (k + 1));
  const std::uint64_t u = splitmix64(base ^ (2 * site + 2));
  const std::uint64_t v = splitmix64(base ^ (2 * site + 3));
  const double r = std::sqrt(-2.0 * std::log(uniform01(u)));
  return r * std::cos(2.0 * pi * uniform01(v));
}

void run_indexed(int n_jobs, int threads, const std::function<void(int)>& job) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (int k = 0; k < n_jobs; ++k) job(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < std::min(threads, n_jobs); ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int k = next.fetch_add(1);
        if (k >= n_jobs) return;
        try {
          job(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<double> sample_disorder(const DisorderSpec& spec, int n_sites, int k) {
  spec.validate();
  if (k < 0 || k >= spec.n_realizations)
    throw std::invalid_argument("sample_disorder: realization index out of range");
  std::vector<double> out(n_sites);
  for (int i = 0; i < n_sites; ++i)
    out[i] = spec.delta_omega_p * gaussian_at(spec.seed, static_cast<std::uint64_t>(k),
                                              static_cast<std::uint64_t>(i));
  return out;
}

namespace {

// resolvent diagonal through the eigenbasis plus Woodbury correction for the
// non-Hermitian -i gamma_e/2 shift restricted to the emitter rows
Eigen::VectorXd spectrum_from_eigenbasis(const Eigen::VectorXd& evals,
                                         const Eigen::MatrixXcd& emitter_rows,
                                         int emitter_index,
                                         const std::vector<double>& omega_grid,
                                         double gamma_e) {
  const int n = static_cast<int>(emitter_rows.rows());
  const double kappa = 0.5 * gamma_e;
  Eigen::VectorXd s(omega_grid.size());
  const int dim = static_cast<int>(evals.size());
  Eigen::VectorXcd weights(dim);
  for (size_t w = 0; w < omega_grid.size(); ++w) {
    const double omega = omega_grid[w];
    // B = V_E diag(1/(lambda - omega)) V_E^dagger
    Eigen::MatrixXcd b(n, n);
    for (int q = 0; q < dim; ++q) weights(q) = 1.0 / cd(evals(q) - omega, 0.0);
    b.noalias() = emitter_rows * weights.asDiagonal() * emitter_rows.adjoint();
    if (n == 1) {
      const cd r = b(0, 0);
      s(w) = std::norm(r / (1.0 - cd(0.0, kappa) * r));
    } else {
      // [ (A - i kappa E E^+)^{-1} ]_EE = B - B ((i/kappa) I + B)^{-1} B
      Eigen::MatrixXcd m = b;
      m.diagonal().array() += cd(0.0, 1.0 / kappa);
      Eigen::MatrixXcd corr = m.partialPivLu().solve(b);
      Eigen::MatrixXcd block = b - b * corr;
      s(w) = std::norm(block(emitter_index, emitter_index));
    }
  }
  return s;
}

}  // namespace

Eigen::VectorXd lattice_excitation_spectrum(const SparseHermitianOperator& H,
                                            const LatticeSpec& spec,
                                            const EmitterSet& emitters, int emitter_index,
                                            const std::vector<double>& omega_grid) {
  if (emitters.gamma_e <= 0.0)
    throw std::invalid_argument("excitation spectrum requires gamma_e > 0");
  const auto A = coupled_hamiltonian(H, spec, emitters);
  const int dim = static_cast<int>(A.rows());
  if (dim > kDenseCeiling)
    throw NumericalError("lattice_excitation_spectrum: dimension exceeds dense ceiling");
  auto eig = diagonalize_dense(Eigen::MatrixXcd(A), true);
  const int n = emitters.count();
  Eigen::MatrixXcd emitter_rows(n, dim);
  for (int e = 0; e < n; ++e) emitter_rows.row(e) = eig.eigenvectors->row(e);
  const Eigen::VectorXd evals =
      Eigen::Map<const Eigen::VectorXd>(eig.eigenvalues.data(), dim);
  return spectrum_from_eigenbasis(evals, emitter_rows, emitter_index, omega_grid,
                                  emitters.gamma_e);
}

EnsembleResult averaged_excitation_spectrum(const LatticeSpec& spec, const Gauge& gauge,
                                            const EmitterSet& emitters,
                                            const DisorderSpec& disorder,
                                            const std::vector<double>& omega_grid,
                                            int emitter_index, bool keep_realizations,
                                            int threads) {
  disorder.validate();
  emitters.validate(spec);
  const int n_dis = disorder.n_realizations;
  std::vector<Eigen::VectorXd> per_k(n_dis);
  run_indexed(n_dis, threads, [&](int k) {
    const auto offsets = sample_disorder(disorder, spec.sites(), k);
    const auto H = build_hamiltonian(spec, gauge, &offsets);
    per_k[k] = lattice_excitation_spectrum(H, spec, emitters, emitter_index, omega_grid);
  });

  EnsembleResult out;
  out.count = n_dis;
  out.mean = Eigen::MatrixXd::Zero(omega_grid.size(), 1);
  for (int k = 0; k < n_dis; ++k) out.mean.col(0) += per_k[k];
  out.mean /= n_dis;
  if (keep_realizations)
    for (int k = 0; k < n_dis; ++k) out.realizations.push_back(per_k[k]);
  return out;
}

EnsembleResult averaged_population(const LatticeSpec& spec, const Gauge& gauge,
                                   const EmitterSet& emitters,
                                   const DissipationProfile& dissipation,
                                   const DisorderSpec& disorder,
                                   const std::vector<double>& t_grid, int initial_emitter,
                                   const EvolveOptions& opts, bool keep_realizations,
                                   int threads) {
  disorder.validate();
  emitters.validate(spec);
  const int n = emitters.count();
  const int n_dis = disorder.n_realizations;
  const int nt = static_cast<int>(t_grid.size());

  std::vector<Eigen::MatrixXcd> amps(n_dis);
  run_indexed(n_dis, threads, [&](int k) {
    const auto offsets = sample_disorder(disorder, spec.sites(), k);
    const auto H = build_hamiltonian(spec, gauge, &offsets);
    const auto initial =
        SingleExcitationState::excited_emitter(initial_emitter, n, spec.sites());
    const auto traj =
        evolve_single_excitation(H, spec, emitters, dissipation, initial, t_grid, opts);
    amps[k] = traj.emitter_amplitudes;
  });

  Eigen::MatrixXcd coherent = Eigen::MatrixXcd::Zero(nt, n);
  Eigen::MatrixXd incoherent = Eigen::MatrixXd::Zero(nt, n);
  EnsembleResult out;
  for (int k = 0; k < n_dis; ++k) {
    coherent += amps[k];
    incoherent += amps[k].cwiseAbs2();
    if (keep_realizations) out.realizations.push_back(amps[k].cwiseAbs2());
  }
  coherent /= n_dis;
  out.count = n_dis;
  out.mean = coherent.cwiseAbs2();
  out.mean_incoherent = incoherent / n_dis;
  return out;
}

double window_max(const std::vector<double>& times, const Eigen::VectorXd& values,
                  double t_lo, double t_hi) {
  if (static_cast<Eigen::Index>(times.size()) != values.size())
    throw std::invalid_argument("window_max: size mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < times.size(); ++i)
    if (times[i] >= t_lo && times[i] <= t_hi) best = std::max(best, values(i));
  if (!std::isfinite(best)) throw std::invalid_argument("window_max: empty window");
  return best;
}

}  // namespace lpp
