#include "lpp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lpp/continuum.hpp"
#include "lpp/eigen_solver.hpp"

namespace lpp {

Eigen::SparseMatrix<cd> coupled_hamiltonian(const SparseHermitianOperator& H,
                                            const LatticeSpec& spec,
                                            const EmitterSet& emitters) {
  emitters.validate(spec);
  const int n = emitters.count();
  const int m = spec.sites();
  if (H.dim != m) throw std::invalid_argument("coupled_hamiltonian: lattice dimension mismatch");

  std::vector<Eigen::Triplet<cd>> trips;
  trips.reserve(H.mat.nonZeros() + 3 * n);
  const double detuning = emitters.omega_e - spec.omega_p;
  for (int k = 0; k < n; ++k) {
    if (detuning != 0.0) trips.emplace_back(k, k, cd(detuning, 0.0));
    const int site = spec.site_index(emitters.positions[k][0], emitters.positions[k][1]);
    trips.emplace_back(k, n + site, cd(emitters.g, 0.0));
    trips.emplace_back(n + site, k, cd(emitters.g, 0.0));
  }
  for (int col = 0; col < H.mat.outerSize(); ++col)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(H.mat, col); it; ++it) {
      cd v = it.value();
      if (it.row() == it.col()) v -= spec.omega_p;  // rotating frame
      if (v != cd(0.0, 0.0)) trips.emplace_back(n + it.row(), n + it.col(), v);
    }
  Eigen::SparseMatrix<cd> A(n + m, n + m);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

namespace {

Eigen::VectorXd loss_vector(const LatticeSpec& spec, const EmitterSet& emitters,
                            const DissipationProfile& dissipation) {
  const int n = emitters.count();
  const int m = spec.sites();
  Eigen::VectorXd gamma(n + m);
  gamma.head(n).setConstant(emitters.gamma_e);
  const auto site_loss = per_site_loss(spec, dissipation);
  for (int i = 0; i < m; ++i) gamma(n + i) = site_loss[i];
  return gamma;
}

// Gershgorin bound on the spectral radius of H - i Gamma/2.
double frequency_scale(const Eigen::SparseMatrix<cd>& A, const Eigen::VectorXd& gamma) {
  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(A.rows());
  for (int col = 0; col < A.outerSize(); ++col)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(A, col); it; ++it)
      row_sum(it.row()) += std::abs(it.value());
  return std::max(1e-12, row_sum.maxCoeff() + 0.5 * gamma.maxCoeff());
}

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw std::invalid_argument("time grid needs at least two points");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw std::invalid_argument("time grid must be strictly increasing");
}

struct SnapshotPlan {
  std::vector<size_t> grid_indices;  // sorted, unique
};

SnapshotPlan plan_snapshots(const std::vector<double>& t_grid,
                            const std::vector<double>& wanted) {
  SnapshotPlan plan;
  for (double tw : wanted) {
    size_t best = 0;
    double d = std::abs(t_grid[0] - tw);
    for (size_t i = 1; i < t_grid.size(); ++i)
      if (std::abs(t_grid[i] - tw) < d) { d = std::abs(t_grid[i] - tw); best = i; }
    plan.grid_indices.push_back(best);
  }
  std::sort(plan.grid_indices.begin(), plan.grid_indices.end());
  plan.grid_indices.erase(std::unique(plan.grid_indices.begin(), plan.grid_indices.end()),
                          plan.grid_indices.end());
  return plan;
}

}  // namespace

Trajectory evolve_single_excitation(const SparseHermitianOperator& H,
                                    const LatticeSpec& spec,
                                    const EmitterSet& emitters,
                                    const DissipationProfile& dissipation,
                                    const SingleExcitationState& initial,
                                    const std::vector<double>& t_grid,
                                    const EvolveOptions& opts) {
  check_grid(t_grid);
  const int n = emitters.count();
  const int m = spec.sites();
  if (initial.c.size() != n || initial.phi.size() != m)
    throw std::invalid_argument("evolve_single_excitation: initial state has wrong shape");
  const double init_norm2 = initial.norm2();
  if (init_norm2 > 1.0 + 1e-9)
    throw std::invalid_argument("evolve_single_excitation: initial norm exceeds 1");

  const auto A = coupled_hamiltonian(H, spec, emitters);
  const Eigen::VectorXd gamma = loss_vector(spec, emitters, dissipation);
  const int dim = n + m;

  Eigen::VectorXcd psi(dim);
  psi.head(n) = initial.c;
  psi.tail(m) = initial.phi;

  Trajectory out;
  out.times = t_grid;
  out.emitter_amplitudes.resize(t_grid.size(), n);
  out.photon_norm.resize(t_grid.size());
  const auto snap = plan_snapshots(t_grid, opts.snapshot_times);
  size_t next_snap = 0;

  auto record = [&](size_t idx, const Eigen::VectorXcd& v) {
    out.emitter_amplitudes.row(idx) = v.head(n).transpose();
    out.photon_norm[idx] = v.tail(m).squaredNorm();
    if (next_snap < snap.grid_indices.size() && snap.grid_indices[next_snap] == idx) {
      SingleExcitationState s;
      s.c = v.head(n);
      s.phi = v.tail(m);
      s.t = t_grid[idx];
      out.snapshots.push_back(std::move(s));
      ++next_snap;
    }
  };

  if (opts.method == EvolveMethod::Eigenbasis) {
    const double g0 = gamma(0);
    if ((gamma.array() - g0).abs().maxCoeff() > 1e-14 * std::max(1.0, std::abs(g0)))
      throw std::invalid_argument(
          "Eigenbasis propagation requires uniform loss (gamma_e = gamma_p, no absorber)");
    if (dim > kDenseCeiling)
      throw NumericalError("Eigenbasis propagation: dimension exceeds dense ceiling");
    auto full = diagonalize_dense(Eigen::MatrixXcd(A), true);
    const Eigen::MatrixXcd& V = *full.eigenvectors;
    Eigen::VectorXcd proj = V.adjoint() * psi;
    for (size_t idx = 0; idx < t_grid.size(); ++idx) {
      const double t = t_grid[idx] - t_grid[0];
      Eigen::VectorXcd phase(dim);
      for (int q = 0; q < dim; ++q)
        phase(q) = std::exp(cd(0.0, -full.eigenvalues[q] * t)) * proj(q);
      Eigen::VectorXcd v = V * phase;
      v *= std::exp(-0.5 * g0 * t);
      record(idx, v);
    }
    return out;
  }

  // RK4 with fixed substeps inside each grid interval
  const double h_max = opts.step_factor / frequency_scale(A, gamma);
  const cd minus_i(0.0, -1.0);
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  auto deriv = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& dv) {
    dv.noalias() = A * v;
    dv += cd(0.0, -0.5) * gamma.cast<cd>().cwiseProduct(v);
    dv *= minus_i;
  };

  record(0, psi);
  for (size_t idx = 1; idx < t_grid.size(); ++idx) {
    const double span = t_grid[idx] - t_grid[idx - 1];
    const int n_sub = std::max(1, static_cast<int>(std::ceil(span / h_max)));
    const double h = span / n_sub;
    for (int s = 0; s < n_sub; ++s) {
      deriv(psi, k1);
      tmp = psi + 0.5 * h * k1;
      deriv(tmp, k2);
      tmp = psi + 0.5 * h * k2;
      deriv(tmp, k3);
      tmp = psi + h * k3;
      deriv(tmp, k4);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double norm2 = psi.squaredNorm();
    if (!std::isfinite(norm2) || norm2 > init_norm2 + 1e-6) {
      std::ostringstream msg;
      msg << "integrator failure at t = " << t_grid[idx] << " (norm^2 = " << norm2 << ")";
      throw NumericalError(msg.str());
    }
    record(idx, psi);
  }
  return out;
}

Eigen::VectorXcd memory_kernel_evolution(const EmitterSet& emitters,
                                         const std::function<cd(double)>& greens_kernel,
                                         const std::vector<double>& t_grid,
                                         double omega_p) {
  check_grid(t_grid);
  const size_t n = t_grid.size();
  const double h = t_grid[1] - t_grid[0];
  for (size_t i = 1; i < n; ++i)
    if (std::abs((t_grid[i] - t_grid[i - 1]) - h) > 1e-9 * std::max(1.0, h))
      throw std::invalid_argument("memory_kernel_evolution: grid must be uniform");

  const double g = emitters.g;
  const double detuning = emitters.omega_e - omega_p;
  std::vector<cd> kernel(n);
  for (size_t j = 0; j < n; ++j) {
    const double tau = t_grid[j] - t_grid[0];
    kernel[j] = g * g * greens_kernel(tau) * std::exp(cd(0.0, detuning * tau));
  }

  // dc/dt = -F(t), F(t_k) = h * [kernel_k c_0 / 2 + sum_{j=1}^{k-1} kernel_{k-j} c_j
  //                              + kernel_0 c_k / 2];
  // trapezoidal step c_{k+1} = c_k - h/2 (F_k + F_{k+1}) solved for c_{k+1}.
  Eigen::VectorXcd c(n);
  c(0) = 1.0;
  std::vector<cd> F(n, cd(0.0, 0.0));
  const cd denom = 1.0 + 0.25 * h * h * kernel[0];
  for (size_t k = 0; k + 1 < n; ++k) {
    cd partial = 0.5 * kernel[k + 1] * c(0);
    for (size_t j = 1; j <= k; ++j) partial += kernel[k + 1 - j] * c(j);
    partial *= h;
    c(k + 1) = (c(k) - 0.5 * h * (F[k] + partial)) / denom;
    F[k + 1] = partial + 0.5 * h * kernel[0] * c(k + 1);
  }
  return c;
}

double rabi_frequency(double alpha, double g) {
  if (alpha < 0.0) throw std::invalid_argument("rabi_frequency: alpha must be >= 0");
  return std::sqrt(alpha) * g;
}

Eigen::VectorXcd emitted_photon_profile(int ell, Vec2 r_e, double t,
                                        const LatticeSpec& spec, double g) {
  if (!(spec.alpha > 0.0))
    throw std::invalid_argument("emitted_photon_profile: requires alpha > 0");
  const double omega_rabi = rabi_frequency(spec.alpha, g);
  const cd pref = cd(0.0, -1.0) * std::sin(omega_rabi * t) / std::sqrt(spec.alpha);
  GreensProjection proj{ell, spec};
  Eigen::VectorXcd phi(spec.sites());
  for (int i = 0; i < spec.sites(); ++i)
    phi(i) = pref * greens_projected(proj, spec.site_position(i), r_e);
  return phi;
}

Eigen::MatrixXd photon_current(const Eigen::VectorXcd& phi, const LatticeSpec& spec,
                               const Gauge& gauge) {
  if (phi.size() != spec.sites())
    throw std::invalid_argument("photon_current: field size mismatch");
  Eigen::MatrixXd current = Eigen::MatrixXd::Zero(spec.sites(), 2);

  // current from site i to neighbor j: -2 Im[H_ij phi_i^* phi_j], with
  // H_ij = -J e^{i phase(i <- j)}
  auto bond_current = [&](int xi, int yi, int xj, int yj) {
    const int i = spec.site_index(xi, yi), j = spec.site_index(xj, yj);
    const double ph = peierls_phase(spec, gauge, {xi, yi}, {xj, yj});
    const cd h_ij = -spec.J * std::exp(cd(0.0, ph));
    return -2.0 * std::imag(h_ij * std::conj(phi(i)) * phi(j));
  };

  for (int y = 0; y < spec.ny; ++y)
    for (int x = 0; x < spec.nx; ++x) {
      const int i = spec.site_index(x, y);
      // x component
      double jx = 0.0;
      int terms = 0;
      if (x + 1 < spec.nx) { jx += bond_current(x, y, x + 1, y); ++terms; }
      if (x - 1 >= 0) { jx += -bond_current(x, y, x - 1, y); ++terms; }
      current(i, 0) = terms ? jx / terms : 0.0;
      // y component
      double jy = 0.0;
      terms = 0;
      if (y + 1 < spec.ny) { jy += bond_current(x, y, x, y + 1); ++terms; }
      if (y - 1 >= 0) { jy += -bond_current(x, y, x, y - 1); ++terms; }
      current(i, 1) = terms ? jy / terms : 0.0;
    }
  return current;
}

double markov_decay_rate(double g, double J) {
  if (J <= 0.0) throw std::invalid_argument("markov_decay_rate: J must be positive");
  return g * g / (2.0 * J);
}

double first_minimum_time(const std::vector<double>& times, const Eigen::VectorXd& values) {
  if (static_cast<Eigen::Index>(times.size()) != values.size() || times.size() < 3)
    throw std::invalid_argument("first_minimum_time: need matching arrays of >= 3 samples");
  for (size_t i = 1; i + 1 < times.size(); ++i) {
    if (values(i) <= values(i - 1) && values(i) < values(i + 1)) {
      // parabolic refinement through the three bracketing samples
      const double y0 = values(i - 1), y1 = values(i), y2 = values(i + 1);
      const double denom = y0 - 2.0 * y1 + y2;
      double shift = 0.0;
      if (std::abs(denom) > 1e-300) shift = 0.5 * (y0 - y2) / denom;
      shift = std::clamp(shift, -1.0, 1.0);
      const double h_left = times[i] - times[i - 1];
      const double h_right = times[i + 1] - times[i];
      return times[i] + shift * (shift > 0 ? h_right : h_left);
    }
  }
  throw NumericalError("first_minimum_time: no interior minimum found");
}

double fit_exponential_rate(const std::vector<double>& times, const Eigen::VectorXd& values) {
  if (static_cast<Eigen::Index>(times.size()) != values.size() || times.size() < 2)
    throw std::invalid_argument("fit_exponential_rate: need matching arrays of >= 2 samples");
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (size_t i = 0; i < times.size(); ++i) {
    if (values(i) <= 0.0) continue;  // log undefined; skip absorbed tail
    const double y = std::log(values(i));
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++n;
  }
  if (n < 2) throw NumericalError("fit_exponential_rate: too few positive samples");
  const double denom = n * stt - st * st;
  if (std::abs(denom) < 1e-300) throw NumericalError("fit_exponential_rate: degenerate grid");
  return -(n * sty - st * sy) / denom;
}

std::vector<double> uniform_grid(double t_max, int n) {
  if (n < 1 || t_max <= 0.0) throw std::invalid_argument("uniform_grid: need n >= 1, t_max > 0");
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = t_max * i / n;
  return t;
}

}  // namespace lpp
