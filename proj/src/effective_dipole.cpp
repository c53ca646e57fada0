#include "lpp/effective_dipole.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lpp/eigen_solver.hpp"

namespace lpp {

EffectiveCouplingMatrix effective_couplings_at(const std::vector<Vec2>& positions,
                                               int ell, double g, double omega_e,
                                               double omega_ell_freq,
                                               const LatticeSpec& spec) {
  if (positions.empty()) throw std::invalid_argument("effective_couplings: no emitters");
  const double detuning = omega_e - omega_ell_freq;
  if (detuning == 0.0)
    throw std::invalid_argument("effective_couplings: resonant emitters (division by zero)");
  const int n = static_cast<int>(positions.size());
  EffectiveCouplingMatrix out;
  out.dispersive_warning = std::abs(detuning) < 5.0 * std::abs(g);
  if (out.dispersive_warning)
    std::fprintf(stderr,
                 "warning: dispersive regime marginal, |omega_e - omega_ell| = %.3g < 5 g\n",
                 std::abs(detuning));

  const double scale = g * g / detuning;
  const double l_B = spec.magnetic_length();
  const Vec2 o = spec.gauge_origin();
  GreensProjection proj{ell, spec};
  out.Jtilde = Eigen::MatrixXcd::Zero(n, n);
  out.theta = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      out.Jtilde(a, b) = scale * greens_projected(proj, positions[a], positions[b]);
      out.theta(a, b) = gauge_phase_theta({positions[a][0] - o[0], positions[a][1] - o[1]},
                                          {positions[b][0] - o[0], positions[b][1] - o[1]},
                                          l_B);
    }
  out.Jtilde = 0.5 * (out.Jtilde + Eigen::MatrixXcd(out.Jtilde.adjoint()));
  out.G0 = (n >= 2) ? scale * std::abs(out.Jtilde(0, 1) / scale) : 0.0;
  return out;
}

EffectiveCouplingMatrix effective_couplings(const EmitterSet& emitters, int ell,
                                            double g, double omega_e,
                                            double omega_ell_freq,
                                            const LatticeSpec& spec) {
  std::vector<Vec2> positions;
  positions.reserve(emitters.count());
  for (int m = 0; m < emitters.count(); ++m)
    positions.push_back(emitters.position_of(m, spec));
  return effective_couplings_at(positions, ell, g, omega_e, omega_ell_freq, spec);
}

cd chirality_determinant(const EffectiveCouplingMatrix& J) {
  if (J.Jtilde.rows() != 3)
    throw std::invalid_argument("chirality_determinant requires exactly three emitters");
  return J.Jtilde.determinant();
}

HardCoreState HardCoreState::single(int site, int n) {
  if (site < 0 || site >= n) throw std::invalid_argument("HardCoreState: site out of range");
  HardCoreState s;
  s.sector = 1;
  s.amplitudes = Eigen::VectorXcd::Zero(n);
  s.amplitudes(site) = 1.0;
  return s;
}

HardCoreState HardCoreState::pair(int a, int b, int n) {
  if (a == b || a < 0 || b < 0 || a >= n || b >= n)
    throw std::invalid_argument("HardCoreState: invalid pair");
  if (a > b) std::swap(a, b);
  HardCoreState s;
  s.sector = 2;
  s.amplitudes = Eigen::VectorXcd::Zero(n * (n - 1) / 2);
  // lexicographic pair index
  s.amplitudes(a * n - a * (a + 1) / 2 + (b - a - 1)) = 1.0;
  return s;
}

namespace {

int pair_index(int a, int b, int n) {  // a < b
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

Eigen::MatrixXcd hardcore_hamiltonian(const Eigen::MatrixXcd& Jt, int sector) {
  const int n = static_cast<int>(Jt.rows());
  if (sector == 1) return Jt;
  const int dim = n * (n - 1) / 2;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  // H = sum_{p != q} J~_pq sigma_+^p sigma_-^q moves an excitation q -> p
  for (int c = 0; c < n; ++c)
    for (int d = c + 1; d < n; ++d) {
      const int col = pair_index(c, d, n);
      for (int q : {c, d}) {
        const int other = (q == c) ? d : c;
        for (int p = 0; p < n; ++p) {
          if (p == c || p == d) continue;
          const int row = pair_index(std::min(p, other), std::max(p, other), n);
          H(row, col) += Jt(p, q);
        }
      }
    }
  return H;
}

}  // namespace

Eigen::MatrixXd evolve_hardcore(const EffectiveCouplingMatrix& J, int sector,
                                const HardCoreState& initial,
                                const std::vector<double>& t_grid) {
  if (sector != 1 && sector != 2) throw std::invalid_argument("sector must be 1 or 2");
  if (initial.sector != sector)
    throw std::invalid_argument("initial state belongs to a different sector");
  const int n = static_cast<int>(J.Jtilde.rows());
  const Eigen::MatrixXcd H = hardcore_hamiltonian(J.Jtilde, sector);
  if (initial.amplitudes.size() != H.rows())
    throw std::invalid_argument("initial state has the wrong dimension");

  auto eig = diagonalize_dense(H, true);
  const Eigen::MatrixXcd& V = *eig.eigenvectors;
  const Eigen::VectorXcd proj = V.adjoint() * initial.amplitudes;

  Eigen::MatrixXd populations(t_grid.size(), n);
  Eigen::VectorXcd phase(H.rows()), amp(H.rows());
  for (size_t ti = 0; ti < t_grid.size(); ++ti) {
    const double t = t_grid[ti];
    for (Eigen::Index q = 0; q < H.rows(); ++q)
      phase(q) = std::exp(cd(0.0, -eig.eigenvalues[q] * t)) * proj(q);
    amp = V * phase;
    if (sector == 1) {
      populations.row(ti) = amp.cwiseAbs2().transpose();
    } else {
      Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const double w = std::norm(amp(pair_index(a, b, n)));
          p(a) += w;
          p(b) += w;
        }
      populations.row(ti) = p.transpose();
    }
  }
  return populations;
}

Eigen::MatrixXd chiral_closed_form(double G0, const std::vector<double>& t_grid) {
  const std::array<double, 3> phi{0.0, 4.0 * pi / 3.0, 2.0 * pi / 3.0};
  Eigen::MatrixXd c(t_grid.size(), 3);
  for (size_t ti = 0; ti < t_grid.size(); ++ti)
    for (int s = 0; s < 3; ++s)
      c(ti, s) = std::abs(1.0 / 3.0 +
                          2.0 / 3.0 * std::cos(std::sqrt(3.0) * G0 * t_grid[ti] + phi[s]));
  return c;
}

EmitterLatticeSpectrum emitter_lattice_spectrum(const std::vector<Vec2>& geometry,
                                                int ell, double g, double detuning,
                                                const LatticeSpec& spec,
                                                double cutoff_radius) {
  if (geometry.size() < 2)
    throw std::invalid_argument("emitter_lattice_spectrum: need at least two emitters");
  auto J = effective_couplings_at(geometry, ell, g, detuning, 0.0, spec);

  const int n = static_cast<int>(geometry.size());
  double d_min = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double d = std::hypot(geometry[a][0] - geometry[b][0],
                                  geometry[a][1] - geometry[b][1]);
      d_min = std::min(d_min, d);
    }

  if (cutoff_radius > 0.0) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const double d = std::hypot(geometry[a][0] - geometry[b][0],
                                    geometry[a][1] - geometry[b][1]);
        if (d > cutoff_radius) J.Jtilde(a, b) = 0.0;
      }
  }

  EmitterLatticeSpectrum out;
  out.spacing = d_min;
  out.alpha_eff = spec.alpha * (d_min / spec.l0) * (d_min / spec.l0);
  // normalization: |J~| at the nearest-neighbor distance
  double j_nn = 0.0;
  for (int a = 0; a < n && j_nn == 0.0; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double d = std::hypot(geometry[a][0] - geometry[b][0],
                                  geometry[a][1] - geometry[b][1]);
      if (std::abs(d - d_min) < 1e-9 * d_min) {
        j_nn = std::abs(J.Jtilde(a, b));
        break;
      }
    }
  if (j_nn == 0.0) throw NumericalError("emitter_lattice_spectrum: vanishing NN coupling");
  out.j_nn = j_nn;

  auto eig = diagonalize_dense(J.Jtilde, false);
  out.omega_over_Jnn =
      Eigen::Map<const Eigen::VectorXd>(eig.eigenvalues.data(), eig.eigenvalues.size()) / j_nn;
  return out;
}

std::vector<Vec2> square_emitter_grid(int n_side, double d, const LatticeSpec& spec) {
  if (n_side < 1 || d <= 0.0)
    throw std::invalid_argument("square_emitter_grid: need n_side >= 1, d > 0");
  const Vec2 c = spec.center();
  std::vector<Vec2> out;
  out.reserve(n_side * n_side);
  for (int j = 0; j < n_side; ++j)
    for (int i = 0; i < n_side; ++i)
      out.push_back({c[0] + d * (i - 0.5 * (n_side - 1)), c[1] + d * (j - 0.5 * (n_side - 1))});
  return out;
}

}  // namespace lpp
