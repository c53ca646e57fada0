#include "lpp/lpp_model.hpp"

#include <algorithm>
#include <cmath>

#include "lpp/eigen_solver.hpp"

namespace lpp {

namespace {

void check_positions_inside(const EmitterSet& emitters, const LatticeSpec& spec) {
  if (emitters.positions.empty()) throw std::invalid_argument("emitter set is empty");
  for (size_t n = 0; n < emitters.positions.size(); ++n) {
    const auto& p = emitters.positions[n];
    if (p[0] < 0 || p[0] >= spec.nx || p[1] < 0 || p[1] >= spec.ny)
      throw std::invalid_argument("emitter " + std::to_string(n) + " outside lattice");
  }
}

Eigen::MatrixXcd inverse_K(const LppModel& model) {
  if (model.rank < model.n)
    throw NumericalError("LPP mode construction degenerate: Gram is rank-deficient");
  const auto& V = model.gram_eigenvectors;
  Eigen::VectorXd inv_sqrt(model.n);
  for (int i = 0; i < model.n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(model.gram_eigenvalues(i));
  return V * inv_sqrt.asDiagonal() * V.adjoint();
}

// G_ell(r, r_e^m) for every point (rows) and emitter (columns)
Eigen::MatrixXcd greens_to_emitters(const LppModel& model, const std::vector<Vec2>& points) {
  if (model.positions.empty())
    throw std::invalid_argument("model carries no emitter positions (injected Gram)");
  GreensProjection proj{model.ell, model.spec};
  Eigen::MatrixXcd w(points.size(), model.n);
  for (size_t i = 0; i < points.size(); ++i)
    for (int m = 0; m < model.n; ++m)
      w(i, m) = greens_projected(proj, points[i], model.positions[m]);
  return w;
}

void finish_model(LppModel& model) {
  const int n = model.n;
  if (model.gram.rows() != n || model.gram.cols() != n)
    throw std::invalid_argument("Gram matrix has the wrong shape");
  const double herm = (model.gram - model.gram.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw NumericalError("Gram matrix is not Hermitian");
  for (int i = 0; i < n; ++i)
    if (std::abs(model.gram(i, i) - cd(model.alpha, 0.0)) > 1e-9)
      throw NumericalError("Gram diagonal deviates from alpha");

  auto eig = diagonalize_dense(model.gram, true);
  model.gram_eigenvalues = Eigen::Map<const Eigen::VectorXd>(eig.eigenvalues.data(), n);
  model.gram_eigenvectors = *eig.eigenvectors;
  if (model.gram_eigenvalues.minCoeff() < -1e-12)
    throw NumericalError("Gram matrix is not numerically PSD");

  const double threshold = 1e-10 * model.alpha;
  Eigen::VectorXd sqrt_chi(n);
  model.rank = 0;
  for (int i = 0; i < n; ++i) {
    if (model.gram_eigenvalues(i) < threshold) {
      sqrt_chi(i) = 0.0;
    } else {
      sqrt_chi(i) = std::sqrt(model.gram_eigenvalues(i));
      ++model.rank;
    }
  }
  model.K = model.gram_eigenvectors * sqrt_chi.asDiagonal() * model.gram_eigenvectors.adjoint();

  model.mode_usable.assign(n, true);
  if (model.rank < n) {
    // project each basis direction onto the range of the Gram
    Eigen::MatrixXcd range = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      if (sqrt_chi(i) > 0.0)
        range += model.gram_eigenvectors.col(i) * model.gram_eigenvectors.col(i).adjoint();
    for (int m = 0; m < n; ++m) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Unit(n, m);
      model.mode_usable[m] = (range * e - e).norm() < 1e-8;
    }
  }
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const EmitterSet& emitters, int ell, const LatticeSpec& spec) {
  check_positions_inside(emitters, spec);
  const int n = emitters.count();
  GreensProjection proj{ell, spec};
  Eigen::MatrixXcd gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      gram(a, b) = greens_projected(proj, emitters.position_of(a, spec),
                                    emitters.position_of(b, spec));
  // symmetrize away rounding noise; entries are exact Hermitian pairs analytically
  gram = 0.5 * (gram + Eigen::MatrixXcd(gram.adjoint()));
  return gram;
}

Eigen::MatrixXcd coupling_matrix_K(const Eigen::MatrixXcd& gram) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("Gram must be square");
  const int n = static_cast<int>(gram.rows());
  auto eig = diagonalize_dense(gram, true);
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, gram(i, i).real());
  if (eig.eigenvalues.front() < -1e-12)
    throw NumericalError("coupling_matrix_K: matrix is not numerically PSD");
  Eigen::VectorXd sqrt_chi(n);
  for (int i = 0; i < n; ++i) {
    const double chi = eig.eigenvalues[i];
    sqrt_chi(i) = (chi < 1e-10 * max_diag) ? 0.0 : std::sqrt(chi);
  }
  return *eig.eigenvectors * sqrt_chi.asDiagonal() * eig.eigenvectors->adjoint();
}

LppModel make_lpp_model(const EmitterSet& emitters, int ell, const LatticeSpec& spec,
                        CorrectionOrder order, double gamma_p) {
  check_positions_inside(emitters, spec);
  LppModel model;
  model.ell = ell;
  model.n = emitters.count();
  model.alpha = spec.alpha;
  model.g = emitters.g;
  model.omega_e = emitters.omega_e;
  model.gamma_e = emitters.gamma_e;
  model.gamma_p = gamma_p;
  model.omega_ell = landau_frequency(ell, LandauSpectrumParams::from_lattice(spec, order), spec.J);
  model.spec = spec;
  for (int m = 0; m < model.n; ++m) model.positions.push_back(emitters.position_of(m, spec));
  model.gram = gram_matrix(emitters, ell, spec);
  finish_model(model);
  return model;
}

LppModel lpp_model_from_gram(const Eigen::MatrixXcd& gram, double alpha, double g,
                             double omega_e, double omega_ell, int ell,
                             double gamma_e, double gamma_p) {
  LppModel model;
  model.ell = ell;
  model.n = static_cast<int>(gram.rows());
  model.alpha = alpha;
  model.g = g;
  model.omega_e = omega_e;
  model.omega_ell = omega_ell;
  model.gamma_e = gamma_e;
  model.gamma_p = gamma_p;
  model.gram = gram;
  finish_model(model);
  return model;
}

Eigen::MatrixXcd equilateral_gram(double alpha, double d_over_lB, int ell,
                                  double theta_triangle) {
  if (!(alpha > 0.0)) throw std::invalid_argument("equilateral_gram: alpha must be positive");
  if (d_over_lB < 0.0) throw std::invalid_argument("equilateral_gram: d must be >= 0");
  const double x = d_over_lB * d_over_lB;
  const double f = std::exp(-x / 4.0) * generalized_laguerre(ell, 0, x / 2.0);
  const cd phase = std::exp(cd(0.0, theta_triangle / 3.0));
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(3, 3);
  gram(0, 1) = f * phase;
  gram(1, 2) = f * phase;
  gram(2, 0) = f * phase;
  gram(1, 0) = std::conj(gram(0, 1));
  gram(2, 1) = std::conj(gram(1, 2));
  gram(0, 2) = std::conj(gram(2, 0));
  return alpha * gram;
}

double triangle_phase(Vec2 r1, Vec2 r2, Vec2 r3, double l_B) {
  return gauge_phase_theta(r1, r2, l_B) + gauge_phase_theta(r2, r3, l_B) +
         gauge_phase_theta(r3, r1, l_B);
}

Eigen::MatrixXcd build_lpp_hamiltonian(const LppModel& model, int sector) {
  const int n = model.n;
  const auto& K = model.K;
  const double g = model.g;
  if (sector == 1) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    H.topLeftCorner(n, n) = model.omega_e * Eigen::MatrixXcd::Identity(n, n);
    H.bottomRightCorner(n, n) = model.omega_ell * Eigen::MatrixXcd::Identity(n, n);
    H.topRightCorner(n, n) = g * K;
    H.bottomLeftCorner(n, n) = g * K.adjoint();
    return H;
  }
  if (sector != 2) throw std::invalid_argument("sector must be 1 or 2");

  FewExcitationBasis basis{2, n};
  const int dim = basis.dim();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      H(basis.spin_pair_index(a, b), basis.spin_pair_index(a, b)) = 2.0 * model.omega_e;
  for (int p = 0; p < n; ++p)
    for (int k = 0; k < n; ++k)
      H(basis.spin_boson_index(p, k), basis.spin_boson_index(p, k)) =
          model.omega_e + model.omega_ell;
  for (int k = 0; k < n; ++k)
    for (int m = k; m < n; ++m)
      H(basis.boson_pair_index(k, m), basis.boson_pair_index(k, m)) = 2.0 * model.omega_ell;

  // spin pair <-> spin-boson
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const int row = basis.spin_pair_index(a, b);
      for (int k = 0; k < n; ++k) {
        H(row, basis.spin_boson_index(b, k)) += g * K(a, k);
        H(row, basis.spin_boson_index(a, k)) += g * K(b, k);
      }
    }
  // spin-boson <-> boson pair
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j) {
      const int row = basis.spin_boson_index(p, j);
      for (int k = 0; k < n; ++k) {
        if (k == j) {
          H(row, basis.boson_pair_index(k, k)) += std::sqrt(2.0) * g * K(p, k);
        } else {
          const int lo = std::min(j, k), hi = std::max(j, k);
          H(row, basis.boson_pair_index(lo, hi)) += g * K(p, k);
        }
      }
    }
  // close the Hermitian conjugate
  for (int r = 0; r < dim; ++r)
    for (int c = r + 1; c < dim; ++c) H(c, r) = std::conj(H(r, c));
  return H;
}

LppSpectrum lpp_spectrum(const LppModel& model, int sector, bool with_losses) {
  Eigen::MatrixXcd H = build_lpp_hamiltonian(model, sector);
  LppSpectrum out;
  if (!with_losses) {
    auto eig = diagonalize_dense(H, true);
    out.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.end());
    out.eigenvectors = std::move(*eig.eigenvectors);
    return out;
  }
  const int n = model.n;
  Eigen::VectorXd loss(H.rows());
  if (sector == 1) {
    loss.head(n).setConstant(0.5 * model.gamma_e);
    loss.tail(n).setConstant(0.5 * model.gamma_p);
  } else {
    FewExcitationBasis basis{2, n};
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) loss(basis.spin_pair_index(a, b)) = model.gamma_e;
    for (int p = 0; p < n; ++p)
      for (int k = 0; k < n; ++k)
        loss(basis.spin_boson_index(p, k)) = 0.5 * (model.gamma_e + model.gamma_p);
    for (int k = 0; k < n; ++k)
      for (int m = k; m < n; ++m) loss(basis.boson_pair_index(k, m)) = model.gamma_p;
  }
  H -= cd(0.0, 1.0) * Eigen::MatrixXcd(loss.cast<cd>().asDiagonal());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(H, true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("lpp_spectrum: complex eigensolver failed");
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  out.eigenvectors = solver.eigenvectors();
  std::vector<int> order(out.eigenvalues.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return out.eigenvalues[a].real() < out.eigenvalues[b].real();
  });
  std::vector<cd> sorted_vals(order.size());
  Eigen::MatrixXcd sorted_vecs(out.eigenvectors.rows(), out.eigenvectors.cols());
  for (size_t i = 0; i < order.size(); ++i) {
    sorted_vals[i] = out.eigenvalues[order[i]];
    sorted_vecs.col(i) = out.eigenvectors.col(order[i]);
  }
  out.eigenvalues = std::move(sorted_vals);
  out.eigenvectors = std::move(sorted_vecs);
  return out;
}

std::array<double, 3> triangle_eigenvalues(double theta_triangle) {
  std::array<double, 3> lambda;
  for (int nu = 1; nu <= 3; ++nu)
    lambda[nu - 1] = 2.0 * std::cos((theta_triangle + 2.0 * pi * nu) / 3.0);
  std::sort(lambda.begin(), lambda.end());
  return lambda;
}

std::array<cd, 6> lpp_closed_form_spectrum(double d_over_lB, int ell,
                                           double theta_triangle, double omega_rabi,
                                           double omega_e, double gamma_e,
                                           double gamma_p) {
  const double x = d_over_lB * d_over_lB;
  const double f = std::exp(-x / 4.0) * generalized_laguerre(ell, 0, x / 2.0);
  const auto lambda = triangle_eigenvalues(theta_triangle);
  const cd center(omega_e, -0.25 * (gamma_e + gamma_p));
  const double gbar = gamma_e - gamma_p;
  std::array<cd, 6> out;
  for (int nu = 0; nu < 3; ++nu) {
    const double big_lambda = f * lambda[nu];
    const cd root = std::sqrt(
        cd(omega_rabi * omega_rabi * (1.0 + big_lambda) - gbar * gbar / 16.0, 0.0));
    out[2 * nu] = center - root;
    out[2 * nu + 1] = center + root;
  }
  return out;
}

Eigen::VectorXd excitation_spectrum(const Eigen::MatrixXcd& H_sector1, int n_spins,
                                    int emitter, const std::vector<double>& omega_grid,
                                    double gamma_e) {
  if (gamma_e <= 0.0)
    throw std::invalid_argument("excitation_spectrum: requires gamma_e > 0");
  const int dim = static_cast<int>(H_sector1.rows());
  if (emitter < 0 || emitter >= n_spins)
    throw std::invalid_argument("excitation_spectrum: emitter index out of range");
  Eigen::MatrixXcd base = H_sector1;
  for (int i = 0; i < n_spins; ++i) base(i, i) -= cd(0.0, 0.5 * gamma_e);
  Eigen::VectorXd spectrum(omega_grid.size());
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Unit(dim, emitter);
  for (size_t w = 0; w < omega_grid.size(); ++w) {
    Eigen::MatrixXcd A = base;
    A.diagonal().array() -= cd(omega_grid[w], 0.0);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    Eigen::VectorXcd x = lu.solve(rhs);
    spectrum(w) = std::norm(x(emitter));
  }
  return spectrum;
}

Eigen::MatrixXcd mode_profiles(const LppModel& model, const std::vector<Vec2>& points) {
  const Eigen::MatrixXcd kinv = inverse_K(model);
  const Eigen::MatrixXcd w = greens_to_emitters(model, points);  // points x emitters
  // u_n(r) = sum_m conj(Kinv_nm) G_ell(r, r_e^m), i.e. w * conj(Kinv)^T
  return w * kinv.adjoint();
}

Eigen::VectorXd two_photon_correlation(const Eigen::VectorXcd& state, const LppModel& model,
                                       const std::vector<Vec2>& points, Vec2 r_ref) {
  const int n = model.n;
  FewExcitationBasis basis{2, n};
  if (state.size() != basis.dim())
    throw std::invalid_argument("two_photon_correlation: state has wrong dimension");

  const Eigen::MatrixXcd kinv = inverse_K(model);
  auto mode_values = [&](Vec2 r) {
    const Eigen::MatrixXcd w = greens_to_emitters(model, {r});  // 1 x m
    Eigen::VectorXcd u(n);
    for (int nn = 0; nn < n; ++nn) {
      cd s(0.0, 0.0);
      for (int m = 0; m < n; ++m) s += std::conj(kinv(nn, m)) * w(0, m);
      u(nn) = s;
    }
    return u;
  };

  const Eigen::VectorXcd u_ref = mode_values(r_ref);

  // amplitude of B_m^dagger|0> in Psi(r_ref)|state>, plus the spin-sector part
  Eigen::VectorXcd v1 = Eigen::VectorXcd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int m = k; m < n; ++m) {
      const cd b = state(basis.boson_pair_index(k, m));
      if (k == m) {
        v1(k) += std::sqrt(2.0) * b * u_ref(k);
      } else {
        v1(m) += b * u_ref(k);
        v1(k) += b * u_ref(m);
      }
    }
  double density = v1.squaredNorm();
  for (int p = 0; p < n; ++p) {
    cd s(0.0, 0.0);
    for (int k = 0; k < n; ++k) s += state(basis.spin_boson_index(p, k)) * u_ref(k);
    density += std::norm(s);
  }
  if (density < 1e-14)
    throw NumericalError("two_photon_correlation: reference point has no photon weight");

  Eigen::VectorXd out(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    const Eigen::VectorXcd u = mode_values(points[i]);
    cd psi2(0.0, 0.0);
    for (int k = 0; k < n; ++k)
      for (int m = k; m < n; ++m) {
        const cd b = state(basis.boson_pair_index(k, m));
        if (k == m)
          psi2 += b * std::sqrt(2.0) * u(k) * u_ref(k);
        else
          psi2 += b * (u(k) * u_ref(m) + u(m) * u_ref(k));
      }
    out(i) = std::norm(psi2) / density;
  }
  return out;
}

double lpp_mode_commutator_check(const LppModel& model) {
  const Eigen::MatrixXcd kinv = inverse_K(model);
  std::vector<Vec2> sites(model.spec.sites());
  for (int i = 0; i < model.spec.sites(); ++i) sites[i] = model.spec.site_position(i);
  // w(i, m) = G_ell(r_i, r_e^m); beta_n(i) = sum_m Kinv_nm G_ell(r_e^m, r_i)
  //         = sum_m Kinv_nm conj(w(i, m))
  const Eigen::MatrixXcd w = greens_to_emitters(model, sites);
  const Eigen::MatrixXcd beta = kinv * w.conjugate().transpose();  // n x sites
  const Eigen::MatrixXcd overlap = beta * beta.adjoint();
  return (overlap - Eigen::MatrixXcd::Identity(model.n, model.n)).cwiseAbs().maxCoeff();
}

}  // namespace lpp
