#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "lpp/continuum.hpp"
#include "lpp/effective_dipole.hpp"
#include "lpp/eigen_solver.hpp"
#include "lpp/lattice.hpp"
#include "lpp/lpp_model.hpp"
#include "lpp/types.hpp"

using namespace lpp;

namespace {

LatticeSpec make_spec(int nx, int ny, double alpha) {
  LatticeSpec spec;
  spec.nx = nx;
  spec.ny = ny;
  spec.alpha = alpha;
  return spec;
}

// ideal equidistant triangle couplings: common magnitude g0, cyclic phase
// theta/3 on each directed bond of the 0 -> 1 -> 2 -> 0 loop
EffectiveCouplingMatrix cyclic_triangle(double g0, double theta) {
  EffectiveCouplingMatrix J;
  J.Jtilde = Eigen::MatrixXcd::Zero(3, 3);
  const cd hop = g0 * std::exp(cd(0.0, theta / 3.0));
  J.Jtilde(0, 1) = hop;
  J.Jtilde(1, 2) = hop;
  J.Jtilde(2, 0) = hop;
  J.Jtilde(1, 0) = std::conj(hop);
  J.Jtilde(2, 1) = std::conj(hop);
  J.Jtilde(0, 2) = std::conj(hop);
  J.theta = Eigen::MatrixXd::Zero(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) J.theta(a, b) = std::arg(J.Jtilde(a, b));
  J.G0 = g0;
  return J;
}

std::vector<double> grid(double t_max, int n) {
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = t_max * static_cast<double>(i) / n;
  return t;
}

}  // namespace

TEST_CASE("effective couplings follow the projected propagator over the detuning") {
  auto spec = make_spec(20, 20, 0.08);
  EmitterSet em;
  em.positions = {{9, 9}, {12, 10}, {10, 12}};
  em.g = 0.02;
  const double omega_ell = -3.5289279095091191;
  const double omega_e = omega_ell - 0.2;  // red detuned, |delta| = 10 g
  auto J = effective_couplings(em, 0, em.g, omega_e, omega_ell, spec);

  CHECK_FALSE(J.dispersive_warning);
  CHECK((J.Jtilde - J.Jtilde.adjoint()).cwiseAbs().maxCoeff() < 1e-18);
  const double scale = em.g * em.g / (omega_e - omega_ell);
  GreensProjection proj{0, spec};
  for (int a = 0; a < 3; ++a) {
    CHECK(std::abs(J.Jtilde(a, a)) == 0.0);
    CHECK(J.theta(a, a) == 0.0);
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const cd expect =
          scale * greens_projected(proj, em.position_of(a, spec), em.position_of(b, spec));
      CHECK(std::abs(J.Jtilde(a, b) - expect) < 1e-14 * std::abs(expect) + 1e-20);
      CHECK(std::abs(J.theta(a, b) + J.theta(b, a)) < 1e-15);
    }
  }
  // negative detuning makes the signed coupling scale negative
  CHECK(J.G0 < 0.0);
  CHECK(std::abs(std::abs(J.G0) - std::abs(J.Jtilde(0, 1))) < 1e-18);
}

TEST_CASE("effective couplings reject resonance and flag the marginal regime") {
  auto spec = make_spec(16, 16, 0.08);
  EmitterSet em;
  em.positions = {{7, 7}, {9, 8}};
  em.g = 0.02;
  CHECK_THROWS_AS(effective_couplings(em, 0, em.g, -1.0, -1.0, spec), std::invalid_argument);

  auto marginal = effective_couplings(em, 0, em.g, -1.0 + 3.0 * em.g, -1.0, spec);
  CHECK(marginal.dispersive_warning);
  auto safe = effective_couplings(em, 0, em.g, -1.0 + 8.0 * em.g, -1.0, spec);
  CHECK_FALSE(safe.dispersive_warning);
}

TEST_CASE("chirality determinant: 2 G0^3 cos(theta) for the ideal triangle") {
  for (double theta : {0.0, 0.7, pi / 4.0, pi / 2.0, 2.3}) {
    auto J = cyclic_triangle(0.8, theta);
    const cd det = chirality_determinant(J);
    CHECK(std::abs(det.imag()) < 1e-15);
    CHECK(std::abs(det.real() - 2.0 * 0.8 * 0.8 * 0.8 * std::cos(theta)) < 1e-14);
  }
  // perfect chirality at a quarter flux: determinant vanishes
  CHECK(std::abs(chirality_determinant(cyclic_triangle(1.0, pi / 2.0))) < 1e-15);

  EffectiveCouplingMatrix two;
  two.Jtilde = Eigen::MatrixXcd::Zero(2, 2);
  CHECK_THROWS_AS(chirality_determinant(two), std::invalid_argument);
}

TEST_CASE("a physical quarter-flux triangle has a vanishing determinant") {
  // bonds sqrt(17), sqrt(18), sqrt(17): magnitudes differ, but the loop phase
  // is exactly pi/2, which kills the real part of the bond product
  auto spec = make_spec(31, 31, 1.0 / 30.0);
  EmitterSet em;
  em.positions = {{13, 13}, {14, 17}, {17, 14}};
  em.g = 0.029;
  const double omega_ell = 0.0;
  auto J = effective_couplings(em, 0, em.g, omega_ell - 10.0 * em.g, omega_ell, spec);
  const double scale3 = std::abs(J.Jtilde(0, 1) * J.Jtilde(1, 2) * J.Jtilde(2, 0));
  CHECK(scale3 > 0.0);
  CHECK(std::abs(chirality_determinant(J)) < 1e-12 * scale3);

  const double l_B = spec.magnetic_length();
  CHECK(std::abs(triangle_phase(em.position_of(0, spec), em.position_of(1, spec),
                                em.position_of(2, spec), l_B) -
                 pi / 2.0) < 1e-13);
}

TEST_CASE("hard-core evolution is unitary in both sectors") {
  auto J = cyclic_triangle(0.9, 1.1);
  // perturb the magnitudes so the test does not rely on the ideal geometry
  J.Jtilde(0, 1) *= 1.07;
  J.Jtilde(1, 0) = std::conj(J.Jtilde(0, 1));
  auto t = grid(40.0, 400);

  auto p1 = evolve_hardcore(J, 1, HardCoreState::single(0, 3), t);
  for (Eigen::Index ti = 0; ti < p1.rows(); ++ti)
    CHECK(std::abs(p1.row(ti).sum() - 1.0) < 1e-12);

  auto p2 = evolve_hardcore(J, 2, HardCoreState::pair(0, 1, 3), t);
  for (Eigen::Index ti = 0; ti < p2.rows(); ++ti)
    CHECK(std::abs(p2.row(ti).sum() - 2.0) < 1e-12);
}

TEST_CASE("perfectly chiral triangle follows the closed-form populations") {
  const double g0 = 1.0;
  const double period = 2.0 * pi / (std::sqrt(3.0) * g0);
  auto t = grid(2.0 * period, 800);

  for (double sign : {1.0, -1.0}) {
    auto J = cyclic_triangle(sign * g0, pi / 2.0);
    auto pops = evolve_hardcore(J, 1, HardCoreState::single(0, 3), t);
    auto c = chiral_closed_form(sign * g0, t);
    for (size_t ti = 0; ti < t.size(); ++ti)
      for (int n = 0; n < 3; ++n)
        CHECK(std::abs(pops(ti, n) - c(ti, n) * c(ti, n)) < 1e-12);
  }
}

TEST_CASE("excitation circulates 0 -> 1 -> 2 and reverses with the coupling sign") {
  const double g0 = 1.0;
  const double period = 2.0 * pi / (std::sqrt(3.0) * g0);
  const int n_steps = 900;
  auto t = grid(period, n_steps);
  const double dt = period / n_steps;

  auto peak_time = [&](const Eigen::MatrixXd& pops, int col) {
    Eigen::Index best = 0;
    pops.col(col).maxCoeff(&best);
    return t[static_cast<size_t>(best)];
  };

  auto forward = evolve_hardcore(cyclic_triangle(g0, pi / 2.0), 1,
                                 HardCoreState::single(0, 3), t);
  CHECK(std::abs(peak_time(forward, 1) - period / 3.0) < 2.0 * dt);
  CHECK(std::abs(peak_time(forward, 2) - 2.0 * period / 3.0) < 2.0 * dt);

  auto backward = evolve_hardcore(cyclic_triangle(-g0, pi / 2.0), 1,
                                  HardCoreState::single(0, 3), t);
  CHECK(std::abs(peak_time(backward, 2) - period / 3.0) < 2.0 * dt);
  CHECK(std::abs(peak_time(backward, 1) - 2.0 * period / 3.0) < 2.0 * dt);
}

TEST_CASE("two hard-core excitations are the particle-hole image of one") {
  const double theta = pi / 2.0;
  auto t = grid(15.0, 300);
  auto pair_pops =
      evolve_hardcore(cyclic_triangle(0.7, theta), 2, HardCoreState::pair(1, 2, 3), t);
  auto hole_pops =
      evolve_hardcore(cyclic_triangle(0.7, -theta), 1, HardCoreState::single(0, 3), t);
  for (size_t ti = 0; ti < t.size(); ++ti)
    for (int n = 0; n < 3; ++n)
      CHECK(std::abs((1.0 - pair_pops(ti, n)) - hole_pops(ti, n)) < 1e-12);
}

TEST_CASE("hard-core state constructors and evolution validate their input") {
  CHECK_THROWS_AS(HardCoreState::single(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(HardCoreState::single(-1, 3), std::invalid_argument);
  CHECK_THROWS_AS(HardCoreState::pair(1, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(HardCoreState::pair(0, 4, 3), std::invalid_argument);

  // pair order is normalized to a < b
  auto s = HardCoreState::pair(2, 0, 4);
  CHECK(s.sector == 2);
  CHECK(std::abs(s.amplitudes(1) - cd(1.0, 0.0)) < 1e-16);  // pair (0,2) of n = 4

  auto J = cyclic_triangle(1.0, 0.3);
  auto t = grid(1.0, 10);
  CHECK_THROWS_AS(evolve_hardcore(J, 3, HardCoreState::single(0, 3), t),
                  std::invalid_argument);
  CHECK_THROWS_AS(evolve_hardcore(J, 2, HardCoreState::single(0, 3), t),
                  std::invalid_argument);
  CHECK_THROWS_AS(evolve_hardcore(J, 1, HardCoreState::single(0, 4), t),
                  std::invalid_argument);
}

TEST_CASE("square emitter grid geometry") {
  auto spec = make_spec(40, 40, 0.08);
  auto geometry = square_emitter_grid(3, 1.5, spec);
  REQUIRE(geometry.size() == 9);
  double cx = 0.0, cy = 0.0;
  for (const auto& r : geometry) {
    cx += r[0];
    cy += r[1];
  }
  CHECK(std::abs(cx / 9.0 - spec.center()[0]) < 1e-13);
  CHECK(std::abs(cy / 9.0 - spec.center()[1]) < 1e-13);
  // nearest-neighbor spacing is the grid constant
  double d_min = 1e300;
  for (size_t a = 0; a < geometry.size(); ++a)
    for (size_t b = a + 1; b < geometry.size(); ++b)
      d_min = std::min(d_min, std::hypot(geometry[a][0] - geometry[b][0],
                                         geometry[a][1] - geometry[b][1]));
  CHECK(std::abs(d_min - 1.5) < 1e-13);

  CHECK_THROWS_AS(square_emitter_grid(0, 1.0, spec), std::invalid_argument);
  CHECK_THROWS_AS(square_emitter_grid(3, 0.0, spec), std::invalid_argument);
}

TEST_CASE("emitter lattice at doubled spacing reproduces the denser-flux spectrum") {
  auto spec = make_spec(40, 40, 0.08);
  const int n_side = 8;
  const double d = 2.0;
  auto geometry = square_emitter_grid(n_side, d, spec);
  const double g = 0.02;
  const double detuning = -10.0 * g;
  // keep only nearest-neighbor couplings (diagonal pairs sit at d sqrt 2)
  auto truncated = emitter_lattice_spectrum(geometry, 0, g, detuning, spec, 1.05 * d);

  CHECK(std::abs(truncated.spacing - d) < 1e-13);
  CHECK(std::abs(truncated.alpha_eff - 0.32) < 1e-15);
  // |J~_NN| = |g^2/delta| alpha exp(-d^2/(4 l_B^2))
  const double l_B = spec.magnetic_length();
  const double expect_jnn =
      (g * g / std::abs(detuning)) * spec.alpha * std::exp(-d * d / (4.0 * l_B * l_B));
  CHECK(truncated.j_nn == doctest::Approx(expect_jnn).epsilon(1e-12));

  // the normalized spectrum is the Hofstadter spectrum at alpha_eff
  LatticeSpec ref;
  ref.nx = n_side;
  ref.ny = n_side;
  ref.alpha = 0.32;
  auto H = build_hamiltonian(ref, Gauge{});
  auto eig = diagonalize_dense(Eigen::MatrixXcd(H.mat), false);
  const int dim = n_side * n_side;
  REQUIRE(truncated.omega_over_Jnn.size() == dim);
  for (int i = 0; i < dim; ++i)
    CHECK(std::abs(truncated.omega_over_Jnn(i) + eig.eigenvalues[dim - 1 - i]) < 1e-9);

  CHECK_THROWS_AS(emitter_lattice_spectrum({geometry[0]}, 0, g, detuning, spec),
                  std::invalid_argument);
}

TEST_CASE("coupling tails beyond nearest neighbors shift the band edges") {
  auto spec = make_spec(40, 40, 0.08);
  auto geometry = square_emitter_grid(6, 2.0, spec);
  const double g = 0.02, detuning = -0.2;
  auto full = emitter_lattice_spectrum(geometry, 0, g, detuning, spec);
  auto truncated = emitter_lattice_spectrum(geometry, 0, g, detuning, spec, 2.1);
  CHECK(std::abs(full.alpha_eff - 0.32) < 1e-15);
  CHECK(full.j_nn == doctest::Approx(truncated.j_nn).epsilon(1e-14));
  // next-nearest couplings are ~60% of J_NN here, so the tails must matter
  CHECK((full.omega_over_Jnn - truncated.omega_over_Jnn).cwiseAbs().maxCoeff() > 1e-3);
  // Gershgorin bound from the summed coupling magnitudes keeps the band finite
  CHECK(full.omega_over_Jnn.cwiseAbs().maxCoeff() < 10.0);
}
