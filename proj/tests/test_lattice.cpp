#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "lpp/eigen_solver.hpp"
#include "lpp/lattice.hpp"

using namespace lpp;

namespace {

LatticeSpec make_spec(int nx, int ny, double alpha) {
  LatticeSpec s;
  s.nx = nx;
  s.ny = ny;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST_CASE("from_upper closes the Hermitian conjugate") {
  std::vector<Eigen::Triplet<cd>> upper;
  upper.emplace_back(0, 1, cd(0.3, -0.7));
  upper.emplace_back(1, 2, cd(-1.0, 0.1));
  upper.emplace_back(0, 0, cd(2.0, 0.0));
  const auto op = SparseHermitianOperator::from_upper(3, upper);
  const Eigen::MatrixXcd d = op.mat;
  CHECK(d(1, 0) == std::conj(d(0, 1)));
  CHECK(d(2, 1) == std::conj(d(1, 2)));
  CHECK(op.hermiticity_defect() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("plaquette flux equals 2 pi alpha in both gauges") {
  const double alpha = 0.137;
  for (GaugeKind kind : {GaugeKind::Symmetric, GaugeKind::LandauX}) {
    const auto spec = make_spec(7, 6, alpha);
    const auto flux = plaquette_flux_check(spec, Gauge{kind});
    REQUIRE(flux.size() == size_t(6 * 5));
    for (double f : flux) CHECK(f == doctest::Approx(2.0 * pi * alpha).epsilon(1e-13));
  }
}

TEST_CASE("hamiltonian is Hermitian with omega_p on the diagonal") {
  auto spec = make_spec(6, 5, 0.21);
  spec.omega_p = 3.25;
  const auto H = build_hamiltonian(spec, Gauge{});
  CHECK(H.hermiticity_defect() == doctest::Approx(0.0).epsilon(1e-15));
  const Eigen::MatrixXcd d = H.mat;
  for (int i = 0; i < spec.sites(); ++i) CHECK(d(i, i) == cd(3.25, 0.0));
}

TEST_CASE("open boundaries: corner sites couple to two neighbors") {
  const auto spec = make_spec(5, 5, 0.1);
  const Eigen::MatrixXcd d = build_hamiltonian(spec, Gauge{}).mat;
  int nnz = 0;
  for (int j = 0; j < spec.sites(); ++j)
    if (std::abs(d(spec.site_index(0, 0), j)) > 0 && j != spec.site_index(0, 0)) ++nnz;
  CHECK(nnz == 2);
  nnz = 0;
  const int mid = spec.site_index(2, 2);
  for (int j = 0; j < spec.sites(); ++j)
    if (std::abs(d(mid, j)) > 0 && j != mid) ++nnz;
  CHECK(nnz == 4);
}

TEST_CASE("zero flux reproduces the open-box cosine spectrum") {
  const auto spec = make_spec(5, 4, 0.0);
  const auto r = diagonalize(build_hamiltonian(spec, Gauge{}), DiagonalizeMode::full(), false);
  std::vector<double> expect;
  for (int mx = 1; mx <= 5; ++mx)
    for (int my = 1; my <= 4; ++my)
      expect.push_back(-2.0 * std::cos(pi * mx / 6.0) - 2.0 * std::cos(pi * my / 5.0));
  std::sort(expect.begin(), expect.end());
  REQUIRE(r.eigenvalues.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(r.eigenvalues[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("gauges are unitarily equivalent") {
  const auto spec = make_spec(12, 12, 0.08);
  const auto a = diagonalize(build_hamiltonian(spec, Gauge{GaugeKind::Symmetric}),
                             DiagonalizeMode::full(), false);
  const auto b = diagonalize(build_hamiltonian(spec, Gauge{GaugeKind::LandauX}),
                             DiagonalizeMode::full(), false);
  double worst = 0.0;
  for (size_t i = 0; i < a.eigenvalues.size(); ++i)
    worst = std::max(worst, std::abs(a.eigenvalues[i] - b.eigenvalues[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("onsite shift adds to the diagonal") {
  const auto spec = make_spec(4, 4, 0.0);
  std::vector<double> shift(spec.sites(), 0.0);
  shift[5] = 1.75;
  const Eigen::MatrixXcd d = build_hamiltonian(spec, Gauge{}, &shift).mat;
  CHECK(d(5, 5) == cd(1.75, 0.0));
  CHECK(d(0, 0) == cd(0.0, 0.0));
}

TEST_CASE("bond phase is antisymmetric under direction reversal") {
  const auto spec = make_spec(8, 8, 0.13);
  for (GaugeKind kind : {GaugeKind::Symmetric, GaugeKind::LandauX}) {
    const Gauge g{kind};
    const double fwd = peierls_phase(spec, g, {3, 4}, {4, 4});
    const double bwd = peierls_phase(spec, g, {4, 4}, {3, 4});
    CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-15));
  }
  CHECK_THROWS_AS(peierls_phase(spec, Gauge{}, {0, 0}, {2, 0}), std::invalid_argument);
}

TEST_CASE("lanczos matches the dense lowest eigenvalues") {
  const auto spec = make_spec(16, 16, 0.08);
  const auto H = build_hamiltonian(spec, Gauge{});
  const auto dense = diagonalize(H, DiagonalizeMode::full(), false);
  const auto low = diagonalize(H, DiagonalizeMode::lowest(8), false);
  REQUIRE(low.eigenvalues.size() >= 8);
  for (int i = 0; i < 8; ++i)
    CHECK(low.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-9));
}

TEST_CASE("spectrum is within the tight-binding bandwidth") {
  auto spec = make_spec(10, 10, 0.31);
  spec.omega_p = 2.0;
  const auto r = diagonalize(build_hamiltonian(spec, Gauge{}), DiagonalizeMode::full(), false);
  CHECK(r.eigenvalues.front() >= 2.0 - 4.0 - 1e-12);
  CHECK(r.eigenvalues.back() <= 2.0 + 4.0 + 1e-12);
}
