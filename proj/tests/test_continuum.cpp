#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lpp/continuum.hpp"

using namespace lpp;

namespace {

LatticeSpec make_spec(int n, double alpha) {
  LatticeSpec s;
  s.nx = n;
  s.ny = n;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST_CASE("generalized Laguerre values") {
  CHECK(generalized_laguerre(0, 0, 1.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(generalized_laguerre(1, 2, 0.4) == doctest::Approx(1 + 2 - 0.4).epsilon(1e-14));
  CHECK(generalized_laguerre(2, 0, 0.7) == doctest::Approx(-0.15499999999999992).epsilon(1e-13));
  CHECK(generalized_laguerre(3, 2, 1.5) == doctest::Approx(0.062500000000000056).epsilon(1e-12));
  CHECK(generalized_laguerre(4, 1, 2.3) == doctest::Approx(-0.5231625000000002).epsilon(1e-12));
  CHECK(generalized_laguerre(5, 0, 3.7) == doctest::Approx(-0.20530891666666751).epsilon(1e-12));
  CHECK_THROWS_AS(generalized_laguerre(-1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generalized_laguerre(2, 0, -0.5), std::invalid_argument);
}

TEST_CASE("landau frequencies, harmonic and quartic") {
  const auto spec = make_spec(10, 0.08);
  const auto harm = LandauSpectrumParams::from_lattice(spec, CorrectionOrder::Harmonic);
  const auto quart = LandauSpectrumParams::from_lattice(spec, CorrectionOrder::Quartic);
  const double wc = 4.0 * pi * 0.08;
  CHECK(harm.omega_c == doctest::Approx(wc).epsilon(1e-15));
  CHECK(harm.omega_b == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(landau_frequency(0, harm, spec.J) == doctest::Approx(-4.0 + 0.5 * wc).epsilon(1e-14));
  CHECK(landau_frequency(0, quart, spec.J) ==
        doctest::Approx(-3.5289279095091191).epsilon(1e-14));
  CHECK(landau_frequency(1, quart, spec.J) ==
        doctest::Approx(-2.6499491966943287).epsilon(1e-14));
  CHECK(landau_frequency(2, quart, spec.J) ==
        doctest::Approx(-1.8973014202134828).epsilon(1e-14));
}

TEST_CASE("orbitals are normalized on the lattice") {
  // orbital centered on the lattice so the tails are fully covered
  const auto spec = make_spec(40, 0.08);
  const Vec2 c = spec.center();
  for (const LandauIndex idx : {LandauIndex{0, 0}, LandauIndex{0, 5}, LandauIndex{1, 3},
                                LandauIndex{2, 2}}) {
    double sum = 0.0;
    for (int i = 0; i < spec.sites(); ++i) {
      const Vec2 r = spec.site_position(i);
      sum += std::norm(landau_orbital(idx, {r[0] - c[0], r[1] - c[1]}, spec));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("central orbital value is sqrt(alpha)") {
  const auto spec = make_spec(20, 0.11);
  const cd v = landau_orbital({0, 0}, {0.0, 0.0}, spec);
  CHECK(v.real() == doctest::Approx(std::sqrt(0.11)).epsilon(1e-14));
  CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-14));
  const cd v2 = landau_orbital({2, 2}, {0.0, 0.0}, spec);
  CHECK(std::abs(v2) == doctest::Approx(std::sqrt(0.11)).epsilon(1e-12));
}

TEST_CASE("projected propagator diagonal equals alpha exactly") {
  const auto spec = make_spec(30, 0.05);
  const GreensProjection proj{1, spec};
  const Vec2 r = spec.site_position(spec.site_index(7, 12));
  const cd g = greens_projected(proj, r, r);
  CHECK(g.real() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(g.imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("projected propagator equals the orbital mode sum") {
  // orbitals in the mode sum are centered on the gauge origin
  const auto spec = make_spec(24, 0.1);
  const Vec2 o = spec.gauge_origin();
  for (int ell : {0, 1}) {
    const GreensProjection proj{ell, spec};
    const Vec2 ri = spec.site_position(spec.site_index(10, 11));
    const Vec2 rj = spec.site_position(spec.site_index(13, 9));
    const Vec2 si{ri[0] - o[0], ri[1] - o[1]};
    const Vec2 sj{rj[0] - o[0], rj[1] - o[1]};
    cd sum = 0.0;
    const int kmax = degeneracy_cutoff(spec, ell) + 40;
    for (int k = 0; k < kmax; ++k)
      sum += landau_orbital({ell, k}, si, spec) * std::conj(landau_orbital({ell, k}, sj, spec));
    const cd direct = greens_projected(proj, ri, rj);
    CHECK(std::abs(direct - sum) < 1e-12);
  }
}

TEST_CASE("gauge-origin shifts change only the phase") {
  auto spec = make_spec(20, 0.08);
  const Vec2 ri = spec.site_position(spec.site_index(8, 9));
  const Vec2 rj = spec.site_position(spec.site_index(12, 7));
  const cd a = greens_projected({0, spec}, ri, rj);
  auto shifted = spec;
  shifted.origin = {3.3, -1.2};
  const cd b = greens_projected({0, shifted}, ri, rj);
  CHECK(std::abs(std::abs(a) - std::abs(b)) < 1e-12);
  CHECK(std::abs(a) > 1e-6);
}

TEST_CASE("propagator is invariant under rigid translations") {
  // depends on positions only through r_i - r_j and the gauge phase
  const auto spec = make_spec(40, 0.08);
  const GreensProjection proj{0, spec};
  const Vec2 a1 = {10.0, 10.0}, b1 = {12.0, 11.0};
  const Vec2 a2 = {17.0, 21.0}, b2 = {19.0, 22.0};
  CHECK(std::abs(std::abs(greens_projected(proj, a1, b1)) -
                 std::abs(greens_projected(proj, a2, b2))) < 1e-13);
}

TEST_CASE("propagator scale covariance in l0") {
  // same integer sites, doubled spacing: d/l_B is unchanged, so is G
  auto s1 = make_spec(20, 0.06);
  auto s2 = s1;
  s2.l0 = 2.0;
  const cd g1 = greens_projected({0, s1}, s1.site_position(45), s1.site_position(130));
  const cd g2 = greens_projected({0, s2}, s2.site_position(45), s2.site_position(130));
  CHECK(std::abs(g1 - g2) < 1e-14);
}

TEST_CASE("full propagator sums projections with level phases") {
  const auto spec = make_spec(16, 0.09);
  const Vec2 ri = spec.site_position(60);
  const Vec2 rj = spec.site_position(100);
  const double t = 2.7;
  const auto params = LandauSpectrumParams::from_lattice(spec, CorrectionOrder::Quartic);
  cd expect = 0.0;
  for (int ell = 0; ell < 4; ++ell) {
    const double w = landau_frequency(ell, params, spec.J) - spec.omega_p;
    expect += greens_projected({ell, spec}, ri, rj) * std::exp(cd(0.0, -w * t));
  }
  CHECK(std::abs(full_greens(t, ri, rj, spec, 3) - expect) < 1e-13);
}

TEST_CASE("magnetic length and degeneracy cutoff") {
  const auto spec = make_spec(25, 0.08);
  CHECK(spec.magnetic_length() == doctest::Approx(1.0 / std::sqrt(2 * pi * 0.08)).epsilon(1e-15));
  CHECK(degeneracy_cutoff(spec, 0) >= int(std::ceil(0.08 * 625)));
  auto flat = spec;
  flat.alpha = 0.0;
  CHECK_THROWS_AS(flat.magnetic_length(), std::invalid_argument);
}
