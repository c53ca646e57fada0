#include "lpp/continuum.hpp"

#include <cmath>
#include <stdexcept>

namespace lpp {

double generalized_laguerre(int ell, int m, double x) {
  if (ell < 0) throw std::invalid_argument("generalized_laguerre: ell must be >= 0");
  if (m < -ell) throw std::invalid_argument("generalized_laguerre: need m >= -ell");
  if (x < 0.0) throw std::invalid_argument("generalized_laguerre: need x >= 0");
  if (ell == 0) return 1.0;
  double lm1 = 1.0;                    // L_0^m
  double l = 1.0 + m - x;              // L_1^m
  for (int n = 1; n < ell; ++n) {
    double lp1 = ((2.0 * n + 1.0 + m - x) * l - (n + m) * lm1) / (n + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

namespace {

// log of n! via lgamma, exact enough for the ratios used here
double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

cd landau_orbital(LandauIndex idx, Vec2 r, const LatticeSpec& spec) {
  if (idx.ell < 0 || idx.k < 0)
    throw std::invalid_argument("landau_orbital: indices must be >= 0");
  if (!(spec.alpha > 0.0))
    throw std::invalid_argument("landau_orbital: requires alpha > 0");
  const double l_B = spec.magnetic_length();
  const double denom = std::sqrt(2.0) * l_B;
  const cd xi(r[0] / denom, r[1] / denom);
  const double rho2 = std::norm(xi);

  // Phi = pref * sqrt(min!/max!) * xi_pow * exp(-rho2/2) * L, with the
  // prefactor sqrt(alpha) chosen so that the discrete sum over lattice sites
  // of |Phi|^2 equals 1.
  const double log_pref = 0.5 * std::log(spec.alpha);
  int lo = std::min(idx.ell, idx.k);
  int hi = std::max(idx.ell, idx.k);
  int p = hi - lo;
  const double log_ratio = 0.5 * (log_factorial(lo) - log_factorial(hi));

  double laguerre = generalized_laguerre(lo, p, rho2);
  if (laguerre == 0.0) return cd(0.0, 0.0);

  // assemble magnitude in log space to survive large |r|
  double log_mag = log_pref + log_ratio - 0.5 * rho2;
  double abs_xi = std::abs(xi);
  if (p > 0) {
    if (abs_xi == 0.0) return cd(0.0, 0.0);
    log_mag += p * std::log(abs_xi);
  }
  log_mag += std::log(std::abs(laguerre));
  if (log_mag < -745.0) return cd(0.0, 0.0);  // underflows to zero anyway

  double phase = (p > 0) ? p * std::arg(idx.k >= idx.ell ? xi : -std::conj(xi)) : 0.0;
  double sign = (laguerre < 0.0) ? -1.0 : 1.0;
  return sign * std::exp(log_mag) * cd(std::cos(phase), std::sin(phase));
}

double landau_frequency(int ell, const LandauSpectrumParams& params, double J) {
  if (ell < 0) throw std::invalid_argument("landau_frequency: ell must be >= 0");
  double omega = params.omega_b + params.omega_c * (ell + 0.5);
  if (params.order == CorrectionOrder::Quartic) {
    if (J == 0.0) throw std::invalid_argument("landau_frequency: quartic order needs J != 0");
    omega -= params.omega_c * params.omega_c / (32.0 * J) *
             (2.0 * ell * ell + 2.0 * ell + 1.0);
  }
  return omega;
}

double gauge_phase_theta(Vec2 r_i, Vec2 r_j, double l_B) {
  if (!(l_B > 0.0)) throw std::invalid_argument("gauge_phase_theta: l_B must be positive");
  return -(r_i[0] * r_j[1] - r_j[0] * r_i[1]) / (2.0 * l_B * l_B);
}

cd greens_projected(const GreensProjection& proj, Vec2 r_i, Vec2 r_j) {
  const LatticeSpec& spec = proj.spec;
  if (!(spec.alpha > 0.0))
    throw std::invalid_argument("greens_projected: requires alpha > 0");
  const double l_B = spec.magnetic_length();
  const Vec2 o = spec.gauge_origin();
  const Vec2 ri{r_i[0] - o[0], r_i[1] - o[1]};
  const Vec2 rj{r_j[0] - o[0], r_j[1] - o[1]};
  const double theta = gauge_phase_theta(ri, rj, l_B);
  const Vec2 d{ri[0] - rj[0], ri[1] - rj[1]};
  const cd phi = landau_orbital({proj.ell, proj.ell}, d, spec);
  return std::sqrt(spec.alpha) * cd(std::cos(theta), std::sin(theta)) * phi;
}

cd full_greens(double t, Vec2 r_i, Vec2 r_j, const LatticeSpec& spec, int ell_max,
               CorrectionOrder order) {
  if (ell_max < 0) throw std::invalid_argument("full_greens: ell_max must be >= 0");
  const auto params = LandauSpectrumParams::from_lattice(spec, order);
  cd sum(0.0, 0.0);
  for (int ell = 0; ell <= ell_max; ++ell) {
    GreensProjection proj{ell, spec};
    cd g = greens_projected(proj, r_i, r_j);
    // frequencies in the frame rotating at omega_p
    double w = landau_frequency(ell, params, spec.J) - spec.omega_p;
    sum += g * std::exp(cd(0.0, -w * t));
  }
  return sum;
}

}  // namespace lpp
