#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpp {

using cd = std::complex<double>;
using Vec2 = std::array<double, 2>;

constexpr double pi = 3.14159265358979323846;

// Thrown when a result cannot be trusted numerically (non-convergence,
// non-PSD matrix, integrator blow-up). CLI maps it to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GaugeKind { Symmetric, LandauX };

struct Gauge {
  GaugeKind kind = GaugeKind::Symmetric;
};

// Square lattice of nx*ny photonic sites. All lengths are in units of the
// lattice spacing l0 and all frequencies in units of the hopping J unless a
// config says otherwise. `origin` is the coordinate origin used by the
// symmetric gauge, defaulting to the lattice center.
struct LatticeSpec {
  int nx = 2;
  int ny = 2;
  double l0 = 1.0;
  double omega_p = 0.0;
  double J = 1.0;
  double alpha = 0.0;
  Vec2 origin{std::nan(""), std::nan("")};

  int sites() const { return nx * ny; }
  int site_index(int x, int y) const { return y * nx + x; }
  Vec2 site_position(int i) const {
    return {(i % nx) * l0, (i / nx) * l0};
  }
  Vec2 center() const { return {0.5 * (nx - 1) * l0, 0.5 * (ny - 1) * l0}; }
  Vec2 gauge_origin() const {
    if (std::isnan(origin[0]) || std::isnan(origin[1])) return center();
    return origin;
  }
  double magnetic_length() const {
    if (alpha <= 0.0) throw std::invalid_argument("magnetic length undefined at alpha = 0");
    return l0 / std::sqrt(2.0 * pi * alpha);
  }
  void validate() const {
    if (nx < 2 || ny < 2) throw std::invalid_argument("lattice needs nx, ny >= 2");
    if (J <= 0.0) throw std::invalid_argument("hopping J must be positive");
    if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("alpha must lie in [0, 1)");
    if (l0 <= 0.0) throw std::invalid_argument("lattice spacing must be positive");
  }
};

// Fermi-profile photon loss: gamma_p in the bulk rising to gamma_p+gamma_edge
// beyond radius R0 from the lattice center, over a scale `width`.
struct DissipationProfile {
  double gamma_p = 0.0;
  double gamma_edge = 0.0;
  double R0 = 0.0;
  double width = 2.0;

  double rate_at(double r) const {
    if (gamma_edge == 0.0) return gamma_p;
    return gamma_p + gamma_edge / (1.0 + std::exp(-(r - R0) / width));
  }
  static DissipationProfile uniform(double gamma_p) { return {gamma_p, 0.0, 0.0, 2.0}; }
  static DissipationProfile absorbing(const LatticeSpec& spec, double gamma_p,
                                      double gamma_edge) {
    return {gamma_p, gamma_edge, 0.5 * std::min(spec.nx, spec.ny) * spec.l0, 2.0 * spec.l0};
  }
};

inline std::vector<double> per_site_loss(const LatticeSpec& spec,
                                         const DissipationProfile& d) {
  std::vector<double> out(spec.sites());
  const Vec2 c = spec.center();
  for (int i = 0; i < spec.sites(); ++i) {
    const Vec2 r = spec.site_position(i);
    out[i] = d.rate_at(std::hypot(r[0] - c[0], r[1] - c[1]));
  }
  return out;
}

// Two-level emitters, each coupled to exactly one lattice site.
struct EmitterSet {
  std::vector<std::array<int, 2>> positions;  // integer site coordinates
  double omega_e = 0.0;
  double g = 0.0;
  double gamma_e = 0.0;

  int count() const { return static_cast<int>(positions.size()); }
  void validate(const LatticeSpec& spec) const {
    if (positions.empty()) throw std::invalid_argument("emitter set is empty");
    for (size_t n = 0; n < positions.size(); ++n) {
      const auto& p = positions[n];
      if (p[0] < 0 || p[0] >= spec.nx || p[1] < 0 || p[1] >= spec.ny)
        throw std::invalid_argument("emitter " + std::to_string(n) + " outside lattice");
      for (size_t m = n + 1; m < positions.size(); ++m)
        if (positions[m] == p)
          throw std::invalid_argument("emitters " + std::to_string(n) + " and " +
                                      std::to_string(m) + " coincide");
    }
  }
  Vec2 position_of(int n, const LatticeSpec& spec) const {
    return {positions[n][0] * spec.l0, positions[n][1] * spec.l0};
  }
};

}  // namespace lpp
