#include "lpp/lattice.hpp"

#include <cstdlib>

namespace lpp {

SparseHermitianOperator SparseHermitianOperator::from_upper(
    int dim, const std::vector<Eigen::Triplet<cd>>& upper) {
  std::vector<Eigen::Triplet<cd>> closed;
  closed.reserve(2 * upper.size());
  for (const auto& t : upper) {
    closed.push_back(t);
    if (t.row() != t.col())
      closed.emplace_back(t.col(), t.row(), std::conj(t.value()));
  }
  SparseHermitianOperator op;
  op.dim = dim;
  op.mat.resize(dim, dim);
  op.mat.setFromTriplets(closed.begin(), closed.end());
  op.mat.makeCompressed();
  return op;
}

double SparseHermitianOperator::hermiticity_defect() const {
  Eigen::SparseMatrix<cd> d = mat - Eigen::SparseMatrix<cd>(mat.adjoint());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<cd>::InnerIterator it(d, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

double peierls_phase(const Gauge& gauge, double alpha, Vec2 r_i, Vec2 r_j,
                     Vec2 origin) {
  // midpoint rule, exact for a linear A
  const double eB = 2.0 * pi * alpha;
  const double mx = 0.5 * (r_i[0] + r_j[0]) - origin[0];
  const double my = 0.5 * (r_i[1] + r_j[1]) - origin[1];
  const double dx = r_i[0] - r_j[0];
  const double dy = r_i[1] - r_j[1];
  if (gauge.kind == GaugeKind::Symmetric)
    return eB * 0.5 * (mx * dy - my * dx);
  return eB * mx * dy;  // LandauX: A = B(0, x, 0)
}

double peierls_phase(const LatticeSpec& spec, const Gauge& gauge,
                     std::array<int, 2> site_i, std::array<int, 2> site_j) {
  const int dx = site_i[0] - site_j[0];
  const int dy = site_i[1] - site_j[1];
  if (std::abs(dx) + std::abs(dy) != 1)
    throw std::invalid_argument("peierls_phase requires nearest-neighbor sites");
  const double l0 = spec.l0;
  return peierls_phase(gauge, spec.alpha,
                       {site_i[0] * l0, site_i[1] * l0},
                       {site_j[0] * l0, site_j[1] * l0}, spec.gauge_origin());
}

SparseHermitianOperator build_hamiltonian(const LatticeSpec& spec, const Gauge& gauge,
                                          const std::vector<double>* onsite_shift) {
  spec.validate();
  const int M = spec.sites();
  if (onsite_shift && static_cast<int>(onsite_shift->size()) != M)
    throw std::invalid_argument("onsite_shift length must equal the site count");
  std::vector<Eigen::Triplet<cd>> upper;
  upper.reserve(3 * M);
  for (int y = 0; y < spec.ny; ++y)
    for (int x = 0; x < spec.nx; ++x) {
      const int i = spec.site_index(x, y);
      const double diag = spec.omega_p + (onsite_shift ? (*onsite_shift)[i] : 0.0);
      if (diag != 0.0) upper.emplace_back(i, i, cd(diag, 0.0));
      // bonds to +x and +y neighbors; H[j,i] = -J e^{i phi(j<-i)}
      const std::array<std::array<int, 2>, 2> nbrs{{{x + 1, y}, {x, y + 1}}};
      for (const auto& nb : nbrs) {
        if (nb[0] >= spec.nx || nb[1] >= spec.ny) continue;
        const int j = spec.site_index(nb[0], nb[1]);
        const double ph = peierls_phase(spec, gauge, nb, {x, y});
        upper.emplace_back(i, j, std::conj(-spec.J * std::exp(cd(0.0, ph))));
      }
    }
  return SparseHermitianOperator::from_upper(M, upper);
}

std::vector<double> plaquette_flux_check(const LatticeSpec& spec, const Gauge& gauge) {
  std::vector<double> flux;
  flux.reserve((spec.nx - 1) * (spec.ny - 1));
  for (int y = 0; y + 1 < spec.ny; ++y)
    for (int x = 0; x + 1 < spec.nx; ++x) {
      // counterclockwise around the plaquette with lower-left corner (x, y)
      const std::array<std::array<int, 2>, 4> c{
          {{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}}};
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += peierls_phase(spec, gauge, c[(k + 1) % 4], c[k]);
      flux.push_back(s);
    }
  return flux;
}

}  // namespace lpp
