#include "lpp/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpp/continuum.hpp"
#include "lpp/disorder.hpp"
#include "lpp/dynamics.hpp"
#include "lpp/effective_dipole.hpp"
#include "lpp/lpp_model.hpp"
#include "lpp/spectral.hpp"

namespace lpp {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunManifest::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["config_hash"] = config_hash;
  j["code_version"] = code_version;
  j["seed"] = seed;
  j["wall_seconds"] = wall_seconds;
  if (!note.empty()) j["note"] = note;
  j["output_checksums"] = output_checksums;
  j["metrics"] = metrics;
  return j.dump(2) + "\n";
}

std::string resolve_out_dir(const ExperimentConfig& config) {
  if (!config.out_dir.empty()) return config.out_dir;
  const char* root = std::getenv("LPP_SIM_OUT_ROOT");
  const std::string base = root && *root ? root : "lpp-out";
  return base + "/" + experiment_name(config.experiment);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void save_file(const std::string& dir, const std::string& name, const std::string& content,
               RunManifest& m) {
  std::ofstream f(dir + "/" + name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + dir + "/" + name);
  f << content;
  m.output_checksums[name] = fnv1a_hex(content);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

// strict interior maxima above a relative floor
std::vector<int> local_maxima(const Eigen::VectorXd& y, double rel_floor = 0.02) {
  std::vector<int> idx;
  const double floor = rel_floor * y.maxCoeff();
  for (int i = 1; i + 1 < y.size(); ++i)
    if (y(i) > y(i - 1) && y(i) > y(i + 1) && y(i) >= floor) idx.push_back(i);
  return idx;
}

Eigen::VectorXd smooth_gaussian(const Eigen::VectorXd& y, double sigma_samples) {
  if (sigma_samples <= 0.0) return y;
  const int n = static_cast<int>(y.size());
  const int half = std::max(1, static_cast<int>(4.0 * sigma_samples));
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0, wsum = 0.0;
    for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j) {
      const double w =
          std::exp(-0.5 * (j - i) * (j - i) / (sigma_samples * sigma_samples));
      acc += w * y(j);
      wsum += w;
    }
    out(i) = acc / wsum;
  }
  return out;
}

// Maxima that survive smoothing and are mutually resolved: the valley between
// two kept peaks must dip below dip_ratio of the smaller peak. Finite
// ensembles leave the averaged spectrum jagged on the single-line scale, so
// raw sample-to-sample maxima overcount badly.
std::vector<int> resolved_maxima(const Eigen::VectorXd& y_raw, double sigma_samples,
                                 double rel_floor = 0.02, double dip_ratio = 0.7) {
  const Eigen::VectorXd y = smooth_gaussian(y_raw, sigma_samples);
  std::vector<int> cand = local_maxima(y, rel_floor);
  std::sort(cand.begin(), cand.end(), [&](int a, int b) { return y(a) > y(b); });
  std::vector<int> kept;
  for (int c : cand) {
    bool ok = true;
    for (int k : kept) {
      const int lo = std::min(c, k);
      const int hi = std::max(c, k);
      const double valley = y.segment(lo, hi - lo + 1).minCoeff();
      if (valley > dip_ratio * std::min(y(c), y(k))) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(c);
  }
  return kept;
}

void run_butterfly(const ExperimentConfig& c, const std::string& dir, RunManifest& m) {
  const auto& b = c.butterfly;
  const auto alphas = linspace(b.alpha_min, b.alpha_max, b.alpha_steps);
  const ButterflyResult r = butterfly_scan(c.lattice, c.gauge, alphas, b.lowest_k, c.threads);
  std::ostringstream csv;
  csv << "alpha,eigenvalue_index,omega_over_J\n";
  for (size_t a = 0; a < r.alphas.size(); ++a)
    for (size_t i = 0; i < r.eigenvalues[a].size(); ++i)
      csv << fmt(r.alphas[a]) << "," << i << ","
          << fmt((r.eigenvalues[a][i] - c.lattice.omega_p) / c.lattice.J) << "\n";
  save_file(dir, "butterfly.csv", csv.str(), m);
  m.metrics["n_alphas"] = static_cast<double>(r.alphas.size());
}

void run_dos(const ExperimentConfig& c, const std::string& dir, RunManifest& m) {
  const auto& d = c.dos;
  const int rx = d.rx < 0 ? c.lattice.nx / 2 : d.rx;
  const int ry = d.ry < 0 ? c.lattice.ny / 2 : d.ry;
  const auto H = build_hamiltonian(c.lattice, c.gauge);
  const auto spectrum = diagonalize(H, DiagonalizeMode::full(), true);
  const auto offsets = linspace(d.omega_min, d.omega_max, d.n_omega);
  std::vector<double> grid(offsets.size());
  for (size_t i = 0; i < offsets.size(); ++i) grid[i] = c.lattice.omega_p + offsets[i];
  const auto rho = projected_dos(spectrum, c.lattice.site_index(rx, ry), grid, d.broadening);
  std::ostringstream csv;
  csv << "omega_over_J,rho\n";
  for (size_t i = 0; i < grid.size(); ++i)
    csv << fmt(offsets[i] / c.lattice.J) << "," << fmt(rho[i]) << "\n";
  save_file(dir, "dos.csv", csv.str(), m);
}

void run_evolve(const ExperimentConfig& c, const std::string& dir, RunManifest& m) {
  const EmitterSet em = c.resolved_emitters();
  em.validate(c.lattice);
  const auto H = build_hamiltonian(c.lattice, c.gauge);
  const auto t_grid = uniform_grid(c.evolve.t_max, c.evolve.n_steps);
  EvolveOptions opts;
  opts.method = c.evolve.method;
  opts.snapshot_times = c.evolve.snapshots;
  const auto initial =
      SingleExcitationState::excited_emitter(0, em.count(), c.lattice.sites());
  const Trajectory tr = evolve_single_excitation(H, c.lattice, em, c.resolved_dissipation(),
                                                 initial, t_grid, opts);

  std::ostringstream csv;
  csv << "t";
  for (int n = 0; n < em.count(); ++n) csv << ",p_e_" << (n + 1);
  csv << ",photon_norm\n";
  for (size_t i = 0; i < tr.times.size(); ++i) {
    csv << fmt(tr.times[i]);
    for (int n = 0; n < em.count(); ++n) csv << "," << fmt(std::norm(tr.emitter_amplitudes(i, n)));
    csv << "," << fmt(tr.photon_norm[i]) << "\n";
  }
  save_file(dir, "population.csv", csv.str(), m);

  for (size_t k = 0; k < tr.snapshots.size(); ++k) {
    const auto& s = tr.snapshots[k];
    const Eigen::MatrixXd cur = photon_current(s.phi, c.lattice, c.gauge);
    std::ostringstream f;
    f << "x,y,re_phi,im_phi,jx,jy\n";
    for (int i = 0; i < c.lattice.sites(); ++i) {
      const Vec2 r = c.lattice.site_position(i);
      f << fmt(r[0]) << "," << fmt(r[1]) << "," << fmt(s.phi(i).real()) << ","
        << fmt(s.phi(i).imag()) << "," << fmt(cur(i, 0)) << "," << fmt(cur(i, 1)) << "\n";
    }
    save_file(dir, "field_t" + std::to_string(k) + ".csv", f.str(), m);
    m.metrics["snapshot_t" + std::to_string(k)] = s.t;
  }
  m.metrics["final_p_e_1"] = std::norm(tr.emitter_amplitudes(tr.times.size() - 1, 0));
}

void run_lpp(const ExperimentConfig& c, const std::string& dir, RunManifest& m) {
  const EmitterSet em = c.resolved_emitters();
  em.validate(c.lattice);
  const LppModel model =
      make_lpp_model(em, c.lpp.ell, c.lattice, CorrectionOrder::Quartic, c.dissipation.gamma_p);
  const bool lossy = model.gamma_e > 0.0 || model.gamma_p > 0.0;
  const LppSpectrum sp = lpp_spectrum(model, c.lpp.sector, lossy);

  std::ostringstream csv;
  csv << "index,re_omega,im_omega\n";
  for (size_t i = 0; i < sp.eigenvalues.size(); ++i)
    csv << i << "," << fmt(sp.eigenvalues[i].real()) << "," << fmt(sp.eigenvalues[i].imag())
        << "\n";
  save_file(dir, "spectrum.csv", csv.str(), m);

  if (model.gamma_e > 0.0) {
    double lo = c.lpp.omega_min, hi = c.lpp.omega_max;
    if (lo == hi) {
      const double half =
          std::max(4.0 * rabi_frequency(model.alpha, model.g), 10.0 * model.gamma_e);
      lo = model.omega_e - half;
      hi = model.omega_e + half;
    }
    const auto grid = linspace(lo, hi, c.lpp.n_omega);
    const Eigen::MatrixXcd H1 = build_lpp_hamiltonian(model, 1);
    Eigen::VectorXd S =
        excitation_spectrum(H1, model.n, c.lpp.emitter_index, grid, model.gamma_e);
    if (c.lpp.normalize && S.maxCoeff() > 0.0) S /= S.maxCoeff();
    std::ostringstream f;
    f << "omega,S\n";
    for (size_t i = 0; i < grid.size(); ++i) f << fmt(grid[i]) << "," << fmt(S(i)) << "\n";
    save_file(dir, "excitation_spectrum.csv", f.str(), m);
  }

  if (c.lpp.sector == 2 && c.lpp.correlation_state >= 0) {
    const LppSpectrum s2 = lpp_spectrum(model, 2, false);
    const int idx = c.lpp.correlation_state;
    if (idx >= static_cast<int>(s2.eigenvalues.size()))
      throw std::invalid_argument("correlation_state index out of range");
    std::vector<Vec2> points(c.lattice.sites());
    for (int i = 0; i < c.lattice.sites(); ++i) points[i] = c.lattice.site_position(i);
    Vec2 ref = c.lpp.reference;
    if (std::isnan(ref[0])) ref = em.position_of(0, c.lattice);
    const Eigen::VectorXd C =
        two_photon_correlation(s2.eigenvectors.col(idx), model, points, ref);
    std::ostringstream f;
    f << "x,y,C\n";
    for (int i = 0; i < c.lattice.sites(); ++i)
      f << fmt(points[i][0]) << "," << fmt(points[i][1]) << "," << fmt(C(i)) << "\n";
    save_file(dir, "correlation_" + std::to_string(idx) + ".csv", f.str(), m);
  }

  json meta;
  meta["ell"] = model.ell;
  meta["n_emitters"] = model.n;
  meta["alpha"] = model.alpha;
  meta["g"] = model.g;
  meta["omega_e"] = model.omega_e;
  meta["omega_ell"] = model.omega_ell;
  meta["gamma_e"] = model.gamma_e;
  meta["gamma_p"] = model.gamma_p;
  meta["rabi_frequency"] = rabi_frequency(model.alpha, model.g);
  meta["rank"] = model.rank;
  meta["gram_eigenvalues"] = std::vector<double>(
      model.gram_eigenvalues.data(), model.gram_eigenvalues.data() + model.n);
  std::vector<std::vector<double>> gre(model.n), gim(model.n);
  for (int a = 0; a < model.n; ++a)
    for (int b = 0; b < model.n; ++b) {
      gre[a].push_back(model.gram(a, b).real());
      gim[a].push_back(model.gram(a, b).imag());
    }
  meta["gram_re"] = gre;
  meta["gram_im"] = gim;
  meta["sector"] = c.lpp.sector;
  FewExcitationBasis basis{c.lpp.sector, model.n};
  meta["basis_dim"] = basis.dim();
  meta["basis_order"] =
      c.lpp.sector == 1
          ? "spins [0,n), bosons [n,2n)"
          : "spin pairs a<b, spin-boson (p,k) row-major, boson pairs k<=m";
  meta["mode_commutator_defect"] = lpp_mode_commutator_check(model);
  if (model.n == 3) {
    const double lB = c.lattice.magnetic_length();
    const auto& p = model.positions;
    const double theta = triangle_phase(p[0], p[1], p[2], lB);
    meta["theta_triangle"] = theta;
    const double d01 = std::hypot(p[0][0] - p[1][0], p[0][1] - p[1][1]);
    const double d12 = std::hypot(p[1][0] - p[2][0], p[1][1] - p[2][1]);
    const double d20 = std::hypot(p[2][0] - p[0][0], p[2][1] - p[0][1]);
    if (std::abs(d01 - d12) < 1e-9 && std::abs(d12 - d20) < 1e-9) {
      const auto cf = lpp_closed_form_spectrum(d01 / lB, model.ell, theta,
                                               rabi_frequency(model.alpha, model.g),
                                               model.omega_e, model.gamma_e, model.gamma_p);
      std::vector<double> re, im;
      for (const cd& w : cf) {
        re.push_back(w.real());
        im.push_back(w.imag());
      }
      meta["closed_form_re"] = re;
      meta["closed_form_im"] = im;
    }
  }
  save_file(dir, "lpp.json", meta.dump(2) + "\n", m);
}

void run_chiral(const ExperimentConfig& c, const std::string& dir, RunManifest& m) {
  const auto& ch = c.chiral;
  EffectiveCouplingMatrix J;
  J.Jtilde = Eigen::MatrixXcd::Zero(3, 3);
  J.theta = Eigen::MatrixXd::Zero(3, 3);
  const cd hop = ch.g0 * std::exp(cd(0.0, ch.theta_triangle / 3.0));
  const int cyc[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (const auto& e : cyc) {
    J.Jtilde(e[0], e[1]) = hop;
    J.Jtilde(e[1], e[0]) = std::conj(hop);
    J.theta(e[0], e[1]) = ch.theta_triangle / 3.0;
    J.theta(e[1], e[0]) = -ch.theta_triangle / 3.0;
  }
  J.G0 = ch.g0;

  const double period = 2.0 * pi / (std::sqrt(3.0) * std::abs(ch.g0));
  const double t_max = ch.t_max > 0.0 ? ch.t_max : 2.0 * period;
  const auto t_grid = uniform_grid(t_max, ch.n_steps);
  const HardCoreState initial =
      ch.sector == 1 ? HardCoreState::single(0, 3) : HardCoreState::pair(0, 1, 3);
  const Eigen::MatrixXd pop = evolve_hardcore(J, ch.sector, initial, t_grid);

  std::ostringstream csv;
  csv << "t,p1,p2,p3\n";
  for (size_t i = 0; i < t_grid.size(); ++i)
    csv << fmt(t_grid[i]) << "," << fmt(pop(i, 0)) << "," << fmt(pop(i, 1)) << ","
        << fmt(pop(i, 2)) << "\n";
  save_file(dir, "chiral.csv", csv.str(), m);

  const cd det = chirality_determinant(J);
  m.metrics["det_re"] = det.real();
  m.metrics["det_im"] = det.imag();
  m.metrics["period"] = period;
  if (ch.sector == 1 && std::abs(std::remainder(ch.theta_triangle, pi) - 0.5 * pi) < 1e-12) {
    const Eigen::MatrixXd ref = chiral_closed_form(ch.g0, t_grid);
    m.metrics["closed_form_deviation"] =
        (pop - ref.cwiseAbs2()).cwiseAbs().maxCoeff();
  }
}

void run_emitter_butterfly(const ExperimentConfig& c, const std::string& dir, RunManifest& m) {
  const auto& eb = c.emitter_butterfly;
  const double g = c.has_emitters && c.emitters.set.g > 0.0 ? c.emitters.set.g : 0.02;
  const double detuning = eb.detuning != 0.0 ? eb.detuning : -10.0 * g;
  const auto geometry = square_emitter_grid(eb.n_side, eb.d_over_l0 * c.lattice.l0, c.lattice);
  const EmitterLatticeSpectrum s =
      emitter_lattice_spectrum(geometry, eb.ell, g, detuning, c.lattice, eb.cutoff);
  std::ostringstream csv;
  csv << "index,omega_over_Jnn\n";
  for (int i = 0; i < s.omega_over_Jnn.size(); ++i)
    csv << i << "," << fmt(s.omega_over_Jnn(i)) << "\n";
  save_file(dir, "emitter_butterfly.csv", csv.str(), m);
  m.metrics["alpha_eff"] = s.alpha_eff;
  m.metrics["j_nn"] = s.j_nn;
  m.metrics["spacing"] = s.spacing;
}

void run_disorder_sweep(const ExperimentConfig& c, const std::string& dir, RunManifest& m) {
  const EmitterSet em = c.resolved_emitters();
  em.validate(c.lattice);
  DisorderSpec base = *c.disorder;
  if (c.seed != 0) base.seed = c.seed;
  const auto& s = c.sweep;

  double unit = 1.0;
  if (s.delta_unit == "g") unit = em.g;
  if (s.delta_unit == "omega_c") unit = 4.0 * pi * c.lattice.alpha * c.lattice.J;

  json summary;
  summary["mode"] = s.mode;
  summary["delta_unit"] = s.delta_unit;
  summary["seed"] = base.seed;
  summary["n_realizations"] = base.n_realizations;
  json entries = json::array();

  if (s.mode == "spectrum") {
    double lo = s.omega_min, hi = s.omega_max;
    if (lo == hi) {
      const double omega_rabi = rabi_frequency(c.lattice.alpha, em.g);
      double dmax = 0.0;
      for (double d : s.deltas) dmax = std::max(dmax, d * unit);
      const double half = std::max({4.0 * omega_rabi, 10.0 * em.gamma_e, 2.0 * dmax});
      lo = em.omega_e - half;
      hi = em.omega_e + half;
    }
    // the coupled Hamiltonian lives in the frame rotating at omega_p
    std::vector<double> grid = linspace(lo, hi, s.n_omega);
    std::vector<double> grid_frame(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) grid_frame[i] = grid[i] - c.lattice.omega_p;

    for (size_t k = 0; k < s.deltas.size(); ++k) {
      DisorderSpec d = base;
      d.delta_omega_p = s.deltas[k] * unit;
      const EnsembleResult r =
          averaged_excitation_spectrum(c.lattice, c.gauge, em, d, grid_frame,
                                       s.initial_emitter, s.per_realization, c.threads);
      std::ostringstream f;
      f << "omega,S\n";
      for (size_t i = 0; i < grid.size(); ++i)
        f << fmt(grid[i]) << "," << fmt(r.mean(i, 0)) << "\n";
      const std::string name = "spectrum_d" + std::to_string(k) + ".csv";
      save_file(dir, name, f.str(), m);

      const Eigen::VectorXd S = r.mean.col(0);
      const double omega_rabi = rabi_frequency(c.lattice.alpha, em.g);
      const double dw = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
      const double sigma_omega =
          omega_rabi > 0.0 ? omega_rabi / 6.0 : (grid.back() - grid.front()) / 100.0;
      auto maxima = resolved_maxima(S, sigma_omega / dw);
      json e;
      e["delta"] = d.delta_omega_p;
      e["delta_input"] = s.deltas[k];
      e["file"] = name;
      e["n_maxima"] = maxima.size();
      json peaks = json::array();
      for (int i : maxima) peaks.push_back(grid[i]);
      e["peak_omegas"] = peaks;
      if (maxima.size() >= 2)
        e["peak_separation"] = std::abs(grid[maxima[0]] - grid[maxima[1]]);
      entries.push_back(e);
    }
  } else {
    const auto t_grid = uniform_grid(s.t_max, s.n_steps);
    EvolveOptions opts;
    const bool uniform_loss = c.dissipation.gamma_edge == 0.0 &&
                              std::abs(em.gamma_e - c.dissipation.gamma_p) <=
                                  1e-14 * std::max(em.gamma_e, c.dissipation.gamma_p);
    opts.method = uniform_loss ? EvolveMethod::Eigenbasis : EvolveMethod::Rk4;

    for (size_t k = 0; k < s.deltas.size(); ++k) {
      DisorderSpec d = base;
      d.delta_omega_p = s.deltas[k] * unit;
      const EnsembleResult r =
          averaged_population(c.lattice, c.gauge, em, c.resolved_dissipation(), d, t_grid,
                              s.initial_emitter, opts, s.per_realization, c.threads);
      std::ostringstream f;
      f << "t";
      for (int n = 0; n < em.count(); ++n) f << ",p_" << (n + 1);
      for (int n = 0; n < em.count(); ++n) f << ",pinc_" << (n + 1);
      f << "\n";
      for (size_t i = 0; i < t_grid.size(); ++i) {
        f << fmt(t_grid[i]);
        for (int n = 0; n < em.count(); ++n) f << "," << fmt(r.mean(i, n));
        for (int n = 0; n < em.count(); ++n) f << "," << fmt(r.mean_incoherent(i, n));
        f << "\n";
      }
      const std::string name = "population_d" + std::to_string(k) + ".csv";
      save_file(dir, name, f.str(), m);

      json e;
      e["delta"] = d.delta_omega_p;
      e["delta_input"] = s.deltas[k];
      e["file"] = name;
      e["window"] = {0.5 * s.t_max, s.t_max};
      json maxp = json::array(), finalp = json::array();
      for (int n = 0; n < em.count(); ++n) {
        maxp.push_back(window_max(t_grid, r.mean.col(n), 0.5 * s.t_max, s.t_max));
        finalp.push_back(r.mean(t_grid.size() - 1, n));
      }
      e["window_max_p"] = maxp;
      e["final_p"] = finalp;
      entries.push_back(e);
    }
  }
  summary["entries"] = entries;
  save_file(dir, "summary.json", summary.dump(2) + "\n", m);
}

}  // namespace

RunManifest run(const ExperimentConfig& config, const std::string& out_dir_override) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig c = config;
  c.resolve();
  const std::string dir = out_dir_override.empty() ? resolve_out_dir(c) : out_dir_override;
  std::filesystem::create_directories(dir);

  RunManifest m;
  m.experiment = experiment_name(c.experiment);
  m.note = c.note;
  m.seed = c.experiment == Experiment::DisorderSweep && c.disorder
               ? (c.seed != 0 ? c.seed : c.disorder->seed)
               : c.seed;
  m.config_hash = fnv1a_hex(serialize_config(c));

  switch (c.experiment) {
    case Experiment::Butterfly: run_butterfly(c, dir, m); break;
    case Experiment::Dos: run_dos(c, dir, m); break;
    case Experiment::Evolve: run_evolve(c, dir, m); break;
    case Experiment::Lpp: run_lpp(c, dir, m); break;
    case Experiment::Chiral: run_chiral(c, dir, m); break;
    case Experiment::EmitterButterfly: run_emitter_butterfly(c, dir, m); break;
    case Experiment::DisorderSweep: run_disorder_sweep(c, dir, m); break;
  }

  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream f(dir + "/manifest.json", std::ios::binary);
  f << m.to_json();
  return m;
}

}  // namespace lpp
