#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpp/run.hpp"

namespace {

// flag values collected before the config exists; applied on top of it after load
struct Overrides {
  std::optional<int> nx, ny, alpha_steps, rx, ry, sector, n_side, ndis;
  std::optional<double> alpha, alpha_min, alpha_max, broadening;
  std::optional<double> theta_triangle, g0, tmax, d_over_l0;
  std::optional<std::vector<double>> deltas;
};

void apply(const Overrides& o, lpp::Experiment experiment, lpp::ExperimentConfig& c) {
  c.experiment = experiment;
  if (o.nx) c.lattice.nx = *o.nx;
  if (o.ny) c.lattice.ny = *o.ny;
  if (o.alpha) c.lattice.alpha = *o.alpha;
  if (o.alpha_min) c.butterfly.alpha_min = *o.alpha_min;
  if (o.alpha_max) c.butterfly.alpha_max = *o.alpha_max;
  if (o.alpha_steps) c.butterfly.alpha_steps = *o.alpha_steps;
  if (o.rx) c.dos.rx = *o.rx;
  if (o.ry) c.dos.ry = *o.ry;
  if (o.broadening) c.dos.broadening = *o.broadening;
  if (o.sector) {
    c.lpp.sector = *o.sector;
    c.chiral.sector = *o.sector;
  }
  if (o.theta_triangle) c.chiral.theta_triangle = *o.theta_triangle;
  if (o.g0) c.chiral.g0 = *o.g0;
  if (o.tmax) c.chiral.t_max = *o.tmax;
  if (o.d_over_l0) c.emitter_butterfly.d_over_l0 = *o.d_over_l0;
  if (o.n_side) c.emitter_butterfly.n_side = *o.n_side;
  if (o.deltas) c.sweep.deltas = *o.deltas;
  if (o.ndis) {
    if (!c.disorder) c.disorder.emplace();
    c.disorder->n_realizations = *o.ndis;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-level emitters on a flux-threaded photonic lattice"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "config file path or preset name");
  app.add_option("--out", out, "output directory (default $LPP_SIM_OUT_ROOT/<experiment>)");
  app.add_option("--seed", seed, "override the disorder seed");
  app.add_option("--threads", threads, "worker threads for sweeps and ensembles");

  Overrides o;
  auto* butterfly = app.add_subcommand("butterfly", "eigenvalues over a flux sweep");
  butterfly->add_option("--nx", o.nx);
  butterfly->add_option("--ny", o.ny);
  butterfly->add_option("--alpha-min", o.alpha_min);
  butterfly->add_option("--alpha-max", o.alpha_max);
  butterfly->add_option("--alpha-steps", o.alpha_steps);

  auto* dos = app.add_subcommand("dos", "local density of states at one site");
  dos->add_option("--alpha", o.alpha);
  dos->add_option("--rx", o.rx);
  dos->add_option("--ry", o.ry);
  dos->add_option("--broadening", o.broadening);

  auto* evolve = app.add_subcommand("evolve", "emitter-photon time evolution");

  auto* lppcmd = app.add_subcommand("lpp", "few-mode polariton model outputs");
  lppcmd->add_option("--sector", o.sector, "excitation sector (1 or 2)");

  auto* chiral = app.add_subcommand("chiral", "hard-core triangle dynamics");
  chiral->add_option("--theta-triangle", o.theta_triangle);
  chiral->add_option("--g0", o.g0);
  chiral->add_option("--tmax", o.tmax);

  auto* eb = app.add_subcommand("emitter-butterfly", "spectrum of an emitter lattice");
  eb->add_option("--d-over-l0", o.d_over_l0);
  eb->add_option("--alpha", o.alpha);
  eb->add_option("--n", o.n_side);

  auto* sweep = app.add_subcommand("disorder-sweep", "observables under frequency disorder");
  sweep->add_option("--deltas", o.deltas, "disorder widths (units per config delta_unit)");
  sweep->add_option("--ndis", o.ndis, "realizations per width");

  for (auto* s : {butterfly, dos, evolve, lppcmd, chiral, eb, sweep}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    lpp::ExperimentConfig config;
    if (!config_path.empty()) {
      config = lpp::load_config(config_path);
    } else if (app.get_subcommands().empty()) {
      std::fprintf(stderr, "%s\n", app.help().c_str());
      return 2;
    }

    lpp::Experiment experiment = config.experiment;
    if (butterfly->parsed()) experiment = lpp::Experiment::Butterfly;
    if (dos->parsed()) experiment = lpp::Experiment::Dos;
    if (evolve->parsed()) experiment = lpp::Experiment::Evolve;
    if (lppcmd->parsed()) experiment = lpp::Experiment::Lpp;
    if (chiral->parsed()) experiment = lpp::Experiment::Chiral;
    if (eb->parsed()) experiment = lpp::Experiment::EmitterButterfly;
    if (sweep->parsed()) experiment = lpp::Experiment::DisorderSweep;
    apply(o, experiment, config);
    if (!out.empty()) config.out_dir = out;
    if (seed != 0) config.seed = seed;
    if (threads > 0) config.threads = threads;

    // flag overrides may change what is valid; recheck through the canonical text
    config = lpp::parse_config(lpp::serialize_config(config), "<command line>");
    config.out_dir = out.empty() ? config.out_dir : out;

    const lpp::RunManifest manifest = lpp::run(config);
    std::printf("%s: wrote %zu files to %s (%.2fs)\n", manifest.experiment.c_str(),
                manifest.output_checksums.size(), lpp::resolve_out_dir(config).c_str(),
                manifest.wall_seconds);
    return 0;
  } catch (const lpp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const lpp::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
