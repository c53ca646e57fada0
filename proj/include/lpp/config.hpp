#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpp/disorder.hpp"
#include "lpp/dynamics.hpp"
#include "lpp/types.hpp"

namespace lpp {

enum class Experiment { Butterfly, Dos, Evolve, Lpp, Chiral, EmitterButterfly, DisorderSweep };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct ButterflyParams {
  double alpha_min = 0.0;
  double alpha_max = 0.5;
  int alpha_steps = 51;
  int lowest_k = 0;  // 0 = full dense spectrum
};

struct DosParams {
  int rx = -1;  // -1 = lattice center
  int ry = -1;
  double omega_min = -4.5;
  double omega_max = 4.5;
  int n_omega = 600;
  double broadening = 0.05;
};

struct EvolveParams {
  double t_max = 100.0;
  int n_steps = 1000;
  EvolveMethod method = EvolveMethod::Rk4;
  std::vector<double> snapshots;
  int ell = 0;  // level used for field comparisons and resonance resolution
};

struct LppParams {
  int ell = 0;
  int sector = 1;
  int emitter_index = 0;
  double omega_min = 0.0;  // window centered automatically when min == max
  double omega_max = 0.0;
  int n_omega = 400;
  bool normalize = false;
  int correlation_state = -1;  // sector-2 eigenstate index; -1 disables the map
  Vec2 reference{std::nan(""), std::nan("")};
};

struct ChiralParams {
  double theta_triangle = 0.5 * pi;
  double g0 = 1.0;
  double t_max = 0.0;  // 0 = two closed-form periods
  int n_steps = 800;
  int sector = 1;
};

struct EmitterButterflyParams {
  double d_over_l0 = 2.0;
  int n_side = 20;
  int ell = 0;
  double detuning = 0.0;  // omega_e - omega_ell; 0 = auto (-10 g)
  double cutoff = 0.0;    // coupling cutoff radius, 0 = all-to-all
};

struct DisorderSweepParams {
  std::vector<double> deltas;          // disorder widths, units of delta_unit
  std::string mode = "spectrum";       // "spectrum" or "population"
  std::string delta_unit = "J";        // "J", "g" or "omega_c"
  double omega_min = 0.0;
  double omega_max = 0.0;
  int n_omega = 400;
  double t_max = 0.0;
  int n_steps = 1000;
  int initial_emitter = 0;
  bool per_realization = false;
};

// Emitter block plus optional resonance targeting: when resolve_resonance is
// set, omega_e is derived from the quartic Landau frequency of
// resonance_level plus the offsets (one in units of J, one in omega_c).
struct EmitterSettings {
  EmitterSet set;
  bool resolve_resonance = false;
  int resonance_level = 0;
  double resonance_offset = 0.0;
  double resonance_offset_omega_c = 0.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Evolve;
  LatticeSpec lattice;
  Gauge gauge;
  EmitterSettings emitters;
  bool has_emitters = false;
  DissipationProfile dissipation;
  bool dissipation_auto_extent = true;  // R0/width from lattice unless given
  std::optional<DisorderSpec> disorder;

  ButterflyParams butterfly;
  DosParams dos;
  EvolveParams evolve;
  LppParams lpp;
  ChiralParams chiral;
  EmitterButterflyParams emitter_butterfly;
  DisorderSweepParams sweep;

  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  double input_frequency_mhz = 0.0;  // 0 = dimensionless inputs (units of J)
  std::string note;                  // free-form metadata copied to the manifest

  // omega_e after resonance resolution (call resolve() first)
  void resolve();
  EmitterSet resolved_emitters() const;
  DissipationProfile resolved_dissipation() const;
};

// Parse or validation failure; `failures` lists every problem found.
struct ConfigError : std::runtime_error {
  std::vector<std::string> failures;
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
  ConfigError(const std::string& msg, std::vector<std::string> f)
      : std::runtime_error(msg), failures(std::move(f)) {}
};

// Load from a file path or a built-in preset name (paper-microwave, fig2,
// fig4a, figS1, figS2). Throws ConfigError listing all validation failures.
ExperimentConfig load_config(const std::string& path_or_preset);

// Parse config text directly; `origin` names the source in error messages.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

// Canonical round-trippable serialization.
std::string serialize_config(const ExperimentConfig& config);

bool is_preset_name(const std::string& name);
std::string preset_text(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace lpp
