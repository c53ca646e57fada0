#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lpp/config.hpp"
#include "lpp/types.hpp"

using namespace lpp;

namespace {

std::vector<std::string> expect_failures(const std::string& text) {
  try {
    parse_config(text, "test");
  } catch (const ConfigError& e) {
    return e.failures;
  }
  FAIL("expected a ConfigError");
  return {};
}

bool mentions(const std::vector<std::string>& failures, const std::string& needle) {
  return std::any_of(failures.begin(), failures.end(), [&](const std::string& f) {
    return f.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("experiment names round-trip and reject unknowns") {
  for (const char* name : {"butterfly", "dos", "evolve", "lpp", "chiral",
                           "emitter-butterfly", "disorder-sweep"}) {
    CHECK(experiment_name(experiment_from_name(name)) == name);
  }
  CHECK_THROWS_AS(experiment_from_name("spectroscopy"), ConfigError);
}

TEST_CASE("minimal config picks documented defaults") {
  auto c = parse_config("experiment = butterfly\n", "test");
  CHECK(c.experiment == Experiment::Butterfly);
  CHECK(c.lattice.nx == 2);
  CHECK(c.lattice.ny == 2);
  CHECK(c.lattice.J == 1.0);
  CHECK(c.lattice.alpha == 0.0);
  CHECK(c.gauge.kind == GaugeKind::Symmetric);
  CHECK(std::isnan(c.lattice.origin[0]));
  CHECK(c.butterfly.alpha_min == 0.0);
  CHECK(c.butterfly.alpha_max == 0.5);
  CHECK(c.butterfly.alpha_steps == 51);
  CHECK(c.threads == 1);
  CHECK(c.seed == 0);
  CHECK(c.input_frequency_mhz == 0.0);
  CHECK_FALSE(c.has_emitters);
  CHECK_FALSE(c.disorder.has_value());
}

TEST_CASE("ini parsing: comments, duplicate keys, custom gauge and origin") {
  const std::string text =
      "experiment = dos  # trailing comment\n"
      "\n"
      "[lattice]\n"
      "nx = 8\n"
      "ny = 8\n"
      "alpha = 0.1   # a quarter of the way\n"
      "alpha = 0.25\n"
      "gauge = landau-x\n"
      "origin = 1.5 2.0\n";
  auto c = parse_config(text, "test");
  CHECK(c.experiment == Experiment::Dos);
  CHECK(c.lattice.alpha == 0.25);  // last assignment wins
  CHECK(c.gauge.kind == GaugeKind::LandauX);
  CHECK(c.lattice.origin[0] == 1.5);
  CHECK(c.lattice.origin[1] == 2.0);
}

TEST_CASE("emitter positions parse as an (x,y) list") {
  const std::string text =
      "experiment = evolve\n"
      "[lattice]\n"
      "nx = 12\nny = 12\nalpha = 0.08\n"
      "[emitters]\n"
      "positions = (3,4) (5,6) (7, 8)\n"
      "omega_e = -3.5\n"
      "g = 0.1\n"
      "[evolve]\n"
      "t_max = 10\n";
  auto c = parse_config(text, "test");
  REQUIRE(c.emitters.set.count() == 3);
  CHECK(c.emitters.set.positions[0] == std::array<int, 2>{3, 4});
  CHECK(c.emitters.set.positions[2] == std::array<int, 2>{7, 8});

  CHECK(mentions(expect_failures("experiment = evolve\n[lattice]\nnx = 12\nny = 12\n"
                                 "alpha=0.08\n[emitters]\npositions = 3,4\nomega_e = -1\n"
                                 "g = 0.1\n"),
                 "expected position list"));
}

TEST_CASE("parse errors carry origin, line and column") {
  try {
    parse_config("experiment = dos\n[lattice\nnx = 4\n", "broken.ini");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("broken.ini:2:1: unterminated section header") !=
          std::string::npos);
  }
  try {
    parse_config("experiment: dos\n", "broken.ini");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("broken.ini:1:1: expected key = value") !=
          std::string::npos);
  }
}

TEST_CASE("validation reports every failure at once") {
  const std::string text =
      "experiment = evolve\n"
      "[lattice]\n"
      "nx = 1\n"
      "ny = 12\n"
      "alpha = 1.5\n"
      "[emitters]\n"
      "positions = (3,4) (40,40) (3,4)\n"
      "omega_e = -3.5\n"
      "g = -0.1\n"
      "[evolve]\n"
      "t_max = -5\n";
  auto failures = expect_failures(text);
  CHECK(failures.size() >= 6);
  CHECK(mentions(failures, "lattice.nx: must be >= 2"));
  CHECK(mentions(failures, "lattice.alpha: must lie in [0, 1)"));
  CHECK(mentions(failures, "emitters.positions[1]: outside lattice"));
  CHECK(mentions(failures, "emitters.positions[2]: coincides with positions[0]"));
  CHECK(mentions(failures, "emitters.g: must be >= 0"));
  CHECK(mentions(failures, "evolve.t_max: must be positive"));
}

TEST_CASE("unknown keys are rejected with their location") {
  auto failures = expect_failures(
      "experiment = butterfly\n[lattice]\nnx = 4\nny = 4\nbanana = 3\n");
  CHECK(mentions(failures, "lattice.banana: unknown key (line 5)"));
}

TEST_CASE("type failures carry line and column") {
  auto failures = expect_failures(
      "experiment = butterfly\n[lattice]\nnx = not-a-number\nny = 4\n");
  CHECK(mentions(failures, "lattice.nx"));
  CHECK(mentions(failures, "(line 3"));
}

TEST_CASE("resonance targeting conflicts with an explicit omega_e") {
  const std::string text =
      "experiment = evolve\n"
      "[lattice]\nnx = 12\nny = 12\nalpha = 0.08\n"
      "[emitters]\npositions = (6,6)\nresonance_level = 0\nomega_e = -3.5\ng = 0.1\n"
      "[evolve]\nt_max = 10\n";
  CHECK(mentions(expect_failures(text),
                 "emitters.omega_e: give either omega_e or resonance_level, not both"));
}

TEST_CASE("disorder sweep demands a disorder section") {
  const std::string text =
      "experiment = disorder-sweep\n"
      "[lattice]\nnx = 10\nny = 10\nalpha = 0.08\n"
      "[emitters]\npositions = (5,5)\nomega_e = -3.5\ng = 0.1\ngamma_e = 0.005\n"
      "[disorder-sweep]\ndeltas = 0.5 1\n";
  CHECK(mentions(expect_failures(text), "disorder: section required for disorder-sweep"));
}

TEST_CASE("megahertz inputs need the lattice J scale") {
  auto failures = expect_failures(
      "experiment = butterfly\n[units]\nfrequency = MHz\n[lattice]\nnx = 4\nny = 4\n");
  CHECK(mentions(failures, "lattice.J: must be given (in MHz) when units.frequency = MHz"));

  auto bad_unit = expect_failures(
      "experiment = butterfly\n[units]\nfrequency = GHz\n[lattice]\nnx = 4\nny = 4\n");
  CHECK(mentions(bad_unit, "units.frequency: must be 'J' or 'MHz'"));
}

TEST_CASE("all presets load, resolve and round-trip through serialization") {
  auto names = preset_names();
  CHECK(names.size() == 5);
  for (const auto& name : names) {
    CHECK(is_preset_name(name));
    auto c = load_config(name);
    const std::string text = serialize_config(c);
    auto reparsed = parse_config(text, "roundtrip:" + name);
    CHECK(serialize_config(reparsed) == text);
  }
  CHECK_FALSE(is_preset_name("fig9"));
}

TEST_CASE("microwave preset normalizes every frequency by J") {
  auto c = load_config("paper-microwave");
  CHECK(c.experiment == Experiment::Evolve);
  CHECK(c.input_frequency_mhz == 100.0);
  CHECK(c.lattice.J == 1.0);
  CHECK(c.lattice.omega_p == 54.0);
  CHECK(c.emitters.set.omega_e == 50.0);
  CHECK(c.emitters.set.g == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(c.emitters.set.gamma_e == doctest::Approx(5e-4).epsilon(1e-15));
  CHECK(c.dissipation.gamma_p == doctest::Approx(5e-4).epsilon(1e-15));
  REQUIRE(c.disorder.has_value());
  CHECK(c.disorder->delta_omega_p == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(c.disorder->seed == 1);
  CHECK(c.disorder->n_realizations == 100);
}

TEST_CASE("fig2 preset resolves the emitter onto the lowest flux level") {
  auto c = load_config("fig2");
  CHECK(c.lattice.nx == 50);
  CHECK(c.lattice.ny == 50);
  CHECK(c.lattice.alpha == 0.08);
  CHECK(c.emitters.resolve_resonance);
  CHECK(c.emitters.resonance_level == 0);
  // quartic level-0 frequency for alpha = 0.08, J = 1, omega_p = 0
  CHECK(std::abs(c.emitters.set.omega_e - (-3.5289279095091191)) < 1e-12);
  auto dis = c.resolved_dissipation();
  CHECK(dis.gamma_p == doctest::Approx(4e-4).epsilon(1e-15));
  CHECK(dis.gamma_edge == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(dis.R0 == doctest::Approx(25.0).epsilon(1e-14));  // half the lattice extent
  CHECK(dis.width == doctest::Approx(2.0).epsilon(1e-14));
  REQUIRE(c.evolve.snapshots.size() == 1);
  CHECK(c.evolve.snapshots[0] == doctest::Approx(39.67).epsilon(1e-15));
}

TEST_CASE("fig4a preset is the quarter-flux chiral triangle") {
  auto c = load_config("fig4a");
  CHECK(c.experiment == Experiment::Chiral);
  CHECK(std::abs(c.chiral.theta_triangle - 0.5 * pi) < 1e-15);
  CHECK(c.chiral.g0 == 1.0);
  CHECK(c.chiral.t_max == 0.0);  // auto: two closed-form periods
  CHECK(c.chiral.sector == 1);
}

TEST_CASE("disorder-sweep presets carry the advertised sweep grids") {
  auto s1 = load_config("figS1");
  CHECK(s1.experiment == Experiment::DisorderSweep);
  CHECK(s1.sweep.mode == "spectrum");
  CHECK(s1.sweep.delta_unit == "g");
  REQUIRE(s1.sweep.deltas.size() == 2);
  CHECK(s1.sweep.deltas[0] == 0.7);
  CHECK(s1.sweep.deltas[1] == 2.0);
  REQUIRE(s1.disorder.has_value());
  CHECK(s1.disorder->n_realizations == 100);

  auto s2 = load_config("figS2");
  CHECK(s2.experiment == Experiment::DisorderSweep);
  CHECK(s2.sweep.mode == "population");
  CHECK(s2.sweep.delta_unit == "omega_c");
  CHECK(s2.sweep.deltas.size() == 4);
  CHECK(s2.emitters.set.count() == 3);
  CHECK(std::abs(s2.lattice.alpha - 1.0 / 30.0) < 1e-16);
  CHECK(s2.emitters.resonance_offset_omega_c == doctest::Approx(-0.35).epsilon(1e-15));
  CHECK(s2.dissipation.gamma_p == doctest::Approx(1e-5).epsilon(1e-15));
  CHECK(s2.emitters.set.gamma_e == doctest::Approx(1e-5).epsilon(1e-15));
}

TEST_CASE("explicit dissipation extent is preserved, auto extent follows the lattice") {
  const std::string text =
      "experiment = evolve\n"
      "[lattice]\nnx = 30\nny = 20\nalpha = 0.08\n"
      "[emitters]\npositions = (15,10)\nomega_e = -3.5\ng = 0.1\n"
      "[dissipation]\ngamma_p = 1e-4\ngamma_edge = 0.2\nR0 = 7\nwidth = 1.5\n"
      "[evolve]\nt_max = 10\n";
  auto c = parse_config(text, "test");
  CHECK_FALSE(c.dissipation_auto_extent);
  auto dis = c.resolved_dissipation();
  CHECK(dis.R0 == 7.0);
  CHECK(dis.width == 1.5);

  const std::string auto_text =
      "experiment = evolve\n"
      "[lattice]\nnx = 30\nny = 20\nalpha = 0.08\n"
      "[emitters]\npositions = (15,10)\nomega_e = -3.5\ng = 0.1\n"
      "[dissipation]\ngamma_p = 1e-4\ngamma_edge = 0.2\n"
      "[evolve]\nt_max = 10\n";
  auto a = parse_config(auto_text, "test");
  CHECK(a.dissipation_auto_extent);
  auto auto_dis = a.resolved_dissipation();
  CHECK(auto_dis.R0 == doctest::Approx(10.0).epsilon(1e-14));  // half of min(nx, ny)
  CHECK(auto_dis.width == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("load_config rejects missing files") {
  CHECK_THROWS_AS(load_config("/nonexistent/path/sim.ini"), ConfigError);
}

TEST_CASE("serialization is canonical: parse(serialize(c)) is a fixed point") {
  const std::string text =
      "experiment = lpp\n"
      "seed = 77\n"
      "threads = 2\n"
      "[lattice]\nnx = 20\nny = 20\nalpha = 0.08\ngauge = landau-x\norigin = 2 3\n"
      "[emitters]\npositions = (10,10) (12,11)\nresonance_level = 1\n"
      "resonance_offset = 0.125\ng = 0.08\ngamma_e = 0.004\n"
      "[dissipation]\ngamma_p = 0.001\n"
      "[lpp]\nsector = 2\nn_omega = 321\ncorrelation_state = 0\nreference = 10 10\n";
  auto c = parse_config(text, "test");
  CHECK(c.lpp.sector == 2);
  CHECK(c.lpp.correlation_state == 0);
  const std::string canon = serialize_config(c);
  auto again = parse_config(canon, "roundtrip");
  CHECK(serialize_config(again) == canon);
  CHECK(again.emitters.set.omega_e == c.emitters.set.omega_e);
  CHECK(again.lattice.origin[0] == 2.0);
  CHECK(again.gauge.kind == GaugeKind::LandauX);
}
