#include <cmath>
#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "tflux/diagnostics.hpp"
#include "tflux/config.hpp"

using namespace tflux;

namespace {

std::string message_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config: units") {
  CHECK(parse_frequency("100") == 100.0);
  CHECK(parse_frequency("100Hz") == 100.0);
  CHECK(parse_frequency("2.5kHz") == 2500.0);
  CHECK(parse_frequency("3min") == doctest::Approx(1.0 / 180.0).epsilon(1e-15));
  CHECK(parse_frequency("180s") == doctest::Approx(1.0 / 180.0).epsilon(1e-15));
  CHECK(parse_frequency("2h") == doctest::Approx(1.0 / 7200.0).epsilon(1e-15));
  CHECK(parse_frequency("10ms") == doctest::Approx(100.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse_frequency("3 fortnights"), ConfigError);
  CHECK_THROWS_AS(parse_frequency("0s"), ConfigError);
  CHECK_THROWS_AS(parse_frequency("abc"), ConfigError);
  CHECK(parse_duration("1h") == 3600.0);
  CHECK(parse_duration("1.5min") == 90.0);
  CHECK(parse_duration("250ms") == 0.25);
  CHECK(parse_duration("60") == 60.0);
  CHECK_THROWS_AS(parse_duration("60Hz"), ConfigError);
}

TEST_CASE("config: parsing") {
  const auto cfg = parse_config(R"(# GP-B-like run
geometry.delta = 0.05
dynamics.spin = 100Hz
dynamics.roll = 3min
dynamics.polhode = 2616s
dynamics.gamma_B = 0.5   # radians
population.mode = dipole
population.pairs = 100
population.bias_pairs = 40
population.bias_flux = 40
population.bias_axis = 0,0,1
sampling.duration = 1h
transfer.method = integral
)");
  CHECK(cfg.geometry.delta == 0.05);
  CHECK(cfg.geometry.r_g == doctest::Approx(0.95));
  CHECK(cfg.roll_hz == doctest::Approx(1.0 / 180.0));
  CHECK(cfg.duration == 3600.0);
  CHECK(cfg.population.mode == PopulationMode::dipole);
  CHECK(cfg.population.bias_axis == Vec3{0, 0, 1});
  CHECK(cfg.method == TransferMethod::integral);
  const RotorDynamics d = cfg.dynamics();
  CHECK(d.omega_s == doctest::Approx(2 * pi * 100));
  CHECK(d.omega_p() == doctest::Approx(2 * pi / 2616));
  CHECK(cfg.stream_options().samples_per_block() == 4400);
  CHECK(cfg.curve().delta() == 0.05);
}

TEST_CASE("config: rejection") {
  CHECK(message_of("geometry.delta = 0.1\nbogus.key = 1\n").find("line 2: unknown key 'bogus.key'") != std::string::npos);
  CHECK(message_of("sampling.rate = 1\nsampling.rate = 2\n").find("duplicate") != std::string::npos);
  CHECK(message_of("geometry.delta\n").find("line 1") != std::string::npos);
  CHECK(message_of("geometry.delta = abc\n").find("line 1") != std::string::npos);
  CHECK_FALSE(message_of("geometry.delta = 1.5\n").empty());
  CHECK_FALSE(message_of("population.pairs = 5\npopulation.bias_pairs = 6\n").empty());
  CHECK_FALSE(message_of("sampling.duration = -1\n").empty());
  CHECK_FALSE(message_of("transfer.method = magic\n").empty());
  CHECK_FALSE(message_of("dynamics.inertia_ratio = 1e-5\ndynamics.polhode = 1Hz\n").empty());
  CHECK_FALSE(message_of("population.mode = file\n").empty());
  CHECK_FALSE(message_of("population.seed = -3\n").empty());
  CHECK_FALSE(message_of("population.bias_axis = 1,2\n").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/tflux.cfg"), ConfigError);
}

TEST_CASE("config: serialization round trip and manifest echo") {
  RunConfig cfg;
  apply_setting(cfg, "geometry.delta=0.3");
  apply_setting(cfg, "geometry.radius = 2");
  apply_setting(cfg, "dynamics.roll=3min");
  apply_setting(cfg, "dynamics.inertia_ratio=1.3e-6");
  apply_setting(cfg, "dynamics.alpha=1e-5");
  apply_setting(cfg, "population.mode=dipole");
  apply_setting(cfg, "population.pairs=10");
  apply_setting(cfg, "population.bias_pairs=3");
  apply_setting(cfg, "population.bias_axis=0.1,-0.2,0.97");
  apply_setting(cfg, "population.seed=18446744073709551615");
  apply_setting(cfg, "sampling.path=first_order");
  apply_setting(cfg, "output.format=csv");
  apply_setting(cfg, "analysis.window=rect");
  CHECK_THROWS_AS(apply_setting(cfg, "nope=1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "geometry.delta"), ConfigError);
  CHECK(cfg.geometry.R == 2.0);
  CHECK(cfg.geometry.r_g == doctest::Approx(1.4));

  const auto again = parse_config(serialize_config(cfg));
  CHECK(again == cfg);
  CHECK(again.roll_hz == cfg.roll_hz);
  CHECK(again.population.seed == cfg.population.seed);

  const std::string manifest = manifest_text(cfg, "generate");
  CHECK(manifest.find("manifest.version = " + std::string(library_version())) == 0);
  CHECK(manifest.find("manifest.command = generate") != std::string::npos);
  CHECK(parse_config(manifest) == cfg);

  RunConfig other = cfg;
  other.alpha = 2e-5;
  CHECK_FALSE(other == cfg);
}

TEST_CASE("config: file loading") {
  testing::TempDir dir;
  RunConfig cfg;
  cfg.sample_rate = 220;
  {
    std::ofstream out(dir.file("a.cfg"));
    out << serialize_config(cfg);
  }
  CHECK(load_config(dir.file("a.cfg")) == cfg);
  {
    std::ofstream out(dir.file("b.cfg"));
    out << "sampling.rate = 0\n";
  }
  CHECK_THROWS_AS(load_config(dir.file("b.cfg")), ConfigError);
}
