#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "tflux/diagnostics.hpp"
#include "tflux/population.hpp"
#include "tflux/signal.hpp"
#include "tflux/spectrum.hpp"
#include "tflux/amplitudes.hpp"

using namespace tflux;

namespace {

RotorDynamics gpb() {
  RotorDynamics d;
  d.omega_s = 2 * pi * 100;
  d.omega_r = 2 * pi / 180;
  d.omega_p_override = 2 * pi / 2616;
  d.gamma_B = 0.5;
  d.alpha = 1e-5;
  d.beta0 = 5e-5;
  d.theta_s0 = 0.2;
  d.theta_p0 = 0.9;
  d.theta_r0 = 0.4;
  return d;
}

FluxonPopulation uniform(int pairs, std::uint64_t seed, const TransferCurve& c) {
  PopulationSpec s;
  s.n_pairs = pairs;
  s.seed = seed;
  return generate_population(s, c);
}

}  // namespace

TEST_CASE("total_flux: trivial cases") {
  const TransferCurve curve(0.025);
  const RotorDynamics dyn = gpb();
  CHECK(total_flux({}, curve, dyn, 3.0) == 0.0);
  FluxonPopulation pair;
  pair.fluxons = {{0.7, 2.0, 1}, {0.7, 2.0, -1}};
  for (double t : {0.0, 0.013, 17.5, 1234.5}) CHECK(total_flux(pair, curve, dyn, t) == 0.0);
}

TEST_CASE("total_flux: single equatorial fluxon swings to f_delta / 2") {
  const TransferCurve curve(0.025, TransferMethod::integral);
  RotorDynamics dyn;
  dyn.omega_s = 2 * pi * 100;
  dyn.omega_r = 2 * pi / 180;
  FluxonPopulation one;
  one.fluxons = {{pi / 2, 0.3, 1}};
  const double period = 1.0 / (100.0 - 1.0 / 180.0);
  double hi = -1, lo = 1;
  for (int i = 0; i < 4000; ++i) {
    const double v = total_flux(one, curve, dyn, i * period / 4000.0);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  CHECK(hi == doctest::Approx(curve.f_delta() / 2).epsilon(1e-6));
  CHECK(lo == doctest::Approx(-curve.f_delta() / 2).epsilon(1e-6));
  CHECK(hi == doctest::Approx(0.4947).epsilon(1e-4));
}

TEST_CASE("total_flux: linearity and polarity antisymmetry") {
  const TransferCurve curve(0.025);
  const RotorDynamics dyn = gpb();
  const auto a = uniform(7, 1, curve);
  const auto b = uniform(5, 2, curve);
  FluxonPopulation both = a;
  both.fluxons.insert(both.fluxons.end(), b.fluxons.begin(), b.fluxons.end());
  FluxonPopulation flipped = both;
  for (auto& f : flipped.fluxons) f.polarity = -f.polarity;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.37 * i;
    const double sum = total_flux(a, curve, dyn, t) + total_flux(b, curve, dyn, t);
    CHECK(std::abs(total_flux(both, curve, dyn, t) - sum) <= 1e-13);
    CHECK(total_flux(flipped, curve, dyn, t) == -total_flux(both, curve, dyn, t));
  }
}

TEST_CASE("generate_stream: block layout and determinism") {
  const TransferCurve curve(0.025);
  const RotorDynamics dyn = gpb();
  FluxonPopulation one;
  one.fluxons = {{1.0, 0.5, 1}};
  StreamOptions opts;

  opts.duration = 0.0;
  CHECK(generate_stream(one, curve, dyn, opts, [](const SampledSignal&) { FAIL("no blocks expected"); }) == 0);

  opts.duration = 10.0;
  std::vector<SampledSignal> run1, run2;
  CHECK(generate_stream(one, curve, dyn, opts, [&](const SampledSignal& b) { run1.push_back(b); }) == 5);
  generate_stream(one, curve, dyn, opts, [&](const SampledSignal& b) { run2.push_back(b); });
  REQUIRE(run1.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(run1[i].size() == 4400);
    CHECK(run1[i].samples == run2[i].samples);
    CHECK(run1[i].t_start == opts.t_start + static_cast<double>(i * 4400) * run1[i].dt);
  }

  opts.duration = 5.0;
  std::vector<std::size_t> sizes;
  generate_stream(one, curve, dyn, opts, [&](const SampledSignal& b) { sizes.push_back(b.size()); });
  CHECK(sizes == std::vector<std::size_t>{4400, 4400, 2200});
}

TEST_CASE("generate_stream: parallel kernel matches the serial reference") {
  const TransferCurve curve(0.025);
  const RotorDynamics dyn = gpb();
  const auto pop = uniform(20, 9, curve);
  StreamOptions opts;
  opts.t_start = 1000.0;
  opts.duration = 3.0;
  for (auto path : {KinematicsPath::exact, KinematicsPath::first_order}) {
    opts.path = path;
    opts.parallel = false;
    const auto ref = generate_signal(pop, curve, dyn, opts);
    opts.parallel = true;
    const auto par = generate_signal(pop, curve, dyn, opts);
    REQUIRE(ref.size() == par.size());
    double worst = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ref.samples[i] - par.samples[i]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("generate_stream: first-order path tracks the exact path") {
  const TransferCurve curve(0.025);
  const RotorDynamics dyn = gpb();
  const auto pop = uniform(10, 3, curve);
  StreamOptions opts;
  opts.duration = 1.0;
  const auto exact = generate_signal(pop, curve, dyn, opts);
  opts.path = KinematicsPath::first_order;
  const auto first = generate_signal(pop, curve, dyn, opts);
  double worst = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) worst = std::max(worst, std::abs(exact.samples[i] - first.samples[i]));
  // Second order in the 5e-5 misalignment, times the steepest slope kappa ~ 25 and 20 fluxons.
  CHECK(worst < 1e-6);
}

TEST_CASE("generate_stream: memory stays within the block budget") {
  const TransferCurve curve(0.025);
  const RotorDynamics dyn = gpb();
  const auto pop = uniform(100, 11, curve);
  StreamOptions opts;
  opts.duration = 60.0;
  opts.block_byte_budget = 4400 * sizeof(double);
  std::size_t blocks = 0, peak = 0;
  double checksum = 0;
  generate_stream(pop, curve, dyn, opts, [&](const SampledSignal& b) {
    ++blocks;
    peak = std::max(peak, b.samples.capacity() * sizeof(double));
    for (double v : b.samples) checksum += std::abs(v);
  });
  CHECK(blocks == 30);
  CHECK(peak <= opts.block_byte_budget);
  CHECK(std::isfinite(checksum));
  opts.block_byte_budget = 1000;
  CHECK_THROWS_AS(generate_stream(pop, curve, dyn, opts, [](const SampledSignal&) {}), DomainError);
}

TEST_CASE("generate_stream: undersampling warning") {
  const TransferCurve curve(0.025);
  FluxonPopulation one;
  one.fluxons = {{1.0, 0.5, 1}};
  StreamOptions opts;
  opts.duration = 1.0;
  testing::WarningLog log;
  generate_stream(one, curve, gpb(), opts, [](const SampledSignal&) {});
  CHECK(log.count() == 0);
  opts.sample_rate = 220.0;
  generate_stream(one, curve, gpb(), opts, [](const SampledSignal&) {});
  CHECK(log.count() == 1);
}

TEST_CASE("envelope") {
  SampledSignal c{0.0, 0.5, std::vector<double>(10, -0.25)};
  const auto env = envelope(c, 3);
  testing::WarningLog log;
  EnvelopeBuilder b(3);
  b.push(c);
  const auto env2 = b.finish();
  CHECK(log.count() == 1);
  REQUIRE(env.size() == 3);
  for (std::size_t i = 0; i < env.size(); ++i) {
    CHECK(env[i].value == 0.25);
    CHECK(env[i].t == 1.5 * static_cast<double>(i));
  }
  CHECK(env2.size() == 3);
  CHECK(envelope(c, 5, true)[0].value == -0.25);
  CHECK(envelope(SampledSignal{}, 4).empty());

  SUBCASE("blocks straddling pushes") {
    SampledSignal s1{0.0, 1.0, {1, 5, 2}}, s2{3.0, 1.0, {-7, 0, 3, 1}};
    EnvelopeBuilder e(2);
    e.push(s1);
    e.push(s2);
    const auto out = e.finish();
    REQUIRE(out.size() == 3);
    CHECK(out[0].value == 5);
    CHECK(out[1].value == 7);
    CHECK(out[1].t == 2.0);
    CHECK(out[2].value == 3);
  }
  SUBCASE("single fluxon on a spherical rotor has a flat envelope") {
    const TransferCurve curve(0.025);
    RotorDynamics dyn;
    dyn.omega_r = 2 * pi / 180;
    FluxonPopulation one;
    one.fluxons = {{1.2, 0.1, 1}};
    StreamOptions opts;
    opts.duration = 40.0;
    const auto env3 = envelope(generate_signal(one, curve, dyn, opts), 4400);
    REQUIRE(env3.size() == 20);
    // Amplitude F(sin 1.2)/2 for the equatorial loop; sampling at 22 points per carrier cycle.
    const double expect = 0.5 * curve(std::sin(1.2));
    for (const auto& p : env3) CHECK(p.value == doctest::Approx(expect).epsilon(2e-3));
  }
}

TEST_CASE("autocorrelation") {
  std::vector<double> x(400);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2 * pi * static_cast<double>(i) / 50.0);
  CHECK(autocorrelation(x, 50) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(autocorrelation(x, 25) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(autocorrelation(x, 399), DomainError);
}

TEST_CASE("spectrum: the high-rate signal matches the slow amplitudes") {
  // Frozen slow phase: no polhode motion, no misalignment, carrier exactly on a bin.
  const TransferCurve curve(0.025);
  RotorDynamics dyn;
  dyn.omega_s = 2 * pi * 100;
  dyn.gamma_B = 0.4;
  dyn.theta_s0 = 0.3;
  FluxonPopulation one;
  one.fluxons = {{1.1, 0.3, 1}};
  StreamOptions opts;
  opts.sample_rate = 51200;
  opts.duration = 65536.0 / 51200.0;
  const auto sig = generate_signal(one, curve, dyn, opts);
  REQUIRE(sig.size() == 65536);
  const auto spec = power_spectrum(sig, Window::rect);
  const auto slow = slow_fourier_amplitudes(one, curve, dyn, {0.0}, 10);
  for (int k = 0; k <= 10; ++k) {
    const double f = (2 * k + 1) * 100.0;
    const double line = peak_amplitude(spec, f, 0.5);
    CHECK(line == doctest::Approx(slow.A[static_cast<std::size_t>(k)][0]).epsilon(0.01));
  }
}
