#include <cmath>

#include "doctest.h"
#include "tflux/diagnostics.hpp"
#include "tflux/spectrum.hpp"

using namespace tflux;

namespace {

SampledSignal tone(std::size_t n, double rate, double f, double amp, double phase = 0.3) {
  SampledSignal s{0.0, 1.0 / rate, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) s.samples[i] = amp * std::sin(2 * pi * f * s.time(i) + phase);
  return s;
}

}  // namespace

TEST_CASE("spectrum: on-bin sinusoid") {
  const double rate = 1024.0;
  const auto s = tone(4096, rate, 50.0, 0.7);
  for (auto w : {Window::rect, Window::hann}) {
    const auto spec = power_spectrum(s, w);
    REQUIRE(spec.size() == 2049);
    CHECK(spec[1].frequency == doctest::Approx(0.25));
    const std::size_t k = argmax_bin(spec, 0.0, rate / 2);
    CHECK(spec[k].frequency == doctest::Approx(50.0));
    CHECK(spec[k].power == doctest::Approx(0.49).epsilon(1e-9));
  }
  // Rectangular window: everything else is rounding noise.
  const auto rect = power_spectrum(s, Window::rect);
  for (std::size_t i = 0; i < rect.size(); ++i) {
    if (i != 200) CHECK(rect[i].power < 1e-20);
  }
}

TEST_CASE("spectrum: off-bin sinusoid with zero padding") {
  const double rate = 2200.0;
  const auto s = tone(3000, rate, 123.4, 1.0);
  const auto spec = power_spectrum(s, Window::hann);
  REQUIRE(spec.size() == 2049);
  const double df = spec[1].frequency;
  CHECK(df == doctest::Approx(rate / 4096));
  const std::size_t k = argmax_bin(spec, 0.0, rate / 2);
  CHECK(std::abs(spec[k].frequency - 123.4) <= df);
  CHECK(peak_amplitude(spec, 123.4, 2 * df) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("spectrum: edge cases") {
  CHECK(power_spectrum(SampledSignal{}).empty());
  SampledSignal dc{0.0, 0.01, std::vector<double>(64, 2.0)};
  const auto spec = power_spectrum(dc, Window::rect);
  CHECK(spec[0].power == doctest::Approx(4.0));
  CHECK_THROWS_AS(argmax_bin(spec, 1000.0, 2000.0), DomainError);
  CHECK(parse_window("hann") == Window::hann);
  CHECK_THROWS_AS(parse_window("kaiser"), ConfigError);
}
