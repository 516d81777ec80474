#include "tflux/spectrum.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "tflux/diagnostics.hpp"

namespace tflux {

namespace {

// Only fftw_execute is thread-safe; planning must be serialized.
std::mutex plan_mutex;

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::string_view to_string(Window w) { return w == Window::rect ? "rect" : "hann"; }

Window parse_window(std::string_view name) {
  if (name == "rect") return Window::rect;
  if (name == "hann") return Window::hann;
  throw ConfigError("unknown window '" + std::string(name) + "'");
}

std::vector<SpectrumBin> power_spectrum(const SampledSignal& signal, Window window) {
  const std::size_t n = signal.size();
  if (n == 0) return {};
  if (!(signal.dt > 0.0)) throw DomainError("signal dt must be positive");
  const std::size_t m = std::bit_ceil(n);

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (m / 2 + 1))));
  if (!in || !out) throw std::bad_alloc();

  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE);
  }
  double gain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = window == Window::rect ? 1.0 : 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(n));
    in.get()[i] = w * signal.samples[i];
    gain += w;
  }
  for (std::size_t i = n; i < m; ++i) in.get()[i] = 0.0;
  fftw_execute(plan);
  {
    std::lock_guard lock(plan_mutex);
    fftw_destroy_plan(plan);
  }

  std::vector<SpectrumBin> bins(m / 2 + 1);
  const double df = 1.0 / (static_cast<double>(m) * signal.dt);
  for (std::size_t k = 0; k <= m / 2; ++k) {
    const double re = out.get()[k][0], im = out.get()[k][1];
    const double one_sided = (k == 0 || k == m / 2) ? 1.0 : 2.0;
    const double amp = one_sided * std::hypot(re, im) / gain;
    bins[k] = {static_cast<double>(k) * df, amp * amp};
  }
  return bins;
}

double peak_amplitude(const std::vector<SpectrumBin>& spectrum, double f, double half_width_hz) {
  return std::sqrt(spectrum.at(argmax_bin(spectrum, f - half_width_hz, f + half_width_hz)).power);
}

std::size_t argmax_bin(const std::vector<SpectrumBin>& spectrum, double f_lo, double f_hi) {
  std::size_t best = spectrum.size();
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    if (spectrum[k].frequency < f_lo || spectrum[k].frequency > f_hi) continue;
    if (best == spectrum.size() || spectrum[k].power > spectrum[best].power) best = k;
  }
  if (best == spectrum.size()) throw DomainError("no spectrum bin in the requested band");
  return best;
}

}  // namespace tflux
