#pragma once

#include <string_view>
#include <vector>

#include "tflux/signal.hpp"

namespace tflux {

enum class Window { rect, hann };

std::string_view to_string(Window w);
Window parse_window(std::string_view name);

struct SpectrumBin {
  double frequency;  // Hz
  double power;
};

/// One-sided periodogram. The record is windowed, zero-padded to the next
/// power of two and normalized so that a sinusoid of amplitude A centred on a
/// bin of the unpadded record shows power A^2 there (window gain removed).
std::vector<SpectrumBin> power_spectrum(const SampledSignal& signal, Window window = Window::hann);

/// Amplitude of the strongest bin within +-half_width_hz of f: sqrt(power).
double peak_amplitude(const std::vector<SpectrumBin>& spectrum, double f, double half_width_hz);

/// Index of the largest-power bin in [f_lo, f_hi].
std::size_t argmax_bin(const std::vector<SpectrumBin>& spectrum, double f_lo, double f_hi);

}  // namespace tflux
