#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tflux/field.hpp"
#include "tflux/kinematics.hpp"
#include "tflux/population.hpp"
#include "tflux/signal.hpp"
#include "tflux/signal_io.hpp"
#include "tflux/spectrum.hpp"
#include "tflux/transfer.hpp"

namespace tflux {

std::string_view library_version();

/// Everything a batch run needs. Frequencies in Hz, times in seconds, angles
/// in radians. Text form is one `section.key = value` per line.
struct RunConfig {
  GyroGeometry geometry;

  double spin_hz = 100.0;
  double roll_hz = 1.0 / 180.0;
  std::optional<double> polhode_hz;
  std::optional<double> inertia_ratio;
  double gamma_B = 0.0;
  double alpha = 0.0;
  double beta0 = 0.0;
  double theta_s0 = 0.0;
  double theta_p0 = 0.0;
  double theta_r0 = 0.0;

  PopulationSpec population;

  TransferMethod method = TransferMethod::arctan_adjusted;
  int series_terms = 400;

  double sample_rate = 2200.0;
  double duration = 10.0;
  double t_start = 0.0;
  double block_seconds = 2.0;
  KinematicsPath path = KinematicsPath::exact;
  bool parallel = true;
  std::uint64_t block_budget = 0;

  std::string signal_path = "signal.bin";
  SignalFormat signal_format = SignalFormat::binary;

  Window window = Window::hann;
  int k_max = 40;
  int tau_points = 64;
  bool signed_envelope = false;
  int curve_points = 401;

  RotorDynamics dynamics() const;
  StreamOptions stream_options() const;
  TransferCurve curve() const;

  /// Re-validates every module-level invariant; throws ConfigError.
  void validate() const;

  bool operator==(const RunConfig&) const;
};

/// Parses the text form. Unknown keys, duplicates and malformed values raise
/// ConfigError naming the line. Keys under `manifest.` are accepted and ignored.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Applies one `key=value` override.
void apply_setting(RunConfig& cfg, std::string_view assignment);

/// Text form that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& cfg);

/// serialize_config plus manifest.version and manifest.command lines.
std::string manifest_text(const RunConfig& cfg, std::string_view command);

/// "100", "100Hz", "2.5kHz" are frequencies; "3min", "180s", "2h", "10ms" are
/// periods and are inverted.
double parse_frequency(std::string_view text);
/// "60", "60s", "1.5min", "2h", "250ms".
double parse_duration(std::string_view text);

}  // namespace tflux
