#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include "tflux/population.hpp"
#include "tflux/signal.hpp"

namespace tflux {

// Fluxon file: one fluxon per line, "xi eta polarity" (radians, radians,
// +1 or -1); '#' starts a comment. Malformed content raises ParseError with
// the byte offset of the offending field.
FluxonPopulation parse_fluxon_text(const std::string& text);
FluxonPopulation read_fluxon_file(const std::string& path);
void write_fluxon_file(const std::string& path, const FluxonPopulation& pop);

enum class SignalFormat { binary, csv };

SignalFormat parse_signal_format(std::string_view name);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

// Binary signal layout: a 64-byte ASCII header "TFLUX1 t0=<s> dt=<s> n=<count>"
// padded with spaces, then n little-endian IEEE-754 doubles.
inline constexpr std::size_t kSignalHeaderBytes = 64;

/// Sequential writer for abutting blocks on the grid t0 + i dt. The binary
/// header is rewritten with the final count on close().
class SignalWriter {
 public:
  SignalWriter(const std::string& path, SignalFormat format, double t0, double dt);
  ~SignalWriter();
  SignalWriter(const SignalWriter&) = delete;
  SignalWriter& operator=(const SignalWriter&) = delete;

  void write(const SampledSignal& block);
  void close();
  std::uint64_t count() const { return count_; }

 private:
  void write_header();

  std::string path_;
  SignalFormat format_;
  std::ofstream out_;
  bool closed_ = false;
  double t0_ = 0.0, dt_ = 0.0;
  std::uint64_t count_ = 0;
};

/// Sequential reader for either signal format (detected from the content).
class SignalReader {
 public:
  explicit SignalReader(const std::string& path);

  SignalFormat format() const { return format_; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  /// Sample count when known up front (binary files).
  std::optional<std::uint64_t> declared_count() const { return declared_; }

  /// Reads up to max_samples into out; returns false once the input is exhausted.
  bool read(std::size_t max_samples, SampledSignal& out);

 private:
  bool read_csv_row(double& t, double& v);

  std::string path_;
  std::ifstream in_;
  SignalFormat format_ = SignalFormat::binary;
  double t0_ = 0.0, dt_ = 0.0;
  std::optional<std::uint64_t> declared_;
  std::uint64_t consumed_ = 0;
  std::size_t offset_ = 0;
  std::optional<std::pair<double, double>> pending_;
};

SampledSignal read_signal(const std::string& path);
void write_signal(const std::string& path, const SampledSignal& signal, SignalFormat format);

}  // namespace tflux
