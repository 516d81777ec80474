#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "tflux/kinematics.hpp"
#include "tflux/transfer.hpp"

namespace tflux {

struct FluxonPopulation;

/// Uniformly sampled flux in units of Phi_0; sample i is at t_start + i dt.
struct SampledSignal {
  double t_start = 0.0;
  double dt = 1.0;
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return t_start + static_cast<double>(i) * dt; }
};

enum class KinematicsPath { exact, first_order };

std::string_view to_string(KinematicsPath p);
KinematicsPath parse_kinematics_path(std::string_view name);

struct StreamOptions {
  double t_start = 0.0;
  double duration = 0.0;
  double sample_rate = 2200.0;
  double block_seconds = 2.0;
  KinematicsPath path = KinematicsPath::exact;
  /// Highest harmonic number of f_s - f_r expected to carry power; a sample
  /// rate below twice its frequency draws a warning.
  int harmonic_limit = 7;
  bool parallel = true;
  /// Upper bound on bytes held per block; 0 disables the check.
  std::size_t block_byte_budget = 0;

  std::size_t samples_per_block() const;
  std::size_t total_samples() const;
};

/// (1/2) sum_i p_i F(cos theta_i(t)).
double total_flux(const FluxonPopulation& pop, const TransferCurve& curve, const RotorDynamics& dyn,
                  double t, KinematicsPath path = KinematicsPath::exact);

/// Serial sample-by-sample reference for samples [first, first + count) of
/// the global grid t_start + i dt.
SampledSignal sample_block_reference(const FluxonPopulation& pop, const TransferCurve& curve,
                                     const RotorDynamics& dyn, const StreamOptions& opts,
                                     std::size_t first, std::size_t count);

/// OpenMP kernel over the same grid; agrees with the reference to rounding.
SampledSignal sample_block_parallel(const FluxonPopulation& pop, const TransferCurve& curve,
                                    const RotorDynamics& dyn, const StreamOptions& opts,
                                    std::size_t first, std::size_t count);

using BlockSink = std::function<void(const SampledSignal&)>;

/// Pushes abutting blocks of samples_per_block() samples (the last one may be
/// shorter) to the sink in time order. Returns the number of blocks.
std::size_t generate_stream(const FluxonPopulation& pop, const TransferCurve& curve,
                            const RotorDynamics& dyn, const StreamOptions& opts, const BlockSink& sink);

/// Collects a whole stream in memory; for short runs and tests.
SampledSignal generate_signal(const FluxonPopulation& pop, const TransferCurve& curve,
                              const RotorDynamics& dyn, const StreamOptions& opts);

struct EnvelopePoint {
  double t;
  double value;
};

/// Block maxima over consecutive windows of block_samples samples, fed
/// incrementally. A trailing partial window is dropped by finish() with a warning.
class EnvelopeBuilder {
 public:
  explicit EnvelopeBuilder(std::size_t block_samples, bool signed_max = false);

  void push(const SampledSignal& block);
  std::vector<EnvelopePoint> finish();

 private:
  std::size_t block_samples_;
  bool signed_max_;
  std::size_t filled_ = 0;
  double t_block_ = 0.0;
  double current_ = 0.0;
  std::vector<EnvelopePoint> out_;
};

std::vector<EnvelopePoint> envelope(const SampledSignal& signal, std::size_t block_samples,
                                    bool signed_max = false);

/// Pearson correlation between x[i] and x[i + lag].
double autocorrelation(const std::vector<double>& x, std::size_t lag);

}  // namespace tflux
