#include <algorithm>
#include <cmath>
#include <string>

#include "tflux/diagnostics.hpp"
#include "tflux/population.hpp"
#include "tflux/signal.hpp"

namespace tflux {

std::string_view to_string(KinematicsPath p) {
  return p == KinematicsPath::exact ? "exact" : "first_order";
}

KinematicsPath parse_kinematics_path(std::string_view name) {
  if (name == "exact") return KinematicsPath::exact;
  if (name == "first_order") return KinematicsPath::first_order;
  throw ConfigError("unknown kinematics path '" + std::string(name) + "'");
}

std::size_t StreamOptions::samples_per_block() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw DomainError("sample_rate must be positive");
  if (!(block_seconds > 0.0)) throw DomainError("block_seconds must be positive");
  const auto n = static_cast<std::size_t>(std::llround(block_seconds * sample_rate));
  if (n == 0) throw DomainError("block holds no samples");
  return n;
}

std::size_t StreamOptions::total_samples() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw DomainError("duration must be non-negative");
  if (!(sample_rate > 0.0)) throw DomainError("sample_rate must be positive");
  return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

namespace {

double cos_theta(const Fluxon& f, const RotorDynamics& dyn, double t, KinematicsPath path) {
  const double c = path == KinematicsPath::exact ? cos_theta_exact(f, dyn, t) : cos_theta_first_order(f, dyn, t);
  return std::clamp(c, -1.0, 1.0);
}

void check_block(const StreamOptions& opts, std::size_t count) {
  if (opts.block_byte_budget != 0 && count * sizeof(double) > opts.block_byte_budget) {
    throw DomainError("block of " + std::to_string(count) + " samples exceeds the byte budget of " +
                      std::to_string(opts.block_byte_budget));
  }
}

}  // namespace

double total_flux(const FluxonPopulation& pop, const TransferCurve& curve, const RotorDynamics& dyn, double t,
                  KinematicsPath path) {
  double sum = 0.0;
  for (const Fluxon& f : pop.fluxons) sum += f.polarity * curve(cos_theta(f, dyn, t, path));
  return 0.5 * sum;
}

SampledSignal sample_block_reference(const FluxonPopulation& pop, const TransferCurve& curve,
                                     const RotorDynamics& dyn, const StreamOptions& opts, std::size_t first,
                                     std::size_t count) {
  check_block(opts, count);
  SampledSignal out;
  out.dt = 1.0 / opts.sample_rate;
  out.t_start = opts.t_start + static_cast<double>(first) * out.dt;
  out.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = opts.t_start + static_cast<double>(first + i) * out.dt;
    out.samples[i] = total_flux(pop, curve, dyn, t, opts.path);
  }
  return out;
}

SampledSignal sample_block_parallel(const FluxonPopulation& pop, const TransferCurve& curve,
                                    const RotorDynamics& dyn, const StreamOptions& opts, std::size_t first,
                                    std::size_t count) {
  check_block(opts, count);
  SampledSignal out;
  out.dt = 1.0 / opts.sample_rate;
  out.t_start = opts.t_start + static_cast<double>(first) * out.dt;
  out.samples.resize(count);

  const std::size_t nf = pop.fluxons.size();
  std::vector<BodyWeights> w(nf);
  std::vector<double> pol(nf);
  for (std::size_t j = 0; j < nf; ++j) {
    w[j] = body_weights(pop.fluxons[j]);
    pol[j] = pop.fluxons[j].polarity;
  }
  const bool exact = opts.path == KinematicsPath::exact;
  const double t0 = opts.t_start, dt = out.dt;
  double* dst = out.samples.data();
  const auto n = static_cast<long long>(count);

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(first + static_cast<std::size_t>(i)) * dt;
    double sum = 0.0;
    if (exact) {
      const BodyFrame b = body_frame(dyn, t);
      const Vec3 nl = loop_normal(dyn, t);
      const double nz = dot(b.z, nl), nx = dot(b.x, nl), ny = dot(b.y, nl);
      for (std::size_t j = 0; j < nf; ++j) {
        const double c = std::clamp(w[j].wz * nz + w[j].wx * nx + w[j].wy * ny, -1.0, 1.0);
        sum += pol[j] * curve(c);
      }
    } else {
      for (std::size_t j = 0; j < nf; ++j) sum += pol[j] * curve(cos_theta(pop.fluxons[j], dyn, t, opts.path));
    }
    dst[i] = 0.5 * sum;
  }
  return out;
}

std::size_t generate_stream(const FluxonPopulation& pop, const TransferCurve& curve, const RotorDynamics& dyn,
                            const StreamOptions& opts, const BlockSink& sink) {
  dyn.validate();
  for (const Fluxon& f : pop.fluxons) f.validate();
  const std::size_t total = opts.total_samples();
  const std::size_t per_block = opts.samples_per_block();

  const double carrier_hz = std::abs(dyn.omega_s - dyn.omega_r) / (2.0 * pi);
  const double top = opts.harmonic_limit * carrier_hz;
  if (total > 0 && opts.sample_rate < 2.0 * top) {
    warn("sample rate " + std::to_string(opts.sample_rate) + " Hz undersamples harmonic " +
         std::to_string(opts.harmonic_limit) + " of the spin-roll frequency (" + std::to_string(top) +
         " Hz); higher harmonics alias");
  }

  std::size_t blocks = 0;
  for (std::size_t first = 0; first < total; first += per_block) {
    const std::size_t count = std::min(per_block, total - first);
    const SampledSignal block = opts.parallel ? sample_block_parallel(pop, curve, dyn, opts, first, count)
                                              : sample_block_reference(pop, curve, dyn, opts, first, count);
    sink(block);
    ++blocks;
  }
  return blocks;
}

SampledSignal generate_signal(const FluxonPopulation& pop, const TransferCurve& curve, const RotorDynamics& dyn,
                              const StreamOptions& opts) {
  SampledSignal all;
  all.dt = 1.0 / opts.sample_rate;
  all.t_start = opts.t_start;
  all.samples.reserve(opts.total_samples());
  generate_stream(pop, curve, dyn, opts, [&](const SampledSignal& b) {
    all.samples.insert(all.samples.end(), b.samples.begin(), b.samples.end());
  });
  return all;
}

}  // namespace tflux
