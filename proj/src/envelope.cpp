#include <cmath>
#include <string>

#include "tflux/diagnostics.hpp"
#include "tflux/signal.hpp"

namespace tflux {

EnvelopeBuilder::EnvelopeBuilder(std::size_t block_samples, bool signed_max)
    : block_samples_(block_samples), signed_max_(signed_max) {
  if (block_samples == 0) throw DomainError("envelope block must hold at least one sample");
}

void EnvelopeBuilder::push(const SampledSignal& block) {
  for (std::size_t i = 0; i < block.size(); ++i) {
    const double v = signed_max_ ? block.samples[i] : std::abs(block.samples[i]);
    if (filled_ == 0) {
      t_block_ = block.time(i);
      current_ = v;
    } else if (v > current_) {
      current_ = v;
    }
    if (++filled_ == block_samples_) {
      out_.push_back({t_block_, current_});
      filled_ = 0;
    }
  }
}

std::vector<EnvelopePoint> EnvelopeBuilder::finish() {
  if (filled_ != 0) {
    warn("envelope: dropping trailing partial block of " + std::to_string(filled_) + " samples");
    filled_ = 0;
  }
  return std::move(out_);
}

std::vector<EnvelopePoint> envelope(const SampledSignal& signal, std::size_t block_samples, bool signed_max) {
  EnvelopeBuilder b(block_samples, signed_max);
  b.push(signal);
  return b.finish();
}

double autocorrelation(const std::vector<double>& x, std::size_t lag) {
  if (lag >= x.size() || x.size() - lag < 2) throw DomainError("autocorrelation lag leaves fewer than two pairs");
  const std::size_t n = x.size() - lag;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += x[i];
    mb += x[i + lag];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i] - ma, b = x[i + lag] - mb;
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  if (saa == 0.0 || sbb == 0.0) return saa == sbb ? 1.0 : 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace tflux
