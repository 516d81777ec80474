#include "tflux/amplitudes.hpp"

#include <cmath>
#include <complex>

#include "tflux/diagnostics.hpp"
#include "tflux/population.hpp"
#include "tflux/quadrature.hpp"

namespace tflux {

namespace {

constexpr quad::Options kOpt{1e-13, 1e-10, 20000};

void check_args(const std::vector<double>& tau_grid, int k_max) {
  if (k_max < 0) throw DomainError("k_max must be non-negative");
  for (double t : tau_grid) {
    if (!std::isfinite(t)) throw DomainError("tau grid must be finite");
  }
}

}  // namespace

HarmonicCoefficients harmonic_coefficients(const TransferCurve& curve, double a_sr, int k_max) {
  if (k_max < 0) throw DomainError("k_max must be non-negative");
  if (!(a_sr >= 0.0 && a_sr <= 1.0 + 1e-12)) throw DomainError("carrier amplitude must lie in [0, 1]");
  const auto K = static_cast<std::size_t>(k_max) + 1;
  // Both integrands are symmetric about pi/2; integrate over [0, pi/2] and double.
  auto integrand = [&](double psi) {
    std::vector<double> v(2 * K);
    const double fp = curve.derivative(std::min(a_sr, 1.0) * std::sin(psi));
    const double c = std::cos(psi);
    for (std::size_t k = 0; k < K; ++k) {
      v[k] = std::cos((2.0 * k + 1.0) * psi) * c * fp;
      v[K + k] = std::cos(2.0 * k * psi) * fp;
    }
    return v;
  };
  const auto r = quad::integrate<std::vector<double>>(integrand, 0.0, 0.5 * pi, kOpt);
  HarmonicCoefficients out{std::vector<double>(K), std::vector<double>(K)};
  for (std::size_t k = 0; k < K; ++k) {
    out.A[k] = 2.0 * r.value[k] * 2.0 / (pi * (2.0 * k + 1.0));
    out.B[k] = 2.0 * r.value[K + k] * 2.0 / (pi * (k == 0 ? 2.0 : 1.0));
  }
  return out;
}

SlowAmplitudes slow_fourier_amplitudes(const Fluxon& f, const TransferCurve& curve, const RotorDynamics& dyn,
                                       const std::vector<double>& tau_grid, int k_max) {
  check_args(tau_grid, k_max);
  f.validate();
  const auto K = static_cast<std::size_t>(k_max) + 1;
  SlowAmplitudes out;
  out.tau_grid = tau_grid;
  out.A.assign(K, std::vector<double>(tau_grid.size()));
  out.B.assign(K, std::vector<double>(tau_grid.size()));
  for (std::size_t j = 0; j < tau_grid.size(); ++j) {
    const PolhodeModulation m = slow_amplitudes(f, dyn, tau_grid[j]);
    const HarmonicCoefficients h = harmonic_coefficients(curve, m.a_sr, k_max);
    for (std::size_t k = 0; k < K; ++k) {
      out.A[k][j] = h.A[k];
      out.B[k][j] = h.B[k];
    }
    out.a_sr.push_back(m.a_sr);
    out.q_sr.push_back(m.q_sr);
    out.a.push_back(m.a);
  }
  return out;
}

SlowAmplitudes slow_fourier_amplitudes(const FluxonPopulation& pop, const TransferCurve& curve,
                                       const RotorDynamics& dyn, const std::vector<double>& tau_grid, int k_max) {
  check_args(tau_grid, k_max);
  const auto K = static_cast<std::size_t>(k_max) + 1;
  SlowAmplitudes out;
  out.tau_grid = tau_grid;
  out.A.assign(K, std::vector<double>(tau_grid.size()));
  out.B.assign(K, std::vector<double>(tau_grid.size()));
  for (std::size_t j = 0; j < tau_grid.size(); ++j) {
    std::vector<std::complex<double>> odd(K), even(K);
    for (const Fluxon& f : pop.fluxons) {
      f.validate();
      const PolhodeModulation m = slow_amplitudes(f, dyn, tau_grid[j]);
      const HarmonicCoefficients h = harmonic_coefficients(curve, m.a_sr, k_max);
      for (std::size_t k = 0; k < K; ++k) {
        odd[k] += f.polarity * m.a_sr * h.A[k] * std::polar(1.0, (2.0 * k + 1.0) * m.q_sr);
        even[k] += f.polarity * m.a * h.B[k] * std::polar(1.0, 2.0 * k * m.q_sr);
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      out.A[k][j] = 0.5 * std::abs(odd[k]);
      out.B[k][j] = 0.5 * std::abs(even[k]);
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& y, int k_lo, int k_hi) {
  if (k_lo < 1 || k_hi <= k_lo || static_cast<std::size_t>(k_hi) >= y.size()) {
    throw DomainError("loglog_slope needs 1 <= k_lo < k_hi < size");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = k_hi - k_lo + 1;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double x = std::log(static_cast<double>(k));
    const double v = std::log(std::abs(y[static_cast<std::size_t>(k)]));
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace tflux
