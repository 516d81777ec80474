#pragma once

#include <vector>

#include "tflux/kinematics.hpp"
#include "tflux/transfer.hpp"

namespace tflux {

struct FluxonPopulation;

/// Fourier coefficients of F(a sin Theta) for one carrier amplitude a:
///   A_k = 2/(pi(2k+1)) int_0^pi cos((2k+1)psi) cos psi F'(a sin psi) dpsi
///   B_k = 2/(pi(1+[k=0])) int_0^pi cos(2k psi) F'(a sin psi) dpsi
/// for k = 0..k_max, so that F(a sin Theta) = a sum_k A_k sin((2k+1)Theta).
struct HarmonicCoefficients {
  std::vector<double> A, B;
};

HarmonicCoefficients harmonic_coefficients(const TransferCurve& curve, double a_sr, int k_max);

/// Slow amplitudes on a grid of polhode phases tau = omega_p t. A[k][j] and
/// B[k][j] belong to tau_grid[j].
struct SlowAmplitudes {
  std::vector<double> tau_grid;
  std::vector<std::vector<double>> A, B;
  /// Per-fluxon results only: carrier amplitude, carrier phase and axial weight.
  std::vector<double> a_sr, q_sr, a;
};

/// Per-fluxon A_k(tau), B_k(tau) as defined above, evaluated at a_sr(tau).
SlowAmplitudes slow_fourier_amplitudes(const Fluxon& f, const TransferCurve& curve, const RotorDynamics& dyn,
                                       const std::vector<double>& tau_grid, int k_max);

/// Population amplitudes in Phi_0: A[k] is the magnitude of the
/// (2k+1)(omega_s - omega_r) line, (1/2)|sum_i p_i a_sr,i A_k,i e^{i(2k+1)q_i}|,
/// and B[k] the coefficient of (beta0 sin theta_r + alpha) on the
/// 2k(omega_s - omega_r) line, (1/2)|sum_i p_i a_i B_k,i e^{i 2k q_i}|.
SlowAmplitudes slow_fourier_amplitudes(const FluxonPopulation& pop, const TransferCurve& curve,
                                       const RotorDynamics& dyn, const std::vector<double>& tau_grid, int k_max);

/// Least-squares slope of log|y_k| against log k over k in [k_lo, k_hi].
double loglog_slope(const std::vector<double>& y, int k_lo, int k_hi);

}  // namespace tflux
