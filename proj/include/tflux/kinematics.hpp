#pragma once

#include <optional>

#include "tflux/vec3.hpp"

namespace tflux {

/// Torque-free symmetric rotor in a rolling pick-up loop. Angles in radians,
/// frequencies in rad/s. Vectors are expressed in the inertial frame L whose
/// z axis is the angular momentum.
struct RotorDynamics {
  double omega_s = 2.0 * 3.14159265358979323846 * 100.0;
  double omega_r = 0.0;
  /// Delta I / I. Determines the polhode rate unless omega_p_override is set;
  /// when both are given they must agree.
  std::optional<double> inertia_ratio;
  double gamma_B = 0.0;  // angle between body symmetry axis and L
  double alpha = 0.0;    // roll axis to loop plane misalignment
  double beta0 = 0.0;    // roll axis to angular momentum misalignment
  double theta_s0 = 0.0;
  double theta_p0 = 0.0;
  double theta_r0 = 0.0;
  std::optional<double> omega_p_override;

  /// Checks the ranges; throws DomainError. Warns for |Delta I / I| > 0.01.
  void validate() const;

  /// omega_s |Delta I/I| cos gamma_B, or the override.
  double omega_p() const;

  /// Body rotation rate about its symmetry axis, omega_s (1 - Delta I/I) cos gamma_B.
  /// Not used by the signal path.
  double omega_rot() const;
};

struct Fluxon {
  double xi = 0.0;   // body polar angle
  double eta = 0.0;  // body azimuth
  int polarity = 1;  // +1 fluxon, -1 antifluxon

  void validate() const;
};

struct Phases {
  double theta_s, theta_p, theta_r;
};

struct BodyFrame {
  Vec3 x, y, z;
};

/// Unwrapped spin, polhode and roll phases at time t.
Phases phases(const RotorDynamics& dyn, double t);

BodyFrame body_frame(const RotorDynamics& dyn, double t);
BodyFrame body_frame_at(double gamma_B, double theta_s, double theta_p);

/// Unit vector towards the fluxon.
Vec3 fluxon_direction(const Fluxon& f, const RotorDynamics& dyn, double t);

/// Unit normal of the pick-up loop, rotating about the roll axis.
Vec3 loop_normal(const RotorDynamics& dyn, double t);
Vec3 loop_normal_at(const RotorDynamics& dyn, double theta_r);

/// Fluxon body direction as weights on (z_B, x_B, y_B).
struct BodyWeights {
  double wz, wx, wy;
};
BodyWeights body_weights(const Fluxon& f);

double cos_theta_exact(const Fluxon& f, const RotorDynamics& dyn, double t);

/// Expansion to first order in alpha and beta0:
/// a_sr sin(theta_s - theta_r + q_sr) + a (beta0 sin theta_r + alpha).
double cos_theta_first_order(const Fluxon& f, const RotorDynamics& dyn, double t);

/// Polhode-modulated carrier amplitude, phase and axial weight.
struct PolhodeModulation {
  double a_sr;
  double q_sr;
  double a;
};

/// Modulation at slow phase tau = omega_p t.
PolhodeModulation slow_amplitudes(const Fluxon& f, const RotorDynamics& dyn, double tau);

}  // namespace tflux
