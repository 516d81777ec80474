#include "tflux/kinematics.hpp"

#include <cmath>
#include <string>

#include "tflux/diagnostics.hpp"

namespace tflux {

void RotorDynamics::validate() const {
  if (!(omega_s > 0.0) || !std::isfinite(omega_s)) throw DomainError("dynamics: omega_s must be positive");
  if (!std::isfinite(omega_r)) throw DomainError("dynamics: omega_r must be finite");
  if (!(gamma_B >= 0.0 && gamma_B <= pi)) throw DomainError("dynamics: gamma_B must lie in [0, pi]");
  if (!(alpha >= 0.0) || !(beta0 >= 0.0)) throw DomainError("dynamics: misalignments must be non-negative");
  if (!std::isfinite(theta_s0 + theta_p0 + theta_r0)) throw DomainError("dynamics: initial phases must be finite");
  if (inertia_ratio && !std::isfinite(*inertia_ratio)) throw DomainError("dynamics: inertia ratio must be finite");
  if (omega_p_override && !(*omega_p_override >= 0.0 && std::isfinite(*omega_p_override))) {
    throw DomainError("dynamics: polhode frequency must be non-negative");
  }
  if (inertia_ratio && omega_p_override) {
    const double derived = omega_s * std::abs(*inertia_ratio) * std::cos(gamma_B);
    if (std::abs(derived - *omega_p_override) > 1e-9 * std::max(std::abs(derived), std::abs(*omega_p_override))) {
      throw DomainError("dynamics: polhode frequency conflicts with the inertia ratio");
    }
  }
  if (inertia_ratio && std::abs(*inertia_ratio) > 0.01) {
    warn("dynamics: |Delta I / I| = " + std::to_string(std::abs(*inertia_ratio)) + " is not small");
  }
}

double RotorDynamics::omega_p() const {
  if (omega_p_override) return *omega_p_override;
  return inertia_ratio ? omega_s * std::abs(*inertia_ratio) * std::cos(gamma_B) : 0.0;
}

double RotorDynamics::omega_rot() const {
  double ratio = 0.0;
  if (inertia_ratio) {
    ratio = *inertia_ratio;
  } else if (omega_p_override && std::cos(gamma_B) != 0.0) {
    ratio = *omega_p_override / (omega_s * std::cos(gamma_B));
  }
  return omega_s * (1.0 - ratio) * std::cos(gamma_B);
}

void Fluxon::validate() const {
  if (!(xi >= 0.0 && xi <= pi)) throw DomainError("fluxon: xi must lie in [0, pi]");
  if (!(eta >= 0.0 && eta < 2.0 * pi)) throw DomainError("fluxon: eta must lie in [0, 2 pi)");
  if (polarity != 1 && polarity != -1) throw DomainError("fluxon: polarity must be +1 or -1");
}

Phases phases(const RotorDynamics& dyn, double t) {
  return {dyn.omega_s * t + dyn.theta_s0, dyn.omega_p() * t + dyn.theta_p0, dyn.omega_r * t + dyn.theta_r0};
}

BodyFrame body_frame_at(double gamma_B, double theta_s, double theta_p) {
  const double sg = std::sin(gamma_B), cg = std::cos(gamma_B);
  const double ss = std::sin(theta_s), cs = std::cos(theta_s);
  const double sp = std::sin(theta_p), cp = std::cos(theta_p);
  return {
      {cg * cs * sp + ss * cp, cg * ss * sp - cs * cp, -sg * sp},
      {cg * cs * cp - ss * sp, cg * ss * cp + cs * sp, -sg * cp},
      {sg * cs, sg * ss, cg},
  };
}

BodyFrame body_frame(const RotorDynamics& dyn, double t) {
  const Phases ph = phases(dyn, t);
  return body_frame_at(dyn.gamma_B, ph.theta_s, ph.theta_p);
}

BodyWeights body_weights(const Fluxon& f) {
  const double sx = std::sin(f.xi);
  return {std::cos(f.xi), sx * std::cos(f.eta), sx * std::sin(f.eta)};
}

Vec3 fluxon_direction(const Fluxon& f, const RotorDynamics& dyn, double t) {
  const BodyFrame b = body_frame(dyn, t);
  const BodyWeights w = body_weights(f);
  return w.wz * b.z + w.wx * b.x + w.wy * b.y;
}

Vec3 loop_normal_at(const RotorDynamics& dyn, double theta_r) {
  const double cb = std::cos(dyn.beta0), sb = std::sin(dyn.beta0);
  const Vec3 x_r{1.0, 0.0, 0.0};
  const Vec3 y_r{0.0, cb, sb};
  const Vec3 z_r{0.0, -sb, cb};
  return std::sin(dyn.alpha) * z_r + std::cos(dyn.alpha) * (std::cos(theta_r) * x_r + std::sin(theta_r) * y_r);
}

Vec3 loop_normal(const RotorDynamics& dyn, double t) { return loop_normal_at(dyn, phases(dyn, t).theta_r); }

double cos_theta_exact(const Fluxon& f, const RotorDynamics& dyn, double t) {
  return dot(fluxon_direction(f, dyn, t), loop_normal(dyn, t));
}

PolhodeModulation slow_amplitudes(const Fluxon& f, const RotorDynamics& dyn, double tau) {
  const double u = tau + dyn.theta_p0 + f.eta;
  const double sx = std::sin(f.xi), cx = std::cos(f.xi);
  const double sg = std::sin(dyn.gamma_B), cg = std::cos(dyn.gamma_B);
  const double P = cx * sg + sx * cg * std::sin(u);
  const double Q = sx * std::cos(u);
  return {std::hypot(P, Q), std::atan2(P, Q), cx * cg - sx * sg * std::sin(u)};
}

double cos_theta_first_order(const Fluxon& f, const RotorDynamics& dyn, double t) {
  const Phases ph = phases(dyn, t);
  const PolhodeModulation m = slow_amplitudes(f, dyn, dyn.omega_p() * t);
  return m.a_sr * std::sin(ph.theta_s - ph.theta_r + m.q_sr) + m.a * (dyn.beta0 * std::sin(ph.theta_r) + dyn.alpha);
}

}  // namespace tflux
