#include "tflux/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tflux/diagnostics.hpp"
#include "tflux/specfun.hpp"

namespace tflux {

GyroGeometry GyroGeometry::from_radii(double r_g, double R) {
  GyroGeometry g{r_g, R, (R - r_g) / R};
  g.validate();
  return g;
}

GyroGeometry GyroGeometry::from_delta(double delta, double R) {
  GyroGeometry g{R * (1.0 - delta), R, delta};
  g.validate();
  return g;
}

void GyroGeometry::validate() const {
  if (!(r_g > 0.0) || !(R > r_g)) throw DomainError("geometry: need 0 < r_g < R");
  if (!(delta > 0.0) || !(delta < 1.0)) throw DomainError("geometry: need 0 < delta < 1");
  if (std::abs(delta - (R - r_g) / R) > 1e-12) throw DomainError("geometry: delta inconsistent with r_g and R");
}

double cos_gamma(const FieldPoint& obs, const SourcePoint& src) {
  const double c = std::cos(obs.theta) * std::cos(src.theta_f) +
                   std::sin(obs.theta) * std::sin(src.theta_f) * std::cos(obs.phi - src.phi_f);
  return std::clamp(c, -1.0, 1.0);
}

namespace {

// 1 - cos gamma without cancellation near the source direction.
double one_minus_cos_gamma(const FieldPoint& obs, const SourcePoint& src) {
  const double a = std::sin(0.5 * (obs.theta - src.theta_f));
  const double b = std::sin(0.5 * (obs.phi - src.phi_f));
  return std::clamp(2.0 * (a * a + std::sin(obs.theta) * std::sin(src.theta_f) * b * b), 0.0, 2.0);
}

void require_exterior(const char* fn, const FieldPoint& obs, const GyroGeometry& geom, bool allow_surface) {
  if (!(obs.r > geom.r_g) && !(allow_surface && obs.r == geom.r_g)) {
    throw DomainError(std::string(fn) + ": observation point inside the rotor");
  }
}

// Potential pieces in terms of (r, zeta = cos gamma).
struct Local {
  double D;    // |r - r_f|
  double L;    // log term
  double Lz;   // dL/dzeta
  double eta;  // r_g / r
};

Local local_terms(double r, double omz, double r_g) {
  const double zeta = 1.0 - omz;
  const double eta = r_g / r;
  const double W = std::sqrt((1.0 - eta) * (1.0 - eta) + 2.0 * eta * omz);
  const double D = r * W;
  if (D == 0.0) throw DomainError("field evaluated at the source point");
  Local t{D, 0.0, 0.0, eta};
  if (zeta < 0.0) {
    t.L = std::log((eta - zeta + W) / omz);
    t.Lz = (-1.0 - eta / W) / (eta - zeta + W) + 1.0 / omz;
  } else {
    // (eta - zeta + W)(W + zeta - eta) = 1 - zeta^2 removes the 0/0 on the source ray.
    t.L = std::log((2.0 - omz) / (W + zeta - eta));
    t.Lz = 1.0 / (2.0 - omz) - (1.0 - eta / W) / (W + zeta - eta);
  }
  return t;
}

}  // namespace

double psi_series(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom, int l_max) {
  require_exterior("psi_series", obs, geom, false);
  if (l_max < 0) throw DomainError("psi_series: negative l_max");
  const double eta = geom.r_g / obs.r;
  const auto p = legendre_p_table(l_max, cos_gamma(obs, src));
  double sum = 0.0, term = 0.0, eta_pow = eta;
  for (int l = 0; l <= l_max; ++l) {
    term = (2.0 * l + 1.0) / (l + 1.0) * eta_pow * p[l];
    sum += term;
    eta_pow *= eta;
  }
  // A vanishing P_l can make a single term small by accident; use the envelope.
  const double tail = (2.0 * l_max + 1.0) / (l_max + 1.0) * eta_pow / eta;
  if (l_max > 0 && tail > 1e-12 * std::abs(sum)) {
    warn("psi_series: truncated at l_max = " + std::to_string(l_max) + " before convergence");
  }
  return sum / (4.0 * pi * geom.r_g);
}

double b_r_series(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom, int l_max) {
  require_exterior("b_r_series", obs, geom, false);
  if (l_max < 0) throw DomainError("b_r_series: negative l_max");
  const double eta = geom.r_g / obs.r;
  const auto p = legendre_p_table(l_max, cos_gamma(obs, src));
  double sum = 0.0, eta_pow = eta;
  for (int l = 0; l <= l_max; ++l) {
    sum += (2.0 * l + 1.0) * eta_pow * p[l];
    eta_pow *= eta;
  }
  const double tail = (2.0 * l_max + 1.0) * eta_pow / eta;
  if (l_max > 0 && tail > 1e-12 * std::abs(sum)) {
    warn("b_r_series: truncated at l_max = " + std::to_string(l_max) + " before convergence");
  }
  return sum / (4.0 * pi * geom.r_g * obs.r);
}

double psi_closed(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom) {
  require_exterior("psi_closed", obs, geom, true);
  const Local t = local_terms(obs.r, one_minus_cos_gamma(obs, src), geom.r_g);
  return (1.0 / t.D - t.L / (2.0 * geom.r_g)) / (2.0 * pi);
}

double greens_dirichlet(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom) {
  require_exterior("greens_dirichlet", obs, geom, true);
  const double r = obs.r, a = geom.r_g;
  const double D2 = (r - a) * (r - a) + 2.0 * r * a * one_minus_cos_gamma(obs, src);
  if (D2 == 0.0) throw DomainError("greens_dirichlet: evaluated at the source point");
  return (r - a) * (r + a) / (4.0 * pi * D2 * std::sqrt(D2));
}

SphericalVector b_field(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom) {
  require_exterior("b_field", obs, geom, false);
  const double r = obs.r, a = geom.r_g;
  const double omz = one_minus_cos_gamma(obs, src);
  const Local t = local_terms(r, omz, a);
  const double D3 = t.D * t.D * t.D;
  const double psi_r = (-(r - a + a * omz) / D3 + 1.0 / (2.0 * r * t.D)) / (2.0 * pi);
  const double psi_z = (r * a / D3 - t.Lz / (2.0 * a)) / (2.0 * pi);
  const double dphi = obs.phi - src.phi_f;
  const double dzeta_dtheta = -std::sin(obs.theta) * std::cos(src.theta_f) +
                              std::cos(obs.theta) * std::sin(src.theta_f) * std::cos(dphi);
  return {-psi_r, -psi_z * dzeta_dtheta / r, psi_z * std::sin(src.theta_f) * std::sin(dphi) / r};
}

double bz_on_loop_plane(double rho, double phi, const SourcePoint& src, const GyroGeometry& geom) {
  if (!(rho > 0.0)) throw DomainError("bz_on_loop_plane: rho must be positive");
  const double a = geom.r_g;
  const double st = std::sin(src.theta_f), ct = std::cos(src.theta_f);
  if (std::abs(ct) < 1e-15) return 0.0;
  const double sc = st * std::cos(phi);
  const double X = std::sqrt(a * a - 2.0 * a * rho * sc + rho * rho);
  if (X == 0.0) throw DomainError("bz_on_loop_plane: evaluated at the source point");
  const double Yp = 1.0 + sc, Ym = 1.0 - sc;
  const double a2r = 2.0 * a * a * rho;
  const double bracket = 1.0 / (X * X * X) + (rho - a * sc) / (a2r * X * Yp * Ym) + sc / (a2r * Yp * Ym) - 1.0 / (a2r * Ym);
  return -a * ct * bracket / (2.0 * pi);
}

}  // namespace tflux
