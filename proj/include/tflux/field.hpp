#pragma once

namespace tflux {

/// Rotor radius r_g, pick-up loop radius R and the dimensionless gap
/// delta = (R - r_g)/R.
struct GyroGeometry {
  double r_g = 0.975;
  double R = 1.0;
  double delta = 0.025;

  static GyroGeometry from_radii(double r_g, double R);
  static GyroGeometry from_delta(double delta, double R = 1.0);
  void validate() const;
};

/// Source direction on the rotor surface (radius r_g implied).
struct SourcePoint {
  double theta_f = 0.0;
  double phi_f = 0.0;
};

struct FieldPoint {
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Vector in the local spherical basis (e_r, e_theta, e_phi).
struct SphericalVector {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

double cos_gamma(const FieldPoint& obs, const SourcePoint& src);

// All potentials and fields below are per flux quantum (Phi_0 = 1).

/// Legendre series of the exterior Neumann potential through degree l_max.
/// Warns when the last retained term is not negligible against the sum.
double psi_series(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom, int l_max);

/// Radial field B_r = -dPsi/dr from the term-by-term differentiated series.
double b_r_series(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom, int l_max);

/// Closed-form exterior Neumann potential, finite on the ray through the
/// source for r > r_g.
double psi_closed(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom);

/// Exterior Dirichlet Green's function (r^2 - r_g^2) / (4 pi |r - r_f|^3).
double greens_dirichlet(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom);

/// B = -grad Psi in spherical components at obs.
SphericalVector b_field(const FieldPoint& obs, const SourcePoint& src, const GyroGeometry& geom);

/// B_z on the plane z = 0 at polar radius rho and azimuth phi, with the
/// source azimuth taken as 0. The continued field is singular at rho = 0.
double bz_on_loop_plane(double rho, double phi, const SourcePoint& src, const GyroGeometry& geom);

}  // namespace tflux
