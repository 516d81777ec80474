#pragma once

#include <vector>

namespace tflux {

/// Legendre polynomial P_l(x), |x| <= 1, by forward recurrence.
double legendre_p(int l, double x);

/// P_0(x) .. P_lmax(x) in one pass.
std::vector<double> legendre_p_table(int lmax, double x);

/// Associated Legendre function P_l^m(x) without the Condon–Shortley phase,
/// so P_1^1(x) = +sqrt(1 - x^2) and the addition theorem reads
/// P_l(cos g) = P_l P_l + 2 sum_m (l-m)!/(l+m)! P_l^m P_l^m cos(m dphi).
double legendre_p_assoc(int l, int m, double x);

/// dP_l/dx, finite at the endpoints.
double legendre_p_deriv(int l, double x);

// Carlson symmetric integrals (duplication algorithm).
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);
double carlson_rj(double x, double y, double z, double p);
double carlson_rc(double x, double y);

/// Complete elliptic integral of the first kind in the modulus k, 0 <= k < 1.
double ellip_k(double k);

/// Complete elliptic integral of the second kind, 0 <= k <= 1.
double ellip_e(double k);

/// Complete elliptic integral of the third kind,
///   Pi(nu, k) = int_0^{pi/2} dpsi / ((1 - nu sin^2 psi) sqrt(1 - k^2 sin^2 psi)).
/// For nu > 1 the Cauchy principal value is returned.
double ellip_pi(double nu, double k);

}  // namespace tflux
