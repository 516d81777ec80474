#include "tflux/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tflux/diagnostics.hpp"

namespace tflux {

namespace {

void check_legendre_args(const char* fn, int l, double x) {
  if (l < 0) throw DomainError(std::string(fn) + ": negative degree");
  if (!(std::abs(x) <= 1.0)) throw DomainError(std::string(fn) + ": |x| > 1 or NaN");
}

void check_modulus(const char* fn, double k, bool allow_one) {
  if (!(k >= 0.0) || k > 1.0 || (k == 1.0 && !allow_one)) {
    throw DomainError(std::string(fn) + ": modulus must lie in [0, 1)");
  }
}

constexpr double kErrTol = 8e-4;

}  // namespace

double legendre_p(int l, double x) {
  check_legendre_args("legendre_p", l, x);
  if (l == 0) return 1.0;
  if (x == 1.0) return 1.0;
  if (x == -1.0) return (l % 2 == 0) ? 1.0 : -1.0;
  double p0 = 1.0, p1 = x;
  for (int n = 1; n < l; ++n) {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

std::vector<double> legendre_p_table(int lmax, double x) {
  check_legendre_args("legendre_p_table", lmax, x);
  std::vector<double> p(lmax + 1);
  p[0] = 1.0;
  if (lmax >= 1) p[1] = x;
  for (int n = 1; n < lmax; ++n) p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - n * p[n - 1]) / (n + 1.0);
  return p;
}

double legendre_p_assoc(int l, int m, double x) {
  check_legendre_args("legendre_p_assoc", l, x);
  if (m < 0 || m > l) throw DomainError("legendre_p_assoc: need 0 <= m <= l");
  if (m == 0) return legendre_p(l, x);
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  double pmm = 1.0;
  for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * s;
  if (l == m) return pmm;
  double p0 = pmm;
  double p1 = x * (2.0 * m + 1.0) * pmm;
  for (int n = m + 1; n < l; ++n) {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - (n + m) * p0) / (n - m + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_p_deriv(int l, double x) {
  check_legendre_args("legendre_p_deriv", l, x);
  // P'_{n+1} = P'_{n-1} + (2n+1) P_n
  double p0 = 1.0, p1 = x;
  double d_prev = 0.0, d_cur = 1.0;
  if (l == 0) return 0.0;
  for (int n = 1; n < l; ++n) {
    const double d_next = d_prev + (2.0 * n + 1.0) * p1;
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
    d_prev = d_cur;
    d_cur = d_next;
  }
  return d_cur;
}

double carlson_rf(double x, double y, double z) {
  if (std::min({x, y, z}) < 0.0 || std::min({x + y, x + z, y + z}) == 0.0 || std::isnan(x + y + z)) {
    throw DomainError("carlson_rf: invalid arguments");
  }
  double dx, dy, dz, ave;
  for (;;) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    ave = (x + y + z) / 3.0;
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kErrTol) break;
  }
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(ave);
}

double carlson_rd(double x, double y, double z) {
  if (std::min(x, y) < 0.0 || x + y == 0.0 || !(z > 0.0)) throw DomainError("carlson_rd: invalid arguments");
  double sum = 0.0, fac = 1.0, dx, dy, dz, ave;
  for (;;) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (z + lam));
    fac *= 0.25;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    ave = 0.2 * (x + y + 3.0 * z);
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kErrTol) break;
  }
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 6.0, c3 = 9.0 / 22.0, c4 = 3.0 / 26.0;
  constexpr double c5 = 0.25 * c3, c6 = 1.5 * c4;
  const double ea = dx * dy, eb = dz * dz, ec = ea - eb, ed = ea - 6.0 * eb, ee = ed + ec + ec;
  return 3.0 * sum + fac * (1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
                         (ave * std::sqrt(ave));
}

double carlson_rc(double x, double y) {
  if (x < 0.0 || !(y > 0.0)) throw DomainError("carlson_rc: invalid arguments");
  double s, ave;
  for (;;) {
    const double lam = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    ave = (x + y + y) / 3.0;
    s = (y - ave) / ave;
    if (std::abs(s) < kErrTol) break;
  }
  return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / std::sqrt(ave);
}

double carlson_rj(double x, double y, double z, double p) {
  if (std::min({x, y, z}) < 0.0 || std::min({x + y, x + z, y + z}) == 0.0 || !(p > 0.0)) {
    throw DomainError("carlson_rj: invalid arguments");
  }
  double sum = 0.0, fac = 1.0, dx, dy, dz, dp, ave;
  for (;;) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    const double a = p * (sx + sy + sz) + sx * sy * sz;
    const double b = p * (p + lam) * (p + lam);
    sum += fac * carlson_rc(a * a, b);
    fac *= 0.25;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    p = 0.25 * (p + lam);
    ave = 0.2 * (x + y + z + p + p);
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    dp = (ave - p) / ave;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz), std::abs(dp)}) < kErrTol) break;
  }
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 3.0, c3 = 3.0 / 22.0, c4 = 3.0 / 26.0;
  constexpr double c5 = 0.75 * c3, c6 = 1.5 * c4, c7 = 0.5 * c2, c8 = c3 + c3;
  const double ea = dx * (dy + dz) + dy * dz, eb = dx * dy * dz, ec = dp * dp;
  const double ed = ea - 3.0 * ec, ee = eb + 2.0 * dp * (ea - ec);
  return 3.0 * sum + fac *
                         (1.0 + ed * (-c1 + c5 * ed - c6 * ee) + eb * (c7 + dp * (-c8 + dp * c4)) +
                          dp * ea * (c2 - dp * c3) - c2 * dp * ec) /
                         (ave * std::sqrt(ave));
}

double ellip_k(double k) {
  check_modulus("ellip_k", k, false);
  return carlson_rf(0.0, (1.0 - k) * (1.0 + k), 1.0);
}

double ellip_e(double k) {
  check_modulus("ellip_e", k, true);
  if (k == 1.0) return 1.0;
  const double kc2 = (1.0 - k) * (1.0 + k);
  return carlson_rf(0.0, kc2, 1.0) - k * k * carlson_rd(0.0, kc2, 1.0) / 3.0;
}

double ellip_pi(double nu, double k) {
  check_modulus("ellip_pi", k, false);
  if (std::isnan(nu)) throw DomainError("ellip_pi: NaN characteristic");
  if (nu == 1.0) throw DomainError("ellip_pi: singular characteristic nu = 1");
  if (nu > 1.0) {
    // Principal value through the complementary characteristic k^2/nu < 1.
    return ellip_k(k) - ellip_pi(k * k / nu, k);
  }
  const double kc2 = (1.0 - k) * (1.0 + k);
  return carlson_rf(0.0, kc2, 1.0) + nu * carlson_rj(0.0, kc2, 1.0, 1.0 - nu) / 3.0;
}

}  // namespace tflux
