#include "tflux/transfer.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "tflux/diagnostics.hpp"
#include "tflux/quadrature.hpp"
#include "tflux/specfun.hpp"

namespace tflux {

namespace {

using cplx = std::complex<double>;

void check_s(const char* fn, double s) {
  if (!(std::abs(s) <= 1.0)) throw DomainError(std::string(fn) + ": s must lie in [-1, 1]");
}

void check_delta(const char* fn, double delta, bool allow_zero = false) {
  if (!(delta > 0.0 || (allow_zero && delta == 0.0)) || !(delta < 1.0)) {
    throw DomainError(std::string(fn) + ": delta must lie in (0, 1)");
  }
}

// Series coefficients of P_{2k+1}: 2 (-1)^k (k + 3/4) g_k eta^{2k+1},
// g_k = Gamma(k + 1/2) / (sqrt(pi) (k + 1)!).
std::vector<double> series_coefficients(double eta, int k_max) {
  std::vector<double> c(k_max + 1);
  double g = 1.0, ep = eta, sign = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    c[k] = 2.0 * sign * (k + 0.75) * g * ep;
    g *= (k + 0.5) / (k + 2.0);
    ep *= eta * eta;
    sign = -sign;
  }
  return c;
}

void series_warning(double delta) {
  if (delta < 0.05) warn("f_series: the Legendre series converges slowly for delta < 0.05");
}

// b(lambda) = lambda/w - (w - 1)/(2 lambda), w = sqrt(1 + lambda^2), in a form
// without cancellation at small lambda.
cplx kernel_b(cplx lam, cplx w) { return lam / w - lam / (2.0 * (1.0 + w)); }

cplx kernel_db(cplx lam, cplx w) {
  const cplx w1 = 1.0 + w;
  return 1.0 / (w * w * w) - 1.0 / (2.0 * w1) + lam * lam / (2.0 * w * w1 * w1);
}

double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// (cot x - 1/x) / x
double cot_defect(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return -1.0 / 3.0 - x2 / 45.0 - 2.0 * x2 * x2 / 945.0;
  }
  return (std::cos(x) / std::sin(x) - 1.0 / x) / x;
}

const quad::Options kIntegralOpt{1e-14, 1e-12, 4000};

}  // namespace

double f_series(double s, double delta, int k_max) {
  check_s("f_series", s);
  check_delta("f_series", delta);
  if (k_max < 0) throw DomainError("f_series: negative k_max");
  series_warning(delta);
  const auto c = series_coefficients(1.0 - delta, k_max);
  const auto p = legendre_p_table(2 * k_max + 1, s);
  double sum = 0.0;
  for (int k = k_max; k >= 0; --k) sum += c[k] * p[2 * k + 1];
  return sum;
}

double f_series_deriv(double s, double delta, int k_max) {
  check_s("f_series_deriv", s);
  check_delta("f_series_deriv", delta);
  if (k_max < 0) throw DomainError("f_series_deriv: negative k_max");
  series_warning(delta);
  const auto c = series_coefficients(1.0 - delta, k_max);
  const auto p = legendre_p_table(2 * k_max + 1, s);
  // P'_{n+1} = P'_{n-1} + (2n+1) P_n
  double d_odd = 1.0, sum = c[0];
  for (int k = 1; k <= k_max; ++k) {
    const int n = 2 * k;
    d_odd += (2.0 * n + 1.0) * p[n];
    sum += c[k] * d_odd;
  }
  return sum;
}

double f_integral(double s, double delta) {
  check_s("f_integral", s);
  check_delta("f_integral", delta);
  if (s < 0.0) return -f_integral(-s, delta);
  if (s == 0.0) return 0.0;
  const double eta = 1.0 - delta;
  const double theta = std::acos(s);
  // psi = theta sin(phi) maps the inverse-square-root endpoint onto a smooth
  // integrand; the remaining sinc factors are bounded away from zero.
  auto integrand = [&](double phi) {
    const double sp = std::sin(phi);
    const double psi = theta * sp;
    const cplx lam = std::polar(eta, psi);
    const cplx w = std::sqrt(1.0 + lam * lam);
    const double r = (std::polar(1.0, 0.5 * psi) * kernel_b(lam, w)).real();
    return r / std::sqrt(sinc(0.5 * theta * (1.0 + sp)) * sinc(0.5 * theta * (1.0 - sp)));
  };
  return 4.0 / pi * quad::integrate(integrand, 0.0, pi / 2, kIntegralOpt).value;
}

double f_integral_deriv(double s, double delta) {
  check_s("f_integral_deriv", s);
  check_delta("f_integral_deriv", delta);
  s = std::abs(s);
  const double eta = 1.0 - delta;
  const double theta = std::acos(s);
  // dF/dtheta = theta * G(theta); dF/ds = -G theta / sin(theta).
  auto integrand = [&](double phi) {
    const double sp = std::sin(phi);
    const double p = 0.5 * (1.0 + sp), q = 0.5 * (1.0 - sp);
    const double psi = std::max(theta * sp, 1e-12);
    const cplx lam = std::polar(eta, psi);
    const cplx w = std::sqrt(1.0 + lam * lam);
    const cplx b = kernel_b(lam, w);
    const cplx e = std::polar(1.0, 0.5 * psi);
    const double r = (e * b).real();
    const double dr = -(e * (0.5 * b + lam * kernel_db(lam, w))).imag();
    const double S = 1.0 / std::sqrt(sinc(theta * p) * sinc(theta * q));
    const double dlogS = -0.5 * (p * p * cot_defect(theta * p) + q * q * cot_defect(theta * q));
    return S * (dr / psi * sp * sp + r * dlogS);
  };
  const double G = 4.0 / pi * quad::integrate(integrand, 0.0, pi / 2, kIntegralOpt).value;
  const double ratio = theta < 1e-8 ? 1.0 : theta / std::sin(theta);
  return -G * ratio;
}

double f_closed(double s, double delta) {
  check_s("f_closed", s);
  check_delta("f_closed", delta, true);
  if (std::abs(s) < closed_form_min_s) {
    throw DomainError("f_closed: ill-conditioned for |s| < " + std::to_string(closed_form_min_s));
  }
  const double eta = 1.0 - delta;
  const double a = std::sqrt((1.0 - s) * (1.0 + s));
  const double D = 1.0 + eta * eta + 2.0 * eta * a;
  const double k = std::sqrt(4.0 * eta * a / D);
  const double bracket = ellip_pi(2.0 * a / (1.0 + a), k) / (1.0 + a) + ellip_pi(-2.0 * a / (1.0 - a), k) / (1.0 - a);
  return s / eta * (1.0 / std::abs(s) - delta * (2.0 - delta) / (pi * std::sqrt(D)) * bracket);
}

double saturation(double delta) {
  if (!(delta >= 0.0) || !(delta < 1.0)) throw DomainError("saturation: delta must lie in [0, 1)");
  const double eta = 1.0 - delta;
  return (1.0 - delta * (2.0 - delta) / std::sqrt(1.0 + eta * eta)) / eta;
}

double slope_at_zero(double delta) {
  check_delta("slope_at_zero", delta);
  const double eta = 1.0 - delta;
  return 2.0 / (pi * eta) * ((1.0 + eta * eta) / (delta * (2.0 - delta)) * ellip_e(eta) - ellip_k(eta));
}

double slope_at_zero_leading(double delta) {
  check_delta("slope_at_zero_leading", delta);
  return 2.0 / (pi * delta);
}

double slope_at_zero_two_term(double delta) {
  check_delta("slope_at_zero_two_term", delta);
  return 2.0 / pi * (1.0 / delta + 2.0);
}

double transition_width(double delta) { return saturation(delta) / slope_at_zero(delta); }

double adjusted_amplitude(double delta) {
  const double f = saturation(delta);
  const double kappa = slope_at_zero(delta);
  if (!(f < kappa)) throw NumericalError("adjusted_amplitude: no solution since f_delta >= kappa_delta");
  // A arctan(kappa/A) increases from 0 to kappa.
  auto g = [&](double A) { return A * std::atan(kappa / A) - f; };
  double lo = 2.0 * f / pi, hi = kappa;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("adjusted_amplitude: bracket expansion failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double f_piecewise_linear(double s, double delta) {
  check_s("f_piecewise_linear", s);
  const double f = saturation(delta);
  return std::clamp(slope_at_zero(delta) * s, -f, f);
}

double f_arctan(double s, double delta) {
  check_s("f_arctan", s);
  const double f = saturation(delta);
  return 2.0 / pi * f * std::atan(0.5 * pi * slope_at_zero(delta) * s / f);
}

double f_arctan_adjusted(double s, double delta) {
  check_s("f_arctan_adjusted", s);
  const double A = adjusted_amplitude(delta);
  return A * std::atan(slope_at_zero(delta) * s / A);
}

SplitSeries split_series(double s, double eta, int k_max) {
  check_s("split_series", s);
  if (!(eta > 0.0) || !(eta < 1.0)) throw DomainError("split_series: eta must lie in (0, 1)");
  const auto p = legendre_p_table(2 * k_max + 1, s);
  double t = 1.0, f1 = 0.0, f2 = 0.0;  // t = (-eta^2)^k (1/2)_k / k!
  for (int k = 0; k <= k_max; ++k) {
    f1 += t * p[2 * k + 1];
    f2 += t / (k + 1.0) * p[2 * k + 1];
    t *= -eta * eta * (k + 0.5) / (k + 1.0);
  }
  return {2.0 * eta * f1, 0.5 * eta * f2};
}

SplitSeries split_series_deriv(double s, double eta, int k_max) {
  check_s("split_series_deriv", s);
  if (!(eta > 0.0) || !(eta < 1.0)) throw DomainError("split_series_deriv: eta must lie in (0, 1)");
  const auto p = legendre_p_table(2 * k_max + 1, s);
  double t = 1.0, f1 = 0.0, f2 = 0.0, d_odd = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) d_odd += (4.0 * k + 1.0) * p[2 * k];
    f1 += t * d_odd;
    f2 += t / (k + 1.0) * d_odd;
    t *= -eta * eta * (k + 0.5) / (k + 1.0);
  }
  return {2.0 * eta * f1, 0.5 * eta * f2};
}

std::string_view to_string(TransferMethod m) {
  switch (m) {
    case TransferMethod::series: return "series";
    case TransferMethod::integral: return "integral";
    case TransferMethod::closed_form: return "closed_form";
    case TransferMethod::piecewise_linear: return "piecewise_linear";
    case TransferMethod::arctan: return "arctan";
    case TransferMethod::arctan_adjusted: return "arctan_adjusted";
  }
  return "unknown";
}

TransferMethod parse_transfer_method(std::string_view name) {
  for (auto m : {TransferMethod::series, TransferMethod::integral, TransferMethod::closed_form,
                 TransferMethod::piecewise_linear, TransferMethod::arctan, TransferMethod::arctan_adjusted}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown transfer method '" + std::string(name) + "'");
}

TransferCurve::TransferCurve(double delta, TransferMethod method, int series_terms)
    : delta_(delta), method_(method), series_terms_(series_terms) {
  check_delta("TransferCurve", delta);
  if (series_terms < 0) throw DomainError("TransferCurve: negative series_terms");
  f_ = saturation(delta);
  kappa_ = slope_at_zero(delta);
  width_ = f_ / kappa_;
  a_ = f_ < kappa_ ? adjusted_amplitude(delta) : std::numeric_limits<double>::quiet_NaN();
  if (method == TransferMethod::arctan_adjusted && std::isnan(a_)) {
    throw NumericalError("TransferCurve: adjusted arctan amplitude does not exist for this delta");
  }
}

double TransferCurve::value(double s) const {
  switch (method_) {
    case TransferMethod::series: return f_series(s, delta_, series_terms_);
    case TransferMethod::integral: return f_integral(s, delta_);
    case TransferMethod::closed_form:
      return std::abs(s) < closed_form_min_s ? f_integral(s, delta_) : f_closed(s, delta_);
    case TransferMethod::piecewise_linear: return std::clamp(kappa_ * s, -f_, f_);
    case TransferMethod::arctan: return 2.0 / pi * f_ * std::atan(0.5 * pi * kappa_ * s / f_);
    case TransferMethod::arctan_adjusted: return a_ * std::atan(kappa_ * s / a_);
  }
  return 0.0;
}

double TransferCurve::derivative(double s) const {
  switch (method_) {
    case TransferMethod::series: return f_series_deriv(s, delta_, series_terms_);
    case TransferMethod::integral:
    case TransferMethod::closed_form: return f_integral_deriv(s, delta_);
    case TransferMethod::piecewise_linear: return std::abs(kappa_ * s) < f_ ? kappa_ : 0.0;
    case TransferMethod::arctan: {
      const double x = 0.5 * pi * kappa_ * s / f_;
      return kappa_ / (1.0 + x * x);
    }
    case TransferMethod::arctan_adjusted: {
      const double x = kappa_ * s / a_;
      return kappa_ / (1.0 + x * x);
    }
  }
  return 0.0;
}

}  // namespace tflux
